//! `GU(2n, I, Γ)` for a square-zero ideal.
//!
//! With `I² = 0`, `e + X` lies in the congruence subgroup iff each block of
//! entries `{(a, b), (-b, -a)}` of `X` satisfies a condition involving that
//! block alone, and `(e + X)(e + Y) = e + X + Y`. The group is the additive
//! group of admissible `X`, a direct sum over blocks.

use rand::Rng;
use rayon::prelude::*;
use rustc_hash::FxHashSet;

use super::store::Store;
use crate::error::{Error, Result};
use crate::form_ideal::FormIdeal;
use crate::forms::congruence_membership;
use crate::matrix::{omega_pos, KeyCodec, OmegaIndex, UMatrix};
use crate::ring::{Elem, FormRing, InvolutiveRing};

#[derive(Clone, Debug)]
struct Block {
    // (row, col) positions
    cells: Vec<(usize, usize)>,
    solutions: Vec<Vec<Elem>>,
    basis: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug)]
pub struct LayerGroup {
    n: usize,
    blocks: Vec<Block>,
}

pub fn is_square_zero(ring: &InvolutiveRing, fi: &FormIdeal) -> bool {
    fi.ideal.members.iter().all(|a| fi.ideal.members.iter().all(|b| ring.mul(a, b) == ring.zero()))
}

impl LayerGroup {
    pub fn new(fr: &FormRing, fi: &FormIdeal, n: usize) -> Result<Self> {
        let ring = &*fr.ring;
        if !is_square_zero(ring, fi) {
            return Err(Error::Inadmissible("layer mode needs I·I = 0".into()));
        }
        let d = 2 * n;
        let mut seen = vec![false; d * d];
        let mut cells_list = Vec::new();
        for r in 0..d {
            for c in 0..d {
                if seen[r * d + c] {
                    continue;
                }
                let a = OmegaIndex::from_pos(n, r).0;
                let b = OmegaIndex::from_pos(n, c).0;
                let (pr, pc) = (omega_pos(n, -b), omega_pos(n, -a));
                let mut cells = vec![(r, c)];
                seen[r * d + c] = true;
                if !seen[pr * d + pc] {
                    seen[pr * d + pc] = true;
                    cells.push((pr, pc));
                }
                cells_list.push(cells);
            }
        }
        let members = fi.ideal.members.to_vec();
        let blocks = cells_list
            .into_par_iter()
            .map(|cells| {
                let mut solutions = Vec::new();
                let k = cells.len();
                let mut idx = vec![0usize; k];
                loop {
                    let vals: Vec<Elem> = idx.iter().map(|&i| members[i]).collect();
                    let mut m = UMatrix::identity(ring, n);
                    for (&(r, c), &v) in cells.iter().zip(&vals) {
                        m.set_at(r, c, ring.add(m.at(r, c), v));
                    }
                    if congruence_membership(fr, fi, &m) {
                        solutions.push(vals);
                    }
                    if !advance(&mut idx, members.len()) {
                        break;
                    }
                }
                let basis = additive_basis(ring, &solutions);
                Block { cells, solutions, basis }
            })
            .collect();
        Ok(LayerGroup { n, blocks })
    }

    pub fn log2_size(&self) -> f64 {
        self.blocks.iter().map(|b| (b.solutions.len() as f64).log2()).sum()
    }

    /// Order, if it fits in `u128`.
    pub fn size(&self) -> Option<u128> {
        self.blocks.iter().try_fold(1u128, |acc, b| acc.checked_mul(b.solutions.len() as u128))
    }

    fn element(&self, ring: &InvolutiveRing, choice: impl Iterator<Item = usize>) -> UMatrix {
        let mut m = UMatrix::identity(ring, self.n);
        for (b, i) in self.blocks.iter().zip(choice) {
            for (&(r, c), &v) in b.cells.iter().zip(&b.solutions[i]) {
                m.set_at(r, c, ring.add(m.at(r, c), v));
            }
        }
        m
    }

    fn from_cells(&self, ring: &InvolutiveRing, block: &Block, vals: &[Elem]) -> UMatrix {
        let mut m = UMatrix::identity(ring, self.n);
        for (&(r, c), &v) in block.cells.iter().zip(vals) {
            m.set_at(r, c, ring.add(m.at(r, c), v));
        }
        m
    }

    /// A generating set: an additive basis of each block.
    pub fn generators(&self, ring: &InvolutiveRing) -> Vec<UMatrix> {
        self.blocks
            .iter()
            .flat_map(|b| b.basis.iter().map(move |v| self.from_cells(ring, b, v)))
            .collect()
    }

    /// Uniform sample.
    pub fn sample<R: Rng>(&self, ring: &InvolutiveRing, rng: &mut R) -> UMatrix {
        let choice: Vec<usize> = self.blocks.iter().map(|b| rng.gen_range(0..b.solutions.len())).collect();
        self.element(ring, choice.into_iter())
    }

    pub fn enumerate(&self, ring: &InvolutiveRing, budget: usize) -> Result<Store> {
        let size = match self.size() {
            Some(s) if s <= budget as u128 => s as usize,
            _ => return Err(Error::BudgetExceeded { budget }),
        };
        let codec = KeyCodec::new(ring, self.n)?;
        let radices: Vec<usize> = self.blocks.iter().map(|b| b.solutions.len()).collect();
        let keys: Vec<_> = (0..size)
            .into_par_iter()
            .map(|mut t| {
                let choice = radices.iter().map(|&r| {
                    let i = t % r;
                    t /= r;
                    i
                });
                codec.encode(&self.element(ring, choice))
            })
            .collect();
        Ok(Store::from_keys(codec, keys))
    }
}

fn advance(idx: &mut [usize], radix: usize) -> bool {
    for x in idx.iter_mut() {
        *x += 1;
        if *x < radix {
            return true;
        }
        *x = 0;
    }
    false
}

// greedy generating set of an additive group of tuples
fn additive_basis(ring: &InvolutiveRing, sols: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let Some(first) = sols.first() else { return Vec::new() };
    let zero = vec![ring.zero(); first.len()];
    let mut span: FxHashSet<Vec<Elem>> = FxHashSet::default();
    span.insert(zero);
    let mut basis = Vec::new();
    for s in sols {
        if span.contains(s) {
            continue;
        }
        basis.push(s.clone());
        let mut frontier: Vec<Vec<Elem>> = span.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for v in &frontier {
                let w: Vec<Elem> = v.iter().zip(s).map(|(&a, &b)| ring.add(a, b)).collect();
                if span.insert(w.clone()) {
                    next.push(w);
                }
            }
            frontier = next;
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::engine::subgroup::{closure_enumerate, DEFAULT_BUDGET};
    use crate::form_ideal::Ideal;
    use crate::subset::Subset;
    use crate::ring::zmod;

    fn z4() -> FormRing {
        FormRing::with_bound(Arc::new(zmod(4).unwrap()), 3, true).unwrap()
    }

    fn two(gamma: &[Elem]) -> FormIdeal {
        let mut g = Subset::EMPTY;
        for &x in gamma {
            g.insert(x);
        }
        FormIdeal { ideal: Ideal { members: Subset::EMPTY.with(0).with(2) }, gamma: g }
    }

    #[test]
    fn z4_layer_orders() {
        let fr = z4();
        assert_eq!(LayerGroup::new(&fr, &two(&[0, 2]), 3).unwrap().size(), Some(1 << 21));
        assert_eq!(LayerGroup::new(&fr, &two(&[0]), 3).unwrap().size(), Some(1 << 15));
        assert!(LayerGroup::new(&fr, &FormIdeal::unit(&fr), 3).is_err());
    }

    #[test]
    fn generators_span_the_layer() {
        let fr = z4();
        for n in 1..=2 {
            let layer = LayerGroup::new(&fr, &two(&[0, 2]), n).unwrap();
            let store = layer.enumerate(&fr.ring, DEFAULT_BUDGET).unwrap();
            let h = closure_enumerate(&fr.ring, n, &layer.generators(&fr.ring), DEFAULT_BUDGET).unwrap();
            assert!(h.store.unwrap().same_elements(&store));
            // oracle: brute force over all e + X with X in I^{4n²}
            let d = 2 * n;
            let mut count = 0usize;
            for bits in 0u64..(1 << (d * d)) {
                let mut m = UMatrix::identity(&fr.ring, n);
                for k in 0..d * d {
                    if bits >> k & 1 == 1 {
                        m.set_at(k / d, k % d, fr.ring.add(m.at(k / d, k % d), 2));
                    }
                }
                if congruence_membership(&fr, &two(&[0, 2]), &m) {
                    count += 1;
                    assert!(store.contains(&m));
                }
            }
            assert_eq!(count, store.len());
        }
    }

    #[test]
    fn samples_are_members() {
        let fr = z4();
        let fi = two(&[0]);
        let layer = LayerGroup::new(&fr, &fi, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            assert!(congruence_membership(&fr, &fi, &layer.sample(&fr.ring, &mut rng)));
        }
    }
}
