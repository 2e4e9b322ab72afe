//! Column-by-column enumeration of `GU(2n, I, Γ)` for arbitrary levels.
//!
//! Column `j` ranges over `e_j + I^{2n}` with `f(v, v) ∈ Γ`, and must pair
//! with every earlier column `k` as `h(v_k, v_j) = h(e_k, e_j)`.
//! Hermitian symmetry covers the reversed pairs.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use super::store::Store;
use crate::error::{Error, Result};
use crate::form_ideal::FormIdeal;
use crate::forms::{eval_f, eval_h, h_basis};
use crate::matrix::{omega_pos, Key, KeyCodec, UMatrix};
use crate::ring::{Elem, FormRing};

/// Limit on candidate columns per position.
pub const MAX_CANDIDATES: usize = 1 << 16;

struct Search<'a> {
    fr: &'a FormRing,
    n: usize,
    // positions in fill order: 1, -1, 2, -2, ...
    order: Vec<usize>,
    candidates: Vec<Vec<Vec<Elem>>>,
}

impl<'a> Search<'a> {
    fn new(fr: &'a FormRing, fi: &FormIdeal, n: usize) -> Result<Self> {
        let ring = &*fr.ring;
        let d = 2 * n;
        let members = fi.ideal.members.to_vec();
        let count = members.len().checked_pow(d as u32).filter(|&c| c <= MAX_CANDIDATES);
        let Some(count) = count else {
            return Err(Error::BudgetExceeded { budget: MAX_CANDIDATES });
        };
        let order: Vec<usize> =
            (1..=n as i32).flat_map(|i| [omega_pos(n, i), omega_pos(n, -i)]).collect();
        let candidates = order
            .iter()
            .map(|&p| {
                (0..count)
                    .filter_map(|mut t| {
                        let mut v: Vec<Elem> = (0..d)
                            .map(|_| {
                                let x = members[t % members.len()];
                                t /= members.len();
                                x
                            })
                            .collect();
                        v[p] = ring.add(v[p], ring.one());
                        let ok = fi.gamma.contains(eval_f(ring, n, &v, &v))
                            && eval_h(fr, n, &v, &v) == h_basis(fr, n, p, p);
                        ok.then_some(v)
                    })
                    .collect()
            })
            .collect();
        Ok(Search { fr, n, order, candidates })
    }

    fn compatible(&self, chosen: &[&Vec<Elem>], step: usize, v: &[Elem]) -> bool {
        let p = self.order[step];
        chosen
            .iter()
            .zip(&self.order)
            .all(|(u, &q)| eval_h(self.fr, self.n, u, v) == h_basis(self.fr, self.n, q, p))
    }

    fn assemble(&self, chosen: &[&Vec<Elem>]) -> UMatrix {
        let d = 2 * self.n;
        let mut m = UMatrix::zero(&self.fr.ring, self.n);
        for (col, &p) in chosen.iter().zip(&self.order) {
            for r in 0..d {
                m.set_at(r, p, col[r]);
            }
        }
        m
    }
}

fn dfs<'s>(
    s: &'s Search<'_>,
    codec: &KeyCodec,
    chosen: &mut Vec<&'s Vec<Elem>>,
    out: &mut Vec<Key>,
    counter: &AtomicUsize,
    stop: &AtomicBool,
    budget: usize,
) {
    if stop.load(Ordering::Relaxed) {
        return;
    }
    let step = chosen.len();
    if step == s.order.len() {
        if counter.fetch_add(1, Ordering::Relaxed) >= budget {
            stop.store(true, Ordering::Relaxed);
            return;
        }
        out.push(codec.encode(&s.assemble(chosen)));
        return;
    }
    for v in &s.candidates[step] {
        if s.compatible(chosen, step, v) {
            chosen.push(v);
            dfs(s, codec, chosen, out, counter, stop, budget);
            chosen.pop();
        }
    }
}

/// Every element of `GU(2n, I, Γ)`, in lexicographic search order.
pub fn enumerate_congruence(fr: &FormRing, fi: &FormIdeal, n: usize, budget: usize) -> Result<Store> {
    let codec = KeyCodec::new(&fr.ring, n)?;
    let search = Search::new(fr, fi, n)?;
    let counter = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let parts: Vec<Vec<Key>> = search.candidates[0]
        .par_iter()
        .map(|v| {
            let mut out = Vec::new();
            let mut chosen = vec![v];
            dfs(&search, &codec, &mut chosen, &mut out, &counter, &stop, budget);
            out
        })
        .collect();
    if stop.load(Ordering::Relaxed) {
        return Err(Error::BudgetExceeded { budget });
    }
    Ok(Store::from_keys(codec, parts.into_iter().flatten()))
}

/// A member found by search with shuffled candidate order; `None` when
/// `attempts` node visits were not enough.
pub fn random_member<R: Rng>(fr: &FormRing, fi: &FormIdeal, n: usize, rng: &mut R, attempts: usize) -> Result<Option<UMatrix>> {
    let search = Search::new(fr, fi, n)?;
    let orders: Vec<Vec<usize>> = search
        .candidates
        .iter()
        .map(|c| {
            let mut idx: Vec<usize> = (0..c.len()).collect();
            idx.shuffle(rng);
            idx
        })
        .collect();
    let mut visits = 0usize;
    let mut chosen: Vec<&Vec<Elem>> = Vec::new();
    // iterative search with an explicit cursor per level
    let mut cursor = vec![0usize; search.order.len()];
    loop {
        let step = chosen.len();
        if step == search.order.len() {
            return Ok(Some(search.assemble(&chosen)));
        }
        let mut advanced = false;
        while cursor[step] < orders[step].len() {
            let v = &search.candidates[step][orders[step][cursor[step]]];
            cursor[step] += 1;
            visits += 1;
            if visits > attempts {
                return Ok(None);
            }
            if search.compatible(&chosen, step, v) {
                chosen.push(v);
                advanced = true;
                break;
            }
        }
        if !advanced {
            if step == 0 {
                return Ok(None);
            }
            cursor[step] = 0;
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::forms::congruence_membership;
    use crate::ring::zmod;

    fn f2(maximal: bool) -> FormRing {
        FormRing::with_bound(Arc::new(zmod(2).unwrap()), 1, maximal).unwrap()
    }

    #[test]
    fn small_orders() {
        // |Sp2(2)| = 6, |Sp4(2)| = 720, |O+(4,2)| = 72
        let fr = f2(true);
        let unit = FormIdeal::unit(&fr);
        assert_eq!(enumerate_congruence(&fr, &unit, 1, 1 << 20).unwrap().len(), 6);
        assert_eq!(enumerate_congruence(&fr, &unit, 2, 1 << 20).unwrap().len(), 720);
        let fr = f2(false);
        let unit = FormIdeal::unit(&fr);
        assert_eq!(enumerate_congruence(&fr, &unit, 2, 1 << 20).unwrap().len(), 72);
        assert!(matches!(enumerate_congruence(&fr, &unit, 2, 10), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn random_members_are_members() {
        let fr = FormRing::with_bound(Arc::new(zmod(4).unwrap()), 3, true).unwrap();
        let unit = FormIdeal::unit(&fr);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let m = random_member(&fr, &unit, 2, &mut rng, 1 << 20).unwrap().unwrap();
            assert!(congruence_membership(&fr, &unit, &m));
        }
    }
}
