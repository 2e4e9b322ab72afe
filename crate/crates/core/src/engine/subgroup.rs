//! Subgroup handles, incremental closure, normal closure and mixed commutators.

use std::collections::VecDeque;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::store::{KeySet, Store};
use crate::error::{Error, Result};
use crate::matrix::{Key, KeyCodec, UMatrix};
use crate::ring::InvolutiveRing;

pub const DEFAULT_BUDGET: usize = 1 << 22;

// below this coset size products are computed on the calling thread
const PAR_THRESHOLD: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Every element is enumerated.
    Exact,
    /// Generators only; enumeration not attempted.
    Generated,
    /// Enumeration attempted and abandoned at the budget.
    BudgetExceeded,
    /// Generators are known members that may generate a proper subgroup.
    Sampled,
}

/// A subgroup given by generators and, when it fits the budget, its elements.
#[derive(Clone, Debug)]
pub struct SubgroupHandle {
    pub n: usize,
    pub generators: Vec<UMatrix>,
    pub store: Option<Arc<Store>>,
    pub budget: usize,
    pub status: Status,
    /// Whether `generators` generate the whole subgroup.
    pub generators_complete: bool,
}

impl SubgroupHandle {
    pub fn trivial(ring: &InvolutiveRing, n: usize) -> Result<Self> {
        let codec = KeyCodec::new(ring, n)?;
        let mut store = Store::new(codec);
        store.insert(&UMatrix::identity(ring, n));
        Ok(SubgroupHandle {
            n,
            generators: Vec::new(),
            store: Some(Arc::new(store)),
            budget: 1,
            status: Status::Exact,
            generators_complete: true,
        })
    }

    /// Known generators, no enumeration.
    pub fn from_generators(n: usize, generators: Vec<UMatrix>, budget: usize) -> Self {
        SubgroupHandle { n, generators, store: None, budget, status: Status::Generated, generators_complete: true }
    }

    pub fn size(&self) -> Option<usize> {
        self.store.as_ref().map(|s| s.len())
    }

    pub fn is_exact(&self) -> bool {
        self.store.is_some()
    }

    pub fn is_trivial(&self) -> Option<bool> {
        self.size().map(|s| s == 1)
    }

    /// `None` without an enumerated store.
    pub fn contains(&self, m: &UMatrix) -> Option<bool> {
        self.store.as_ref().map(|s| s.contains(m))
    }

    /// Exact equality of two enumerated subgroups.
    pub fn same_elements(&self, other: &SubgroupHandle) -> Option<bool> {
        match (&self.store, &other.store) {
            (Some(a), Some(b)) => Some(a.same_elements(b)),
            _ => None,
        }
    }
}

/// Incremental closure: the element set is always a subgroup, grown one
/// generator at a time by adjoining right cosets of the previous subgroup.
pub struct GroupBuilder<'a> {
    ring: &'a InvolutiveRing,
    n: usize,
    codec: KeyCodec,
    elements: KeySet,
    gens: Vec<UMatrix>,
    budget: usize,
}

impl<'a> GroupBuilder<'a> {
    pub fn new(ring: &'a InvolutiveRing, n: usize, budget: usize) -> Result<Self> {
        let codec = KeyCodec::new(ring, n)?;
        let mut elements = KeySet::default();
        elements.insert(codec.encode(&UMatrix::identity(ring, n)));
        Ok(GroupBuilder { ring, n, codec, elements, gens: Vec::new(), budget })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, m: &UMatrix) -> bool {
        self.elements.contains(&self.codec.encode(m))
    }

    /// Irredundant generators added so far.
    pub fn generators(&self) -> &[UMatrix] {
        &self.gens
    }

    /// Adjoins `g`; returns whether the group grew.
    pub fn add_generator(&mut self, g: &UMatrix) -> Result<bool> {
        if self.contains(g) {
            return Ok(false);
        }
        self.gens.push(g.clone());
        let h_len = self.elements.len();
        let mut reps = vec![g.clone()];
        self.add_coset(h_len, g)?;
        let mut next = 0;
        while next < reps.len() {
            let batch: Vec<UMatrix> = reps[next..].to_vec();
            next = reps.len();
            let gens = &self.gens;
            let ring = self.ring;
            let products: Vec<UMatrix> = if batch.len() * gens.len() >= 64 {
                batch.par_iter().flat_map_iter(|r| gens.iter().map(move |s| r.mul(ring, s))).collect()
            } else {
                batch.iter().flat_map(|r| gens.iter().map(move |s| r.mul(ring, s))).collect()
            };
            for x in products {
                if !self.contains(&x) {
                    self.add_coset(h_len, &x)?;
                    reps.push(x);
                }
            }
        }
        Ok(true)
    }

    // inserts H·x where H is the first `h_len` elements
    fn add_coset(&mut self, h_len: usize, x: &UMatrix) -> Result<()> {
        if self.elements.len() + h_len > self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        let codec = self.codec;
        let ring = self.ring;
        let elements = &self.elements;
        let product = |buf: &mut (UMatrix, UMatrix), k: usize| -> Key {
            codec.decode_into(elements.get_index(k).expect("in range"), &mut buf.0);
            buf.0.mul_into(ring, x, &mut buf.1);
            codec.encode(&buf.1)
        };
        let init = || (UMatrix::identity(ring, self.n), UMatrix::identity(ring, self.n));
        let keys: Vec<Key> = if h_len >= PAR_THRESHOLD {
            (0..h_len).into_par_iter().map_init(init, product).collect()
        } else {
            let mut buf = init();
            (0..h_len).map(|k| product(&mut buf, k)).collect()
        };
        self.elements.extend(keys);
        Ok(())
    }

    pub fn into_store(self) -> Store {
        Store::from_set(self.codec, self.elements)
    }

    pub fn into_handle(self) -> SubgroupHandle {
        let n = self.n;
        let budget = self.budget;
        let generators = self.gens.clone();
        SubgroupHandle {
            n,
            generators,
            store: Some(Arc::new(self.into_store())),
            budget,
            status: Status::Exact,
            generators_complete: true,
        }
    }
}

/// Subgroup generated by `gens`. Over budget the handle keeps the
/// generators and reports [`Status::BudgetExceeded`].
pub fn closure_enumerate(ring: &InvolutiveRing, n: usize, gens: &[UMatrix], budget: usize) -> Result<SubgroupHandle> {
    let mut b = GroupBuilder::new(ring, n, budget)?;
    for g in gens {
        if let Err(e) = b.add_generator(g) {
            return over_budget(e, n, gens.to_vec(), budget, true);
        }
    }
    Ok(b.into_handle())
}

fn over_budget(e: Error, n: usize, gens: Vec<UMatrix>, budget: usize, complete: bool) -> Result<SubgroupHandle> {
    match e {
        Error::BudgetExceeded { .. } => Ok(SubgroupHandle {
            n,
            generators: gens,
            store: None,
            budget,
            status: Status::BudgetExceeded,
            generators_complete: complete,
        }),
        e => Err(e),
    }
}

fn with_inverses(ring: &InvolutiveRing, gens: &[UMatrix]) -> Result<Vec<(UMatrix, UMatrix)>> {
    gens.iter().map(|g| Ok((g.clone(), g.inverse(ring)?))).collect()
}

/// Smallest subgroup containing `targets` and normalised by every matrix
/// in `ambient`. Finite groups make conjugation by `a` alone sufficient.
pub fn normal_closure(
    ring: &InvolutiveRing,
    n: usize,
    targets: &[UMatrix],
    ambient: &[UMatrix],
    budget: usize,
) -> Result<SubgroupHandle> {
    let amb = with_inverses(ring, ambient)?;
    let mut b = GroupBuilder::new(ring, n, budget)?;
    let mut queue: VecDeque<UMatrix> = targets.iter().cloned().collect();
    while let Some(x) = queue.pop_front() {
        match b.add_generator(&x) {
            Ok(true) => {
                let conj: Vec<UMatrix> =
                    amb.par_iter().map(|(a, ai)| UMatrix::conjugate_with(ring, a, ai, &x)).collect();
                queue.extend(conj.into_iter().filter(|c| !b.contains(c)));
            }
            Ok(false) => {}
            Err(e) => return over_budget(e, n, targets.to_vec(), budget, false),
        }
    }
    Ok(b.into_handle())
}

/// Seeds `[x, y]` over generator pairs, identity dropped and deduplicated.
pub fn commutator_seeds(ring: &InvolutiveRing, n: usize, h: &[UMatrix], k: &[UMatrix]) -> Result<Vec<UMatrix>> {
    let hi = with_inverses(ring, h)?;
    let ki = with_inverses(ring, k)?;
    let codec = KeyCodec::new(ring, n)?;
    let all: Vec<UMatrix> = hi
        .par_iter()
        .flat_map_iter(|(x, xi)| ki.iter().map(move |(y, yi)| UMatrix::commutator_with(ring, x, y, xi, yi)))
        .collect();
    let mut seen = KeySet::default();
    Ok(all.into_iter().filter(|c| !c.is_identity(ring) && seen.insert(codec.encode(c))).collect())
}

/// `[H, K]`: normal closure of generator commutators in `⟨H, K⟩`.
///
/// Errors when either side lacks a complete generating set.
pub fn mixed_commutator(ring: &InvolutiveRing, h: &SubgroupHandle, k: &SubgroupHandle, budget: usize) -> Result<SubgroupHandle> {
    if !h.generators_complete || !k.generators_complete {
        return Err(Error::Unavailable("commutator of a subgroup without a complete generating set".into()));
    }
    let n = h.n;
    let seeds = commutator_seeds(ring, n, &h.generators, &k.generators)?;
    let ambient: Vec<UMatrix> = h.generators.iter().chain(&k.generators).cloned().collect();
    let mut out = normal_closure(ring, n, &seeds, &ambient, budget)?;
    if out.status == Status::BudgetExceeded {
        out.generators = seeds;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::elementary::{fu_generators, transvection};
    use crate::form_ideal::FormIdeal;
    use crate::ring::{zmod, FormRing};

    fn f2(lambda_max: bool) -> FormRing {
        FormRing::with_bound(Arc::new(zmod(2).unwrap()), 1, lambda_max).unwrap()
    }

    #[test]
    fn sl2_over_f2() {
        let fr = f2(true);
        let a = transvection(&fr, 1, 1, -1, 1).unwrap();
        let b = transvection(&fr, 1, -1, 1, 1).unwrap();
        let h = closure_enumerate(&fr.ring, 1, &[a, b], DEFAULT_BUDGET).unwrap();
        assert_eq!(h.size(), Some(6));
        assert_eq!(h.status, Status::Exact);
    }

    #[test]
    fn budget_is_respected() {
        let fr = f2(true);
        let gens = fu_generators(&fr, &FormIdeal::unit(&fr), 2);
        let h = closure_enumerate(&fr.ring, 2, &gens, 100).unwrap();
        assert_eq!(h.status, Status::BudgetExceeded);
        assert!(h.store.is_none());
        // Sp4(2) has 720 elements
        let h = closure_enumerate(&fr.ring, 2, &gens, 1000).unwrap();
        assert_eq!(h.size(), Some(720));
    }

    #[test]
    fn commutator_of_sp4_is_index_two() {
        // Sp4(2) ≅ S6, whose derived subgroup is A6
        let fr = f2(true);
        let gens = fu_generators(&fr, &FormIdeal::unit(&fr), 2);
        let h = closure_enumerate(&fr.ring, 2, &gens, DEFAULT_BUDGET).unwrap();
        let c = mixed_commutator(&fr.ring, &h, &h, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.size(), Some(360));
        let nc = normal_closure(&fr.ring, 2, &c.generators, &gens, DEFAULT_BUDGET).unwrap();
        assert_eq!(nc.size(), Some(360));
    }
}
