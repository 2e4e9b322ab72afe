//! A form ring in a fixed rank with cached subgroups.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ambient::{enumerate_congruence, random_member};
use super::bracket::{CommExpr, LeafKind};
use super::layer::{is_square_zero, LayerGroup};
use super::sampler::random_word_sampler;
use super::store::Store;
use super::subgroup::{closure_enumerate, mixed_commutator, GroupBuilder, Status, SubgroupHandle, DEFAULT_BUDGET};
use crate::elementary::{eu_generator_set, fu_generators};
use crate::error::{Error, Result};
use crate::form_ideal::FormIdeal;
use crate::forms::cu_membership;
use crate::matrix::UMatrix;
use crate::ring::FormRing;

/// How `GU(2n, I, Γ)` is materialised.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GuMode {
    /// Layer when `I² = 0`, otherwise search, otherwise sampling.
    #[default]
    Auto,
    Exact,
    Layer,
    Sampled,
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub budget: usize,
    pub seed: u64,
    pub gu_mode: GuMode,
    /// Search-found members added to sampled generating sets.
    pub sampled_members: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { budget: DEFAULT_BUDGET, seed: 0, gu_mode: GuMode::Auto, sampled_members: 8 }
    }
}

// cached elements beyond which commutator results are dropped
const EXPR_CACHE_ELEMENTS: usize = 3 << 22;

#[derive(Default)]
struct Caches {
    leaves: HashMap<(LeafKind, FormIdeal), Arc<SubgroupHandle>>,
    layers: HashMap<FormIdeal, Arc<LayerGroup>>,
    exprs: HashMap<String, Arc<SubgroupHandle>>,
    expr_elements: usize,
}

pub struct Instance {
    pub fr: FormRing,
    pub n: usize,
    pub options: Options,
    caches: Mutex<Caches>,
}

impl Instance {
    pub fn new(fr: FormRing, n: usize, options: Options) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("rank must be positive".into()));
        }
        crate::matrix::KeyCodec::new(&fr.ring, n)?;
        Ok(Instance { fr, n, options, caches: Mutex::default() })
    }

    pub fn unit(&self) -> FormIdeal {
        FormIdeal::unit(&self.fr)
    }

    /// Generators of `EU(2n, A, Λ)`.
    pub fn ambient_generators(&self) -> Vec<UMatrix> {
        fu_generators(&self.fr, &self.unit(), self.n)
    }

    fn budget(&self) -> usize {
        self.options.budget
    }

    pub fn layer(&self, fi: &FormIdeal) -> Result<Arc<LayerGroup>> {
        if let Some(l) = self.caches.lock().unwrap().layers.get(fi) {
            return Ok(l.clone());
        }
        let l = Arc::new(LayerGroup::new(&self.fr, fi, self.n)?);
        self.caches.lock().unwrap().layers.insert(*fi, l.clone());
        Ok(l)
    }

    pub fn leaf(&self, kind: LeafKind, fi: &FormIdeal) -> Result<Arc<SubgroupHandle>> {
        if let Some(h) = self.caches.lock().unwrap().leaves.get(&(kind, *fi)) {
            return Ok(h.clone());
        }
        let h = Arc::new(self.compute_leaf(kind, fi)?);
        self.caches.lock().unwrap().leaves.insert((kind, *fi), h.clone());
        Ok(h)
    }

    fn compute_leaf(&self, kind: LeafKind, fi: &FormIdeal) -> Result<SubgroupHandle> {
        let ring = &*self.fr.ring;
        match kind {
            LeafKind::E | LeafKind::F => {
                let gens = if kind == LeafKind::E {
                    eu_generator_set(&self.fr, fi, self.n)
                } else {
                    fu_generators(&self.fr, fi, self.n)
                };
                if gens.is_empty() {
                    return SubgroupHandle::trivial(ring, self.n);
                }
                closure_enumerate(ring, self.n, &gens, self.budget())
            }
            LeafKind::G => self.compute_gu(fi),
            LeafKind::C => self.compute_cu(fi),
        }
    }

    fn compute_gu(&self, fi: &FormIdeal) -> Result<SubgroupHandle> {
        let ring = &*self.fr.ring;
        let mode = match self.options.gu_mode {
            GuMode::Auto if is_square_zero(ring, fi) => GuMode::Layer,
            // EU(I, Γ) ≤ GU(2n, I, Γ): an elementary closure over budget rules out the search
            GuMode::Auto if self.leaf(LeafKind::E, fi)?.status == Status::BudgetExceeded => GuMode::Sampled,
            GuMode::Auto => GuMode::Exact,
            m => m,
        };
        match mode {
            GuMode::Layer => {
                let layer = self.layer(fi)?;
                let gens = layer.generators(ring);
                match layer.enumerate(ring, self.budget()) {
                    Ok(store) => Ok(SubgroupHandle {
                        n: self.n,
                        generators: gens,
                        store: Some(Arc::new(store)),
                        budget: self.budget(),
                        status: Status::Exact,
                        generators_complete: true,
                    }),
                    Err(Error::BudgetExceeded { .. }) => {
                        let mut h = SubgroupHandle::from_generators(self.n, gens, self.budget());
                        h.status = Status::BudgetExceeded;
                        Ok(h)
                    }
                    Err(e) => Err(e),
                }
            }
            GuMode::Exact => match enumerate_congruence(&self.fr, fi, self.n, self.budget()) {
                Ok(store) => {
                    let gens = self.generating_set(&store, eu_generator_set(&self.fr, fi, self.n))?;
                    Ok(SubgroupHandle {
                        n: self.n,
                        generators: gens,
                        store: Some(Arc::new(store)),
                        budget: self.budget(),
                        status: Status::Exact,
                        generators_complete: true,
                    })
                }
                Err(Error::BudgetExceeded { .. }) if self.options.gu_mode == GuMode::Auto => self.sampled_gu(fi),
                Err(e) => Err(e),
            },
            GuMode::Sampled => self.sampled_gu(fi),
            GuMode::Auto => unreachable!(),
        }
    }

    // known members: the EU generators plus search-found elements
    fn sampled_gu(&self, fi: &FormIdeal) -> Result<SubgroupHandle> {
        let mut gens = eu_generator_set(&self.fr, fi, self.n);
        let mut rng = ChaCha8Rng::seed_from_u64(self.options.seed ^ 0x5a5a);
        for _ in 0..self.options.sampled_members {
            match random_member(&self.fr, fi, self.n, &mut rng, 1 << 20) {
                Ok(Some(m)) => gens.push(m),
                Ok(None) | Err(Error::BudgetExceeded { .. }) => break,
                Err(e) => return Err(e),
            }
        }
        Ok(SubgroupHandle {
            n: self.n,
            generators: gens,
            store: None,
            budget: self.budget(),
            status: Status::Sampled,
            generators_complete: false,
        })
    }

    /// Irredundant generators of an enumerated group, starting from `prefix`
    /// and continuing with elements in seeded random order.
    fn generating_set(&self, store: &Store, prefix: Vec<UMatrix>) -> Result<Vec<UMatrix>> {
        let ring = &*self.fr.ring;
        let mut b = GroupBuilder::new(ring, self.n, store.len())?;
        for g in prefix.iter().filter(|g| store.contains(g)) {
            if b.len() == store.len() {
                break;
            }
            b.add_generator(g)?;
        }
        let mut order: Vec<usize> = (0..store.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(self.options.seed));
        for k in order {
            if b.len() == store.len() {
                break;
            }
            b.add_generator(&store.get(k).expect("in range"))?;
        }
        Ok(b.generators().to_vec())
    }

    fn compute_cu(&self, fi: &FormIdeal) -> Result<SubgroupHandle> {
        let ambient = self.leaf(LeafKind::G, &self.unit())?;
        let Some(store) = ambient.store.as_ref() else {
            return Err(Error::Unavailable("CU needs an enumerated ambient unitary group".into()));
        };
        let mut cu = Store::new(*store.codec());
        for g in store.iter() {
            if cu_membership(&self.fr, fi, &g, &ambient.generators)? {
                cu.insert(&g);
            }
        }
        let gens = self.generating_set(&cu, Vec::new())?;
        Ok(SubgroupHandle {
            n: self.n,
            generators: gens,
            store: Some(Arc::new(cu)),
            budget: self.budget(),
            status: Status::Exact,
            generators_complete: true,
        })
    }

    /// Evaluates nested mixed commutators, caching results.
    pub fn evaluate(&self, expr: &CommExpr) -> Result<Arc<SubgroupHandle>> {
        match expr {
            CommExpr::Leaf { kind, level } => self.leaf(*kind, &level.ideal),
            CommExpr::Bracket(a, b) => {
                let key = canonical(expr);
                if let Some(h) = self.caches.lock().unwrap().exprs.get(&key) {
                    return Ok(h.clone());
                }
                let (ha, hb) = (self.evaluate(a)?, self.evaluate(b)?);
                // two unenumerable sides: reported over budget without a search
                let h = if ha.status == Status::BudgetExceeded && hb.status == Status::BudgetExceeded {
                    if !ha.generators_complete || !hb.generators_complete {
                        return Err(Error::Unavailable("commutator of a subgroup without a complete generating set".into()));
                    }
                    Arc::new(SubgroupHandle {
                        n: self.n,
                        generators: Vec::new(),
                        store: None,
                        budget: self.budget(),
                        status: Status::BudgetExceeded,
                        generators_complete: false,
                    })
                } else {
                    Arc::new(mixed_commutator(&self.fr.ring, &ha, &hb, self.budget())?)
                };
                let mut c = self.caches.lock().unwrap();
                let size = h.size().unwrap_or(0);
                if c.expr_elements + size > EXPR_CACHE_ELEMENTS {
                    c.exprs.clear();
                    c.expr_elements = 0;
                }
                c.expr_elements += size;
                c.exprs.insert(key, h.clone());
                Ok(h)
            }
        }
    }

    /// `count` members of `h`: uniform from a store or a layer, otherwise
    /// random words over the known generators.
    pub fn sample(&self, h: &SubgroupHandle, layer_of: Option<&FormIdeal>, count: usize, seed: u64) -> Result<Vec<UMatrix>> {
        let ring = &*self.fr.ring;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(store) = &h.store {
            return Ok((0..count).map(|_| store.get(rng.gen_range(0..store.len())).expect("in range")).collect());
        }
        if let Some(fi) = layer_of {
            if is_square_zero(ring, fi) {
                let layer = self.layer(fi)?;
                return Ok((0..count).map(|_| layer.sample(ring, &mut rng)).collect());
            }
        }
        random_word_sampler(ring, self.n, &h.generators, 24, count, seed)
    }
}

// commutator subgroups are symmetric, so children are ordered
fn canonical(expr: &CommExpr) -> String {
    match expr {
        CommExpr::Leaf { kind, level } => {
            format!("{kind}{:x}/{:x}", level.ideal.ideal.members.bits(), level.ideal.gamma.bits())
        }
        CommExpr::Bracket(a, b) => {
            let (x, y) = (canonical(a), canonical(b));
            if x <= y {
                format!("[{x},{y}]")
            } else {
                format!("[{y},{x}]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::bracket::Level;
    use crate::ring::zmod;

    fn f2_orth() -> Instance {
        let fr = FormRing::with_bound(Arc::new(zmod(2).unwrap()), 1, false).unwrap();
        Instance::new(fr, 2, Options::default()).unwrap()
    }

    #[test]
    fn orthogonal_rank_two() {
        // O+(4,2) has order 72; its elementary subgroup is S3×S3, whose
        // derived subgroup is C3×C3
        let inst = f2_orth();
        let unit = inst.unit();
        let g = inst.leaf(LeafKind::G, &unit).unwrap();
        let e = inst.leaf(LeafKind::E, &unit).unwrap();
        assert_eq!(g.size(), Some(72));
        assert_eq!(e.size(), Some(36));
        let a = Level { name: "A".into(), ideal: unit };
        let ee = inst.evaluate(&CommExpr::bracket(CommExpr::leaf(LeafKind::E, &a), CommExpr::leaf(LeafKind::E, &a))).unwrap();
        assert_eq!(ee.size(), Some(9));
        let c = inst.leaf(LeafKind::C, &unit).unwrap();
        assert_eq!(c.size(), Some(72));
    }
}
