//! The elementary (Steinberg) relations R1–R6 among transvections.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::elementary::{long_root_set, short_twist, transvection_unchecked};
use crate::error::{Error, Result};
use crate::matrix::{sign, UMatrix};
use crate::ring::{Elem, FormRing};
use crate::subset::Subset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
}

impl Relation {
    pub const ALL: [Relation; 6] = [Relation::R1, Relation::R2, Relation::R3, Relation::R4, Relation::R5, Relation::R6];
}

/// One instance of a relation with concrete indices and parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "relation")]
pub enum RelationInstance {
    /// `T_ij(ξ) = T_{-j,-i}(-λ^((ε(j)-ε(i))/2) ξ̄)`
    R1 { i: i32, j: i32, xi: Elem },
    /// `T_ij(ξ) T_ij(ζ) = T_ij(ξ + ζ)`
    R2 { i: i32, j: i32, xi: Elem, zeta: Elem },
    /// `[T_ij(ξ), T_hk(ζ)] = e` for `h != j, -i` and `k != i, -j`
    R3 { i: i32, j: i32, h: i32, k: i32, xi: Elem, zeta: Elem },
    /// `[T_ij(ξ), T_jh(ζ)] = T_ih(ξζ)` for `i, h != ±j`, `i != ±h`
    R4 { i: i32, j: i32, h: i32, xi: Elem, zeta: Elem },
    /// `[T_ij(ξ), T_{j,-i}(ζ)] = T_{i,-i}(ξζ - λ^(-ε(i)) ζ̄ ξ̄)` for `i != ±j`
    R5 { i: i32, j: i32, xi: Elem, zeta: Elem },
    /// `[T_{i,-i}(α), T_{-i,j}(ξ)] = T_ij(αξ) T_{-j,j}(-λ^((ε(i)+ε(j))/2) ξ̄ α ξ)` for `i != ±j`.
    ///
    /// The twist is `λ^((ε(j)-ε(-i))/2)`, the same one carried by the
    /// `e_{-j,i}` entry of `T_{-i,j}(ξ)`; it keeps the long-root parameter
    /// in `λ^(-(ε(-j)+1)/2) Λ`.
    R6 { i: i32, j: i32, alpha: Elem, xi: Elem },
}

impl RelationInstance {
    pub fn relation(&self) -> Relation {
        match self {
            RelationInstance::R1 { .. } => Relation::R1,
            RelationInstance::R2 { .. } => Relation::R2,
            RelationInstance::R3 { .. } => Relation::R3,
            RelationInstance::R4 { .. } => Relation::R4,
            RelationInstance::R5 { .. } => Relation::R5,
            RelationInstance::R6 { .. } => Relation::R6,
        }
    }
}

fn admissible(fr: &FormRing, i: i32, j: i32) -> Subset {
    if i == -j {
        long_root_set(fr, i, fr.lam())
    } else {
        fr.ring.all()
    }
}

fn in_omega(n: usize, k: i32) -> bool {
    k != 0 && k.unsigned_abs() as usize <= n
}

/// Checks index constraints and parameter admissibility.
fn validate(fr: &FormRing, n: usize, inst: &RelationInstance) -> Result<()> {
    let bad_idx = |msg: &str| Err(Error::InvalidIndex(format!("{inst:?}: {msg}")));
    let bad_par = |msg: &str| Err(Error::Inadmissible(format!("{inst:?}: {msg}")));
    let indices: Vec<i32> = match *inst {
        RelationInstance::R1 { i, j, .. }
        | RelationInstance::R2 { i, j, .. }
        | RelationInstance::R5 { i, j, .. }
        | RelationInstance::R6 { i, j, .. } => vec![i, j],
        RelationInstance::R3 { i, j, h, k, .. } => vec![i, j, h, k],
        RelationInstance::R4 { i, j, h, .. } => vec![i, j, h],
    };
    if indices.iter().any(|&k| !in_omega(n, k)) {
        return bad_idx("index outside Ω");
    }
    match *inst {
        RelationInstance::R1 { i, j, xi } => {
            if i == j {
                return bad_idx("i = j");
            }
            if !admissible(fr, i, j).contains(xi) {
                return bad_par("ξ not admissible");
            }
        }
        RelationInstance::R2 { i, j, xi, zeta } => {
            if i == j {
                return bad_idx("i = j");
            }
            let adm = admissible(fr, i, j);
            if !adm.contains(xi) || !adm.contains(zeta) {
                return bad_par("parameter not admissible");
            }
        }
        RelationInstance::R3 { i, j, h, k, xi, zeta } => {
            if i == j || h == k {
                return bad_idx("degenerate pair");
            }
            if h == j || h == -i || k == i || k == -j {
                return bad_idx("needs h != j, -i and k != i, -j");
            }
            if !admissible(fr, i, j).contains(xi) || !admissible(fr, h, k).contains(zeta) {
                return bad_par("parameter not admissible");
            }
        }
        RelationInstance::R4 { i, j, h, xi, zeta } => {
            if i == j || i == -j || h == j || h == -j || i == h || i == -h {
                return bad_idx("needs i, h != ±j and i != ±h");
            }
            if xi as usize >= fr.ring.order() || zeta as usize >= fr.ring.order() {
                return bad_par("parameter not a ring element");
            }
        }
        RelationInstance::R5 { i, j, xi, zeta } => {
            if i == j || i == -j {
                return bad_idx("needs i != ±j");
            }
            if xi as usize >= fr.ring.order() || zeta as usize >= fr.ring.order() {
                return bad_par("parameter not a ring element");
            }
        }
        RelationInstance::R6 { i, j, alpha, xi } => {
            if i == j || i == -j {
                return bad_idx("needs i != ±j");
            }
            if !long_root_set(fr, i, fr.lam()).contains(alpha) {
                return bad_par("α not an admissible long-root parameter");
            }
            if xi as usize >= fr.ring.order() {
                return bad_par("parameter not a ring element");
            }
        }
    }
    Ok(())
}

/// Left- and right-hand sides of a relation instance.
pub fn relation_sides(fr: &FormRing, n: usize, inst: &RelationInstance) -> Result<(UMatrix, UMatrix)> {
    validate(fr, n, inst)?;
    let ring = &*fr.ring;
    let t = |i: i32, j: i32, x: Elem| transvection_unchecked(fr, n, i, j, x);
    // [T_ab(x), T_cd(y)] using T(-x) as inverse
    let comm = |a: i32, b: i32, x: Elem, c: i32, d: i32, y: Elem| {
        t(a, b, x).mul(ring, &t(c, d, y)).mul(ring, &t(a, b, ring.neg(x))).mul(ring, &t(c, d, ring.neg(y)))
    };
    Ok(match *inst {
        RelationInstance::R1 { i, j, xi } => {
            let p = ring.neg(ring.mul(short_twist(fr, i, j), ring.conj(xi)));
            (t(i, j, xi), t(-j, -i, p))
        }
        RelationInstance::R2 { i, j, xi, zeta } => (t(i, j, xi).mul(ring, &t(i, j, zeta)), t(i, j, ring.add(xi, zeta))),
        RelationInstance::R3 { i, j, h, k, xi, zeta } => (comm(i, j, xi, h, k, zeta), UMatrix::identity(ring, n)),
        RelationInstance::R4 { i, j, h, xi, zeta } => (comm(i, j, xi, j, h, zeta), t(i, h, ring.mul(xi, zeta))),
        RelationInstance::R5 { i, j, xi, zeta } => {
            let twist = fr.lambda_pow(-sign(i));
            let p = ring.sub(ring.mul(xi, zeta), ring.mul3(twist, ring.conj(zeta), ring.conj(xi)));
            (comm(i, j, xi, j, -i, zeta), t(i, -i, p))
        }
        RelationInstance::R6 { i, j, alpha, xi } => {
            let c = ring.neg(ring.mul(short_twist(fr, -i, j), ring.mul3(ring.conj(xi), alpha, xi)));
            (comm(i, -i, alpha, -i, j, xi), t(i, j, ring.mul(alpha, xi)).mul(ring, &t(-j, j, c)))
        }
    })
}

/// Whether both sides of the relation agree.
pub fn steinberg_relation_check(fr: &FormRing, n: usize, inst: &RelationInstance) -> Result<bool> {
    let (lhs, rhs) = relation_sides(fr, n, inst)?;
    Ok(lhs == rhs)
}

fn omega(n: usize) -> Vec<i32> {
    crate::matrix::OmegaIndex::all(n).map(|i| i.0).collect()
}

/// Every admissible instance of `rel`, in a fixed order.
pub fn enumerate_instances(fr: &FormRing, n: usize, rel: Relation) -> Vec<RelationInstance> {
    let om = omega(n);
    let all = fr.ring.all();
    let mut out = Vec::new();
    for &i in &om {
        for &j in &om {
            if i == j {
                continue;
            }
            match rel {
                Relation::R1 => {
                    out.extend(admissible(fr, i, j).iter().map(|xi| RelationInstance::R1 { i, j, xi }));
                }
                Relation::R2 => {
                    let adm = admissible(fr, i, j);
                    for xi in adm.iter() {
                        out.extend(adm.iter().map(|zeta| RelationInstance::R2 { i, j, xi, zeta }));
                    }
                }
                Relation::R3 => {
                    for &h in &om {
                        for &k in &om {
                            if h == k || h == j || h == -i || k == i || k == -j {
                                continue;
                            }
                            for xi in admissible(fr, i, j).iter() {
                                for zeta in admissible(fr, h, k).iter() {
                                    out.push(RelationInstance::R3 { i, j, h, k, xi, zeta });
                                }
                            }
                        }
                    }
                }
                Relation::R4 => {
                    if i == -j {
                        continue;
                    }
                    for &h in &om {
                        if h == j || h == -j || h == i || h == -i {
                            continue;
                        }
                        for xi in all.iter() {
                            out.extend(all.iter().map(|zeta| RelationInstance::R4 { i, j, h, xi, zeta }));
                        }
                    }
                }
                Relation::R5 => {
                    if i == -j {
                        continue;
                    }
                    for xi in all.iter() {
                        out.extend(all.iter().map(|zeta| RelationInstance::R5 { i, j, xi, zeta }));
                    }
                }
                Relation::R6 => {
                    if i == -j {
                        continue;
                    }
                    for alpha in long_root_set(fr, i, fr.lam()).iter() {
                        out.extend(all.iter().map(|xi| RelationInstance::R6 { i, j, alpha, xi }));
                    }
                }
            }
        }
    }
    out
}

/// Uniformly random admissible instance of `rel`.
pub fn random_instance(fr: &FormRing, n: usize, rel: Relation, rng: &mut impl Rng) -> RelationInstance {
    let om = omega(n);
    let pick = |s: Subset, rng: &mut dyn rand::RngCore| -> Elem {
        let v = s.to_vec();
        v[rng.gen_range(0..v.len())]
    };
    loop {
        let i = *om.choose(rng).unwrap();
        let j = *om.choose(rng).unwrap();
        let h = *om.choose(rng).unwrap();
        let k = *om.choose(rng).unwrap();
        let inst = match rel {
            Relation::R1 => RelationInstance::R1 { i, j, xi: pick(admissible(fr, i, j), rng) },
            Relation::R2 => {
                let adm = admissible(fr, i, j);
                RelationInstance::R2 { i, j, xi: pick(adm, rng), zeta: pick(adm, rng) }
            }
            Relation::R3 => RelationInstance::R3 {
                i,
                j,
                h,
                k,
                xi: pick(admissible(fr, i, j), rng),
                zeta: pick(admissible(fr, h, k), rng),
            },
            Relation::R4 => RelationInstance::R4 { i, j, h, xi: pick(fr.ring.all(), rng), zeta: pick(fr.ring.all(), rng) },
            Relation::R5 => RelationInstance::R5 { i, j, xi: pick(fr.ring.all(), rng), zeta: pick(fr.ring.all(), rng) },
            Relation::R6 => RelationInstance::R6 {
                i,
                j,
                alpha: pick(long_root_set(fr, i, fr.lam()), rng),
                xi: pick(fr.ring.all(), rng),
            },
        };
        if i != j && validate(fr, n, &inst).is_ok() {
            return inst;
        }
    }
}

/// Outcome of a relation sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub checked: Vec<(Relation, usize)>,
    pub failures: Vec<RelationInstance>,
}

impl SweepReport {
    pub fn total(&self) -> usize {
        self.checked.iter().map(|(_, c)| c).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// How many instances to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive,
    Random { per_relation: usize, seed: u64 },
}

pub fn sweep(fr: &FormRing, n: usize, mode: SweepMode) -> SweepReport {
    let mut report = SweepReport::default();
    for rel in Relation::ALL {
        let instances = match mode {
            SweepMode::Exhaustive => enumerate_instances(fr, n, rel),
            SweepMode::Random { per_relation, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ rel as u64);
                (0..per_relation).map(|_| random_instance(fr, n, rel, &mut rng)).collect()
            }
        };
        let failures: Vec<RelationInstance> = {
            use rayon::prelude::*;
            instances
                .par_iter()
                .filter(|inst| !steinberg_relation_check(fr, n, inst).unwrap_or(false))
                .copied()
                .collect()
        };
        report.checked.push((rel, instances.len()));
        report.failures.extend(failures);
    }
    report
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ring::{build_ring, zmod, RingSpec};

    fn z4() -> FormRing {
        FormRing::with_bound(Arc::new(zmod(4).unwrap()), 3, true).unwrap()
    }

    #[test]
    fn named_examples() {
        let fr = z4();
        assert!(steinberg_relation_check(&fr, 3, &RelationInstance::R2 { i: 1, j: 2, xi: 1, zeta: 1 }).unwrap());
        assert!(steinberg_relation_check(&fr, 3, &RelationInstance::R4 { i: 1, j: 3, h: 2, xi: 1, zeta: 1 }).unwrap());
        let r5 = RelationInstance::R5 { i: 1, j: 2, xi: 1, zeta: 1 };
        assert!(steinberg_relation_check(&fr, 3, &r5).unwrap());
        // right side is T_{1,-1}(2)
        let (_, rhs) = relation_sides(&fr, 3, &r5).unwrap();
        assert_eq!(rhs.get(1, -1), 2);
    }

    #[test]
    fn r6_long_root_twist() {
        // expand [T_{1,-1}(1), T_{-1,2}(1)] over Z/4 with λ = 3 by hand:
        // e + e_{1,2} + λ e_{-2,-1} - λ e_{-2,2}
        let fr = z4();
        let (lhs, rhs) = relation_sides(&fr, 3, &RelationInstance::R6 { i: 1, j: 2, alpha: 1, xi: 1 }).unwrap();
        let mut expected = UMatrix::identity(&fr.ring, 3);
        expected.set(1, 2, 1);
        expected.set(-2, -1, 3);
        expected.set(-2, 2, 1);
        assert_eq!(lhs, expected);
        assert_eq!(rhs, expected);
    }

    #[test]
    fn constraint_violations_are_errors() {
        let fr = z4();
        assert!(steinberg_relation_check(&fr, 3, &RelationInstance::R4 { i: 1, j: 2, h: -1, xi: 1, zeta: 1 }).is_err());
        assert!(steinberg_relation_check(&fr, 3, &RelationInstance::R3 { i: 1, j: 2, h: 2, k: 3, xi: 1, zeta: 1 }).is_err());
        let fr1 = FormRing::with_bound(Arc::new(zmod(4).unwrap()), 1, true).unwrap();
        assert!(steinberg_relation_check(&fr1, 3, &RelationInstance::R6 { i: 1, j: 2, alpha: 1, xi: 1 }).is_err());
    }

    #[test]
    fn exhaustive_small_instances() {
        let f4 = build_ring(&RingSpec::Quadratic { m: Some(2), base: None, poly: vec![1, 1, 1], conj_x: vec![1, 1] }).unwrap();
        let instances = [
            z4(),
            FormRing::with_bound(Arc::new(zmod(2).unwrap()), 1, true).unwrap(),
            FormRing::with_bound(Arc::new(zmod(2).unwrap()), 1, false).unwrap(),
            FormRing::with_bound(Arc::new(f4), 1, true).unwrap(),
        ];
        for fr in &instances {
            let rep = sweep(fr, 3, SweepMode::Exhaustive);
            assert!(rep.passed(), "{:?}", &rep.failures[..rep.failures.len().min(5)]);
            assert!(rep.checked.iter().all(|&(_, c)| c > 0));
        }
    }

    #[test]
    fn random_sweep_is_seeded() {
        let fr = FormRing::with_bound(Arc::new(zmod(9).unwrap()), 8, true).unwrap();
        let a = sweep(&fr, 3, SweepMode::Random { per_relation: 200, seed: 7 });
        assert!(a.passed());
        assert_eq!(a.total(), 1200);
    }
}
