//! Elementary unitary transvections and the generator families built from
//! them.

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::form_ideal::{symmetrized_product, FormIdeal};
use crate::matrix::{omega_pos, sign, KeyCodec, UMatrix};
use crate::ring::{Elem, FormRing};
use crate::subset::Subset;

/// `λ^((ε(j) - ε(i)) / 2)`.
pub fn short_twist(fr: &FormRing, i: i32, j: i32) -> Elem {
    fr.lambda_pow((sign(j) - sign(i)) / 2)
}

/// `λ^(-(ε(i) + 1) / 2) · S`, the admissible long-root parameters at `(i, -i)`.
pub fn long_root_set(fr: &FormRing, i: i32, s: Subset) -> Subset {
    fr.ring.scale(fr.lambda_pow(-(sign(i) + 1) / 2), s)
}

/// Parameters `ξ` with `T_ij(ξ)` of level `(I, Γ)`: `I` for short roots,
/// `λ^(-(ε(i)+1)/2) Γ` for long roots.
pub fn level_params(fr: &FormRing, fi: &FormIdeal, i: i32, j: i32) -> Subset {
    if i == -j {
        long_root_set(fr, i, fi.gamma)
    } else {
        fi.ideal.members
    }
}

/// Ordered index pairs `(i, j)` with `i != j`, in `Ω × Ω` order.
pub fn root_pairs(n: usize) -> Vec<(i32, i32)> {
    let omega: Vec<i32> = crate::matrix::OmegaIndex::all(n).map(|i| i.0).collect();
    let mut out = Vec::new();
    for &i in &omega {
        for &j in &omega {
            if i != j {
                out.push((i, j));
            }
        }
    }
    out
}

fn check_pair(n: usize, i: i32, j: i32) -> Result<()> {
    for k in [i, j] {
        if k == 0 || k.unsigned_abs() as usize > n {
            return Err(Error::InvalidIndex(format!("{k} is not in Ω for n = {n}")));
        }
    }
    if i == j {
        return Err(Error::InvalidIndex(format!("T_{{{i},{j}}} needs i != j")));
    }
    Ok(())
}

/// `T_ij(ξ)`; long-root parameters are checked against `Λ`.
pub fn transvection(fr: &FormRing, n: usize, i: i32, j: i32, xi: Elem) -> Result<UMatrix> {
    check_pair(n, i, j)?;
    if xi as usize >= fr.ring.order() {
        return Err(Error::Inadmissible(format!("{xi} is not a ring element")));
    }
    if i == -j && !long_root_set(fr, i, fr.lam()).contains(xi) {
        return Err(Error::Inadmissible(format!(
            "{} is not an admissible long-root parameter at ({i},{j})",
            fr.ring.label(xi)
        )));
    }
    Ok(transvection_unchecked(fr, n, i, j, xi))
}

/// `T_ij(ξ)` without admissibility checks.
pub fn transvection_unchecked(fr: &FormRing, n: usize, i: i32, j: i32, xi: Elem) -> UMatrix {
    let ring = &*fr.ring;
    let mut m = UMatrix::identity(ring, n);
    let (pi, pj) = (omega_pos(n, i), omega_pos(n, j));
    if i == -j {
        m.set_at(pi, pj, xi);
    } else {
        m.set_at(pi, pj, xi);
        let c = ring.neg(ring.mul(short_twist(fr, i, j), ring.conj(xi)));
        m.set_at(omega_pos(n, -j), omega_pos(n, -i), c);
    }
    m
}

/// `Z_ij(ξ, ζ) = T_ji(ζ) T_ij(ξ) T_ji(-ζ)`.
pub fn z_generator(
    fr: &FormRing,
    fi: &FormIdeal,
    n: usize,
    i: i32,
    j: i32,
    xi: Elem,
    zeta: Elem,
) -> Result<UMatrix> {
    check_pair(n, i, j)?;
    if !level_params(fr, fi, i, j).contains(xi) {
        return Err(Error::Inadmissible(format!("ξ = {} outside the level at ({i},{j})", fr.ring.label(xi))));
    }
    if !level_params(fr, &FormIdeal::unit(fr), j, i).contains(zeta) {
        return Err(Error::Inadmissible(format!("ζ = {} not admissible at ({j},{i})", fr.ring.label(zeta))));
    }
    Ok(z_unchecked(fr, n, i, j, xi, zeta))
}

fn z_unchecked(fr: &FormRing, n: usize, i: i32, j: i32, xi: Elem, zeta: Elem) -> UMatrix {
    let ring = &*fr.ring;
    let a = transvection_unchecked(fr, n, j, i, zeta);
    let b = transvection_unchecked(fr, n, i, j, xi);
    let c = transvection_unchecked(fr, n, j, i, ring.neg(zeta));
    a.mul(ring, &b).mul(ring, &c)
}

/// Keeps the first occurrence of each matrix and drops the identity.
pub fn dedup_nontrivial(fr: &FormRing, n: usize, mats: impl IntoIterator<Item = UMatrix>) -> Vec<UMatrix> {
    let codec = KeyCodec::new(&fr.ring, n).expect("matrix encoding fits");
    let mut seen = FxHashSet::default();
    let mut out = Vec::new();
    for m in mats {
        if m.is_identity(&fr.ring) {
            continue;
        }
        if seen.insert(codec.encode(&m)) {
            out.push(m);
        }
    }
    out
}

/// Distinct nontrivial transvections of level `(I, Γ)`; generators of
/// `FU(2n, I, Γ)`. With `(A, Λ)` these generate `EU(2n, A, Λ)`.
pub fn fu_generators(fr: &FormRing, fi: &FormIdeal, n: usize) -> Vec<UMatrix> {
    dedup_nontrivial(fr, n, fu_generators_raw(fr, fi, n))
}

/// Every `T_ij(ξ)` with `ξ` nonzero and of level `(I, Γ)`, before removing
/// the coincidences `T_ij(ξ) = T_{-j,-i}(...)`.
pub fn fu_generators_raw(fr: &FormRing, fi: &FormIdeal, n: usize) -> Vec<UMatrix> {
    let zero = fr.ring.zero();
    root_pairs(n)
        .into_iter()
        .flat_map(|(i, j)| {
            level_params(fr, fi, i, j)
                .iter()
                .filter(move |&x| x != zero)
                .map(move |x| transvection_unchecked(fr, n, i, j, x))
        })
        .collect()
}

/// Distinct nontrivial `Z_ij(ξ, ζ)` of level `(I, Γ)`.
pub fn eu_generator_set(fr: &FormRing, fi: &FormIdeal, n: usize) -> Vec<UMatrix> {
    let unit = FormIdeal::unit(fr);
    let zero = fr.ring.zero();
    let mut mats = Vec::new();
    for (i, j) in root_pairs(n) {
        let zetas = level_params(fr, &unit, j, i);
        for xi in level_params(fr, fi, i, j).iter().filter(|&x| x != zero) {
            for zeta in zetas.iter() {
                mats.push(z_unchecked(fr, n, i, j, xi, zeta));
            }
        }
    }
    dedup_nontrivial(fr, n, mats)
}

/// The three generator families of `[EU(I, Γ), EU(J, Δ)]`, each conjugated
/// by the identity and by every matrix in `conjugators`.
pub fn theorem_generators(
    fr: &FormRing,
    fi: &FormIdeal,
    fj: &FormIdeal,
    n: usize,
    conjugators: &[UMatrix],
) -> Result<Vec<UMatrix>> {
    let ring = &*fr.ring;
    let unit = FormIdeal::unit(fr);
    let prod = symmetrized_product(fr, fi, fj);
    let mut base = Vec::new();
    for (i, j) in root_pairs(n) {
        let alphas = level_params(fr, fi, j, i);
        let betas_ji = level_params(fr, fj, j, i);
        let betas_ij = level_params(fr, fj, i, j);
        let a_set = level_params(fr, &unit, i, j);
        for alpha in alphas.iter().filter(|&x| x != ring.zero()) {
            let t_alpha = transvection_unchecked(fr, n, j, i, alpha);
            let t_alpha_inv = transvection_unchecked(fr, n, j, i, ring.neg(alpha));
            for beta in betas_ji.iter().filter(|&x| x != ring.zero()) {
                let t_beta = transvection_unchecked(fr, n, j, i, beta);
                for a in a_set.iter() {
                    let t_a = transvection_unchecked(fr, n, i, j, a);
                    let t_a_inv = transvection_unchecked(fr, n, i, j, ring.neg(a));
                    let conj = UMatrix::conjugate_with(ring, &t_a, &t_a_inv, &t_beta);
                    let conj_inv = conj.inverse(ring)?;
                    base.push(UMatrix::commutator_with(ring, &t_alpha, &conj, &t_alpha_inv, &conj_inv));
                }
            }
            for beta in betas_ij.iter().filter(|&x| x != ring.zero()) {
                let t_beta = transvection_unchecked(fr, n, i, j, beta);
                let t_beta_inv = transvection_unchecked(fr, n, i, j, ring.neg(beta));
                base.push(UMatrix::commutator_with(ring, &t_alpha, &t_beta, &t_alpha_inv, &t_beta_inv));
            }
        }
        for xi in level_params(fr, &prod, i, j).iter().filter(|&x| x != ring.zero()) {
            base.push(transvection_unchecked(fr, n, i, j, xi));
        }
    }
    let base = dedup_nontrivial(fr, n, base);
    let mut all = base.clone();
    for c in conjugators {
        let c_inv = c.inverse(ring)?;
        all.extend(base.iter().map(|g| UMatrix::conjugate_with(ring, c, &c_inv, g)));
    }
    Ok(dedup_nontrivial(fr, n, all))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::form_ideal::Ideal;
    use crate::forms::{congruence_membership, gu_membership};
    use crate::ring::zmod;

    fn z4() -> FormRing {
        FormRing::with_bound(Arc::new(zmod(4).unwrap()), 3, true).unwrap()
    }

    fn f2_symplectic() -> FormRing {
        FormRing::with_bound(Arc::new(zmod(2).unwrap()), 1, true).unwrap()
    }

    fn level2(fr: &FormRing) -> FormIdeal {
        let fi = FormIdeal {
            ideal: Ideal { members: [0u8, 2].into_iter().collect() },
            gamma: [0u8, 2].into_iter().collect(),
        };
        assert!(crate::form_ideal::validate_form_ideal(fr, &fi).is_valid());
        fi
    }

    #[test]
    fn transvection_examples() {
        let fr = z4();
        let r = &*fr.ring;
        assert!(transvection(&fr, 3, 1, 2, 0).unwrap().is_identity(r));
        let t = transvection(&fr, 3, 1, -1, 1).unwrap();
        let mut expected = UMatrix::identity(r, 3);
        expected.set(1, -1, 1);
        assert_eq!(t, expected);
        let prod = transvection(&fr, 3, 1, 2, 1).unwrap().mul(r, &transvection(&fr, 3, 1, 2, 3).unwrap());
        assert!(prod.is_identity(r));
        assert!(transvection(&fr, 3, 1, 1, 1).is_err());
        assert!(transvection(&fr, 3, 1, 4, 1).is_err());
    }

    #[test]
    fn long_root_parameters_checked() {
        // Z/4 with λ = 1: Λ_max = {0, 2}
        let fr = FormRing::with_bound(Arc::new(zmod(4).unwrap()), 1, true).unwrap();
        assert!(matches!(transvection(&fr, 3, 1, -1, 1), Err(Error::Inadmissible(_))));
        assert!(transvection(&fr, 3, 1, -1, 2).is_ok());
    }

    #[test]
    fn all_transvections_are_unitary() {
        let fr = z4();
        for g in fu_generators(&fr, &FormIdeal::unit(&fr), 3) {
            assert!(gu_membership(&fr, &g).unwrap());
        }
    }

    #[test]
    fn f2_symplectic_generator_count() {
        let fr = f2_symplectic();
        let raw = fu_generators_raw(&fr, &FormIdeal::unit(&fr), 3);
        assert_eq!(raw.len(), 30);
        // T_ij(1) = T_{-j,-i}(1) for short roots, so 24 short transvections collapse to 12
        assert_eq!(fu_generators(&fr, &FormIdeal::unit(&fr), 3).len(), 18);
        assert!(fu_generators(&fr, &FormIdeal::zero(&fr), 3).is_empty());
    }

    #[test]
    fn level_generators_are_congruent() {
        let fr = z4();
        let fi = level2(&fr);
        let gens = fu_generators(&fr, &fi, 3);
        assert!(!gens.is_empty());
        for g in gens.iter().chain(&eu_generator_set(&fr, &fi, 3)) {
            assert!(congruence_membership(&fr, &fi, g));
        }
        assert!(!congruence_membership(&fr, &fi, &transvection(&fr, 3, 1, 2, 1).unwrap()));
    }

    #[test]
    fn z_generator_examples() {
        let fr = z4();
        let r = &*fr.ring;
        let fi = level2(&fr);
        assert_eq!(z_generator(&fr, &fi, 3, 1, 2, 2, 0).unwrap(), transvection(&fr, 3, 1, 2, 2).unwrap());
        assert!(z_generator(&fr, &fi, 3, 1, 2, 0, 1).unwrap().is_identity(r));
        let z = z_generator(&fr, &fi, 3, 1, 2, 2, 1).unwrap();
        // independent expansion: T21(1) T12(2) T21(-1)
        let direct = UMatrix::from_rows(
            r,
            &transvection(&fr, 3, 2, 1, 1)
                .unwrap()
                .mul(r, &transvection(&fr, 3, 1, 2, 2).unwrap())
                .mul(r, &transvection(&fr, 3, 2, 1, 3).unwrap())
                .rows(),
        )
        .unwrap();
        assert_eq!(z, direct);
        assert!(congruence_membership(&fr, &fi, &z));
        assert!(z_generator(&fr, &fi, 3, 1, 2, 1, 1).is_err());
    }

    #[test]
    fn theorem_generators_at_product_level_only_when_trivial_commutators() {
        let fr = z4();
        let fi = level2(&fr);
        let zero = FormIdeal::zero(&fr);
        // α ranges over a zero level: only the third family survives, and it is empty
        assert!(theorem_generators(&fr, &zero, &fi, 3, &[]).unwrap().is_empty());
        let unit = FormIdeal::unit(&fr);
        let gens = theorem_generators(&fr, &fi, &unit, 3, &[]).unwrap();
        for g in &gens {
            assert!(gu_membership(&fr, g).unwrap());
            assert!(congruence_membership(&fr, &fi, g));
        }
    }
}
