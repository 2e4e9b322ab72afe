//! Involution-invariant ideals with relative form parameters.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{check_additive, check_conjugation_stable, Elem, FormRing, InvolutiveRing, ValidationReport};
use crate::subset::Subset;

/// Two-sided, involution-invariant ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ideal {
    pub members: Subset,
}

impl Ideal {
    pub fn zero(ring: &InvolutiveRing) -> Self {
        Ideal { members: Subset::singleton(ring.zero()) }
    }

    pub fn unit(ring: &InvolutiveRing) -> Self {
        Ideal { members: ring.all() }
    }

    pub fn contains(&self, a: Elem) -> bool {
        self.members.contains(a)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.members.len() <= 1
    }
}

/// A pair `(I, Γ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormIdeal {
    pub ideal: Ideal,
    pub gamma: Subset,
}

impl FormIdeal {
    pub fn zero(fr: &FormRing) -> Self {
        FormIdeal { ideal: Ideal::zero(&fr.ring), gamma: Subset::singleton(fr.ring.zero()) }
    }

    /// The whole form ring `(A, Λ)` seen as a form ideal.
    pub fn unit(fr: &FormRing) -> Self {
        FormIdeal { ideal: Ideal::unit(&fr.ring), gamma: fr.lam() }
    }

    pub fn is_zero(&self) -> bool {
        self.ideal.is_zero()
    }

    /// Componentwise inclusion.
    pub fn is_subset(&self, other: &FormIdeal) -> bool {
        self.ideal.members.is_subset(other.ideal.members) && self.gamma.is_subset(other.gamma)
    }

    /// Sort key `(|I|, I, Γ)` used for every listing of form ideals.
    pub fn sort_key(&self) -> (usize, Subset, Subset) {
        (self.ideal.len(), self.ideal.members, self.gamma)
    }
}

/// Smallest involution-invariant two-sided ideal containing `gens`.
pub fn ideal_closure(ring: &InvolutiveRing, gens: &[Elem]) -> Ideal {
    let mut set: Subset = gens.iter().copied().collect();
    set.insert(ring.zero());
    loop {
        let mut next = set;
        for x in set.iter() {
            next.insert(ring.conj(x));
            for a in ring.elements() {
                next.insert(ring.mul(a, x));
                next.insert(ring.mul(x, a));
            }
        }
        let next = ring.additive_closure(next);
        if next == set {
            return Ideal { members: set };
        }
        set = next;
    }
}

/// Additive closure of `{ ξ·γ·conj(ξ) | ξ ∈ xs, γ ∈ gs }`.
pub fn twisted_span(ring: &InvolutiveRing, xs: Subset, gs: Subset) -> Subset {
    let mut out = Subset::singleton(ring.zero());
    for x in xs.iter() {
        for g in gs.iter() {
            out.insert(ring.mul3(x, g, ring.conj(x)));
        }
    }
    ring.additive_closure(out)
}

/// `(Γ_min(I), Γ_max(I))`.
pub fn gamma_bounds(fr: &FormRing, ideal: Ideal) -> (Subset, Subset) {
    let ring = &fr.ring;
    let l = fr.lambda();
    let first: Subset = ideal
        .members
        .iter()
        .map(|x| ring.sub(x, ring.mul(l, ring.conj(x))))
        .collect();
    let min = ring.additive_closure(first.union(twisted_span(ring, ideal.members, fr.lam())));
    let max = ideal.members.intersection(fr.lam());
    (min, max)
}

pub fn validate_ideal(ring: &InvolutiveRing, ideal: Ideal) -> ValidationReport {
    let mut report = ValidationReport::default();
    let set = ideal.members;
    check_additive(ring, set, "I", &mut report);
    'scan: for x in set.iter() {
        let c = ring.conj(x);
        if !set.contains(c) {
            report.push(
                "involution-invariant",
                format!("conj({}) = {} not in I", ring.label(x), ring.label(c)),
                vec![x, c],
            );
            break;
        }
        for a in ring.elements() {
            for (y, side) in [(ring.mul(a, x), "left"), (ring.mul(x, a), "right")] {
                if !set.contains(y) {
                    report.push(
                        "two-sided",
                        format!("{side} multiple of {} by {} not in I", ring.label(x), ring.label(a)),
                        vec![a, x, y],
                    );
                    break 'scan;
                }
            }
        }
    }
    report
}

/// Violations of the ideal laws and of `Γ_min ⊆ Γ ⊆ Γ_max`, additivity and
/// `αΓᾱ ⊆ Γ`.
pub fn validate_form_ideal(fr: &FormRing, fi: &FormIdeal) -> ValidationReport {
    let ring = &fr.ring;
    let mut report = validate_ideal(ring, fi.ideal);
    let (min, max) = gamma_bounds(fr, fi.ideal);
    if !fi.gamma.is_subset(fi.ideal.members) {
        let extra = fi.gamma.difference(fi.ideal.members).to_vec();
        report.push("gamma-in-ideal", format!("Γ ⊄ I, extra {extra:?}"), extra);
    }
    if !min.is_subset(fi.gamma) {
        let missing = min.difference(fi.gamma).to_vec();
        report.push("gamma-lower-bound", format!("Γ_min ⊄ Γ, missing {missing:?}"), missing);
    }
    if !fi.gamma.is_subset(max) {
        let extra = fi.gamma.difference(max).to_vec();
        report.push("gamma-upper-bound", format!("Γ ⊄ Γ_max, extra {extra:?}"), extra);
    }
    check_additive(ring, fi.gamma, "Γ", &mut report);
    check_conjugation_stable(ring, fi.gamma, "Γ", &mut report);
    report
}

/// `(I + J, Γ + Δ)`.
pub fn sum_form_ideals(ring: &InvolutiveRing, a: &FormIdeal, b: &FormIdeal) -> FormIdeal {
    FormIdeal {
        ideal: Ideal { members: ring.additive_closure(a.ideal.members.union(b.ideal.members)) },
        gamma: ring.additive_closure(a.gamma.union(b.gamma)),
    }
}

/// `(I∘J, Γ∘Δ)` with `I∘J = IJ + JI` and `Γ∘Δ = Γ_min(I∘J) + ᴶΓ + ᴵΔ`.
pub fn symmetrized_product(fr: &FormRing, a: &FormIdeal, b: &FormIdeal) -> FormIdeal {
    let ring = &fr.ring;
    let mut products = Subset::singleton(ring.zero());
    for x in a.ideal.members.iter() {
        for y in b.ideal.members.iter() {
            products.insert(ring.mul(x, y));
            products.insert(ring.mul(y, x));
        }
    }
    let ideal = Ideal { members: ring.additive_closure(products) };
    let (gmin, _) = gamma_bounds(fr, ideal);
    let j_gamma = twisted_span(ring, b.ideal.members, a.gamma);
    let i_delta = twisted_span(ring, a.ideal.members, b.gamma);
    let gamma = ring.additive_closure(gmin.union(j_gamma).union(i_delta));
    FormIdeal { ideal, gamma }
}

/// Left-normed product `((a0 ∘ a1) ∘ a2) ∘ ...`.
pub fn left_normed_product(fr: &FormRing, parts: &[FormIdeal]) -> Option<FormIdeal> {
    let (first, rest) = parts.split_first()?;
    Some(rest.iter().fold(*first, |acc, x| symmetrized_product(fr, &acc, x)))
}

/// Every involution-invariant ideal of the ring, sorted by `(|I|, mask)`.
pub fn enumerate_ideals(ring: &InvolutiveRing, budget: usize) -> Result<Vec<Ideal>> {
    let zero = ideal_closure(ring, &[]);
    let mut seen = BTreeSet::new();
    seen.insert(zero);
    let mut queue = vec![zero];
    while let Some(i) = queue.pop() {
        for x in ring.all().difference(i.members).iter() {
            let mut gens = i.members.to_vec();
            gens.push(x);
            let next = ideal_closure(ring, &gens);
            if seen.insert(next) {
                if seen.len() > budget {
                    return Err(Error::BudgetExceeded { budget });
                }
                queue.push(next);
            }
        }
    }
    let mut out: Vec<Ideal> = seen.into_iter().collect();
    out.sort_by_key(|i| (i.len(), i.members));
    Ok(out)
}

/// All relative form parameters of level `ideal`, sorted by mask.
pub fn enumerate_gammas(fr: &FormRing, ideal: Ideal, budget: usize) -> Result<Vec<Subset>> {
    let ring = &fr.ring;
    let (min, max) = gamma_bounds(fr, ideal);
    let candidates = crate::ring::subgroups_between(ring, min, max, budget)?;
    Ok(candidates
        .into_iter()
        .filter(|&g| {
            ring.elements()
                .all(|a| g.iter().all(|x| g.contains(ring.mul3(a, x, ring.conj(a)))))
        })
        .collect())
}

/// The full lattice of form ideals of `fr`, sorted by [`FormIdeal::sort_key`].
pub fn enumerate_form_ideals(fr: &FormRing, budget: usize) -> Result<Vec<FormIdeal>> {
    let mut out = Vec::new();
    for ideal in enumerate_ideals(&fr.ring, budget)? {
        for gamma in enumerate_gammas(fr, ideal, budget)? {
            out.push(FormIdeal { ideal, gamma });
            if out.len() > budget {
                return Err(Error::BudgetExceeded { budget });
            }
        }
    }
    out.sort_by_key(|f| f.sort_key());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ring::{build_ring, zmod, RingSpec};

    fn s(v: &[Elem]) -> Subset {
        v.iter().copied().collect()
    }

    fn z4_symplectic() -> FormRing {
        FormRing::with_bound(Arc::new(zmod(4).unwrap()), 3, true).unwrap()
    }

    fn z8_symplectic() -> FormRing {
        FormRing::with_bound(Arc::new(zmod(8).unwrap()), 7, true).unwrap()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(ideal_closure(&zmod(4).unwrap(), &[2]).members, s(&[0, 2]));
        assert_eq!(ideal_closure(&zmod(8).unwrap(), &[4]).members, s(&[0, 4]));
        let f4 = build_ring(&RingSpec::Quadratic { m: Some(2), base: None, poly: vec![1, 1, 1], conj_x: vec![1, 1] })
            .unwrap();
        assert_eq!(ideal_closure(&f4, &[2]).members, f4.all());
    }

    #[test]
    fn gamma_bound_examples() {
        let fr = z4_symplectic();
        assert_eq!(gamma_bounds(&fr, Ideal { members: s(&[0, 2]) }), (s(&[0]), s(&[0, 2])));
        assert_eq!(gamma_bounds(&fr, Ideal::zero(&fr.ring)), (s(&[0]), s(&[0])));
        let (min, max) = gamma_bounds(&fr, Ideal::unit(&fr.ring));
        assert_eq!(max, fr.lam());
        assert_eq!(min, fr.lam());
    }

    #[test]
    fn validation_examples() {
        let fr = z4_symplectic();
        let i = Ideal { members: s(&[0, 2]) };
        assert!(validate_form_ideal(&fr, &FormIdeal { ideal: i, gamma: s(&[0, 2]) }).is_valid());
        assert!(validate_form_ideal(&fr, &FormIdeal { ideal: i, gamma: s(&[0]) }).is_valid());
        let bad = validate_form_ideal(&fr, &FormIdeal { ideal: i, gamma: s(&[0, 1]) });
        assert!(bad.violations.iter().any(|v| v.law == "gamma-in-ideal"));
    }

    #[test]
    fn sum_examples() {
        let fr = z8_symplectic();
        let a = FormIdeal { ideal: Ideal { members: s(&[0, 4]) }, gamma: s(&[0, 4]) };
        let b = FormIdeal { ideal: Ideal { members: s(&[0, 2, 4, 6]) }, gamma: s(&[0]) };
        let c = sum_form_ideals(&fr.ring, &a, &b);
        assert_eq!((c.ideal.members, c.gamma), (s(&[0, 2, 4, 6]), s(&[0, 4])));
        assert_eq!(sum_form_ideals(&fr.ring, &a, &FormIdeal::zero(&fr)), a);
        assert_eq!(sum_form_ideals(&fr.ring, &a, &a), a);
    }

    #[test]
    fn product_examples() {
        let fr = z4_symplectic();
        let i = FormIdeal { ideal: Ideal { members: s(&[0, 2]) }, gamma: s(&[0, 2]) };
        let p = symmetrized_product(&fr, &i, &i);
        assert_eq!(p, FormIdeal::zero(&fr));
        assert_eq!(symmetrized_product(&fr, &i, &FormIdeal::unit(&fr)), i);
        assert!(symmetrized_product(&fr, &FormIdeal::zero(&fr), &i).is_zero());
    }

    #[test]
    fn z4_lattice() {
        let fr = z4_symplectic();
        let lattice = enumerate_form_ideals(&fr, 1000).unwrap();
        let got: Vec<(Subset, Subset)> = lattice.iter().map(|f| (f.ideal.members, f.gamma)).collect();
        assert_eq!(
            got,
            vec![
                (s(&[0]), s(&[0])),
                (s(&[0, 2]), s(&[0])),
                (s(&[0, 2]), s(&[0, 2])),
                (s(&[0, 1, 2, 3]), s(&[0, 1, 2, 3])),
            ]
        );
        for fi in &lattice {
            assert!(validate_form_ideal(&fr, fi).is_valid());
        }
    }

    #[test]
    fn product_is_symmetric_and_valid_on_small_lattices() {
        for fr in [z4_symplectic(), z8_symplectic()] {
            let lattice = enumerate_form_ideals(&fr, 1000).unwrap();
            for a in &lattice {
                for b in &lattice {
                    let ab = symmetrized_product(&fr, a, b);
                    assert_eq!(ab, symmetrized_product(&fr, b, a));
                    assert!(validate_form_ideal(&fr, &ab).is_valid(), "{a:?} ∘ {b:?}");
                    assert!(validate_form_ideal(&fr, &sum_form_ideals(&fr.ring, a, b)).is_valid());
                    for c in &lattice {
                        if a.is_subset(c) {
                            assert!(ab.is_subset(&symmetrized_product(&fr, c, b)));
                        }
                    }
                }
            }
        }
    }
}
