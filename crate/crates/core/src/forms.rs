//! The sesquilinear form `f`, the hermitian form `h`, the quadratic form `q`,
//! and membership in unitary and congruence subgroups.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form_ideal::FormIdeal;
use crate::matrix::UMatrix;
use crate::ring::{Elem, FormRing, InvolutiveRing};
use crate::subset::Subset;

/// Values of the three forms on a pair of vectors. `q` is the
/// representative `f(u, u)` of the class `q(u) ∈ A/Λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormsTriple {
    pub f_value: Elem,
    pub h_value: Elem,
    pub q_value: Elem,
}

/// `f(u, v) = Σ conj(u_k) v_{-k}` over `k = 1..n`; vectors in position order.
pub fn eval_f(ring: &InvolutiveRing, n: usize, u: &[Elem], v: &[Elem]) -> Elem {
    let mut acc = ring.zero();
    for k in 0..n {
        // position of -k-1 is 2n-1-k
        acc = ring.add(acc, ring.mul(ring.conj(u[k]), v[2 * n - 1 - k]));
    }
    acc
}

/// `h(u, v)` from its coordinate formula.
pub fn eval_h(fr: &FormRing, n: usize, u: &[Elem], v: &[Elem]) -> Elem {
    let ring = &*fr.ring;
    let mut plus = ring.zero();
    let mut minus = ring.zero();
    for k in 0..n {
        let nk = 2 * n - 1 - k;
        plus = ring.add(plus, ring.mul(ring.conj(u[k]), v[nk]));
        minus = ring.add(minus, ring.mul(ring.conj(u[nk]), v[k]));
    }
    ring.add(plus, ring.mul(fr.lambda(), minus))
}

pub fn eval_forms(fr: &FormRing, n: usize, u: &[Elem], v: &[Elem]) -> Result<FormsTriple> {
    if u.len() != 2 * n || v.len() != 2 * n {
        return Err(Error::Dimension(format!(
            "vectors of length {} and {} for n = {n}",
            u.len(),
            v.len()
        )));
    }
    let ring = &*fr.ring;
    let f_value = eval_f(ring, n, u, v);
    let h_value = eval_h(fr, n, u, v);
    let via_f = ring.add(f_value, ring.mul(fr.lambda(), ring.conj(eval_f(ring, n, v, u))));
    assert_eq!(h_value, via_f, "h disagrees with f + λ·conj(f) on {u:?}, {v:?}");
    Ok(FormsTriple { f_value, h_value, q_value: eval_f(ring, n, u, u) })
}

/// `h(e_i, e_j)` for positions `p, q`.
#[inline]
pub fn h_basis(fr: &FormRing, n: usize, p: usize, q: usize) -> Elem {
    if p + q != 2 * n - 1 {
        fr.ring.zero()
    } else if p < n {
        fr.ring.one()
    } else {
        fr.lambda()
    }
}

/// Whether `g` preserves `h` on basis pairs and `f(ge_j, ge_j) ∈ Λ`.
///
/// Such a `g` is automatically invertible, since `g* H g = H` with `H`
/// invertible.
pub fn preserves_forms(fr: &FormRing, g: &UMatrix) -> bool {
    preserves_forms_mod(fr, g, fr.lam())
}

fn preserves_forms_mod(fr: &FormRing, g: &UMatrix, quad: Subset) -> bool {
    let n = g.n();
    let d = g.dim();
    let cols: Vec<Vec<Elem>> = (0..d).map(|c| g.column(c)).collect();
    for p in 0..d {
        if !quad.contains(eval_f(&fr.ring, n, &cols[p], &cols[p])) {
            return false;
        }
        for q in 0..d {
            if eval_h(fr, n, &cols[p], &cols[q]) != h_basis(fr, n, p, q) {
                return false;
            }
        }
    }
    true
}

/// Membership in `GU(2n, A, Λ)`; a singular `g` is an error.
pub fn gu_membership(fr: &FormRing, g: &UMatrix) -> Result<bool> {
    g.inverse(&fr.ring)?;
    Ok(preserves_forms(fr, g))
}

/// `g ≡ e mod I` entrywise and `f(ge_j, ge_j) ∈ Γ` for every `j`.
///
/// Assumes `g ∈ GU(2n, A, Λ)`.
pub fn congruent_mod(fr: &FormRing, fi: &FormIdeal, g: &UMatrix) -> bool {
    let ring = &*fr.ring;
    let d = g.dim();
    let n = g.n();
    for r in 0..d {
        for c in 0..d {
            let x = g.at(r, c);
            let x = if r == c { ring.sub(x, ring.one()) } else { x };
            if !fi.ideal.contains(x) {
                return false;
            }
        }
    }
    (0..d).all(|c| {
        let col = g.column(c);
        fi.gamma.contains(eval_f(ring, n, &col, &col))
    })
}

/// Membership in the principal congruence subgroup `GU(2n, I, Γ)`.
pub fn congruence_membership(fr: &FormRing, fi: &FormIdeal, g: &UMatrix) -> bool {
    preserves_forms(fr, g) && congruent_mod(fr, fi, g)
}

/// Membership in `CU(2n, I, Γ)`: `[g, x] ∈ GU(2n, I, Γ)` for every generator
/// `x` of the ambient unitary group.
pub fn cu_membership(
    fr: &FormRing,
    fi: &FormIdeal,
    g: &UMatrix,
    ambient_gens: &[UMatrix],
) -> Result<bool> {
    if !preserves_forms(fr, g) {
        return Ok(false);
    }
    let ring = &*fr.ring;
    let g_inv = g.inverse(ring)?;
    for x in ambient_gens {
        let x_inv = x.inverse(ring)?;
        let c = UMatrix::commutator_with(ring, g, x, &g_inv, &x_inv);
        if !congruent_mod(fr, fi, &c) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use proptest::prelude::*;

    use super::*;
    use crate::form_ideal::Ideal;
    use crate::ring::{build_ring, zmod, RingSpec};

    fn z4() -> FormRing {
        FormRing::with_bound(Arc::new(zmod(4).unwrap()), 3, true).unwrap()
    }

    fn basis(n: usize, i: i32) -> Vec<Elem> {
        let mut v = vec![0; 2 * n];
        v[crate::matrix::omega_pos(n, i)] = 1;
        v
    }

    #[test]
    fn basis_values() {
        let fr = z4();
        let n = 3;
        let t = eval_forms(&fr, n, &basis(n, 1), &basis(n, -1)).unwrap();
        assert_eq!((t.f_value, t.h_value), (1, 1));
        let t = eval_forms(&fr, n, &basis(n, -1), &basis(n, 1)).unwrap();
        assert_eq!((t.f_value, t.h_value), (0, 3));
        let t = eval_forms(&fr, n, &basis(n, 1), &basis(n, 2)).unwrap();
        assert_eq!((t.f_value, t.h_value, t.q_value), (0, 0, 0));
        assert!(eval_forms(&fr, n, &basis(n, 1), &[0, 1]).is_err());
        for p in 0..6 {
            for q in 0..6 {
                let u = basis(n, crate::matrix::OmegaIndex::from_pos(n, p).0);
                let v = basis(n, crate::matrix::OmegaIndex::from_pos(n, q).0);
                assert_eq!(eval_h(&fr, n, &u, &v), h_basis(&fr, n, p, q));
            }
        }
    }

    #[test]
    fn membership_examples() {
        let fr = z4();
        let r = &*fr.ring;
        let e = UMatrix::identity(r, 3);
        assert!(gu_membership(&fr, &e).unwrap());
        let mut g = e.clone();
        g.set(1, 2, 1);
        assert!(!gu_membership(&fr, &g).unwrap());
        // h(g e_2, g e_-1) = 1
        assert_eq!(eval_h(&fr, 3, &g.column(1), &g.column(5)), 1);
        let mut singular = e.clone();
        singular.set(1, 1, 0);
        assert!(gu_membership(&fr, &singular).is_err());
    }

    #[test]
    fn minus_identity_is_central_and_full_congruence() {
        let fr = z4();
        let r = &*fr.ring;
        let mut minus = UMatrix::zero(r, 3);
        for p in 0..6 {
            minus.set_at(p, p, 3);
        }
        assert!(gu_membership(&fr, &minus).unwrap());
        let zero = FormIdeal { ideal: Ideal::zero(r), gamma: Subset::singleton(0) };
        let gens = crate::elementary::fu_generators(&fr, &FormIdeal::unit(&fr), 3);
        assert!(cu_membership(&fr, &zero, &minus, &gens).unwrap());
        assert!(cu_membership(&fr, &zero, &UMatrix::identity(r, 3), &gens).unwrap());
    }

    proptest! {
        #[test]
        fn h_is_f_plus_lambda_fbar(u in proptest::collection::vec(0u8..4, 6), v in proptest::collection::vec(0u8..4, 6)) {
            let fr = z4();
            eval_forms(&fr, 3, &u, &v).unwrap();
        }

        #[test]
        fn h_is_f_plus_lambda_fbar_unitary(u in proptest::collection::vec(0u8..4, 6), v in proptest::collection::vec(0u8..4, 6)) {
            let ring = build_ring(&RingSpec::Quadratic { m: Some(2), base: None, poly: vec![1, 1, 1], conj_x: vec![1, 1] }).unwrap();
            let fr = FormRing::with_bound(Arc::new(ring), 1, true).unwrap();
            eval_forms(&fr, 3, &u, &v).unwrap();
        }
    }
}
