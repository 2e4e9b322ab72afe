//! Inclusion arguments that need generators only, for subgroups too large
//! to enumerate.

use rayon::prelude::*;

use crate::engine::subgroup::commutator_seeds;
use crate::engine::store::KeySet;
use crate::error::Result;
use crate::form_ideal::FormIdeal;
use crate::forms::{congruence_membership, preserves_forms};
use crate::matrix::{KeyCodec, UMatrix};
use crate::ring::{FormRing, InvolutiveRing};

/// First needle missing from `hay`, compared by encoding.
pub fn first_not_among(codec: &KeyCodec, needles: &[UMatrix], hay: &[UMatrix]) -> Option<UMatrix> {
    let set: KeySet = hay.iter().map(|m| codec.encode(m)).collect();
    needles.iter().find(|m| !set.contains(&codec.encode(m))).cloned()
}

/// First target that is neither a commutator `c` nor a product `c₁c₂` of
/// commutators of generator pairs (or their inverses). `None` means every
/// target lies in `[⟨h⟩, ⟨k⟩]`.
pub fn first_not_short_commutator_word(
    ring: &InvolutiveRing,
    n: usize,
    targets: &[UMatrix],
    h: &[UMatrix],
    k: &[UMatrix],
) -> Result<Option<UMatrix>> {
    let codec = KeyCodec::new(ring, n)?;
    let mut words = commutator_seeds(ring, n, h, k)?;
    let inverses: Vec<UMatrix> = words.iter().map(|c| c.inverse(ring)).collect::<Result<_>>()?;
    words.extend(inverses);
    let set: KeySet = words.iter().map(|c| codec.encode(c)).collect();
    let pairs: Vec<(UMatrix, UMatrix)> =
        words.iter().map(|c| Ok((c.clone(), c.inverse(ring)?))).collect::<Result<_>>()?;
    let missing = targets.iter().find(|t| {
        let key = codec.encode(t);
        if set.contains(&key) || t.is_identity(ring) {
            return false;
        }
        !pairs.par_iter().any(|(_, ci)| set.contains(&codec.encode(&ci.mul(ring, t))))
    });
    Ok(missing.cloned())
}

/// `[⟨h⟩, ⟨k⟩] ⊆ GU(2n, level)` when every generator is unitary and every
/// generator commutator is congruent: the commutator subgroup is the normal
/// closure of those commutators in `⟨h, k⟩ ≤ GU(2n, A, Λ)`, and the principal
/// congruence subgroup is normal there. Returns the first offending matrix.
pub fn first_outside_level(
    fr: &FormRing,
    n: usize,
    level: &FormIdeal,
    h: &[UMatrix],
    k: &[UMatrix],
) -> Result<Option<UMatrix>> {
    if let Some(g) = h.iter().chain(k).find(|g| !preserves_forms(fr, g)) {
        return Ok(Some(g.clone()));
    }
    let seeds = commutator_seeds(&fr.ring, n, h, k)?;
    Ok(seeds.into_iter().find(|c| !congruence_membership(fr, level, c)))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::elementary::fu_generators;
    use crate::ring::zmod;

    #[test]
    fn z4_elementary_group_is_perfect_by_words() {
        let fr = FormRing::with_bound(Arc::new(zmod(4).unwrap()), 3, true).unwrap();
        let gens = fu_generators(&fr, &FormIdeal::unit(&fr), 3);
        assert!(first_not_short_commutator_word(&fr.ring, 3, &gens, &gens, &gens).unwrap().is_none());
    }

    #[test]
    fn abelian_pair_has_no_words() {
        let fr = FormRing::with_bound(Arc::new(zmod(2).unwrap()), 1, true).unwrap();
        let gens = fu_generators(&fr, &FormIdeal::unit(&fr), 1);
        let one = &gens[..1];
        assert!(first_not_short_commutator_word(&fr.ring, 1, one, one, one).unwrap().is_some());
    }
}
