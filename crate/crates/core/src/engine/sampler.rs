//! Random products of known members.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::UMatrix;
use crate::ring::InvolutiveRing;

/// Draws words of the given length over `gens` and their inverses.
pub struct WordSampler<'a> {
    ring: &'a InvolutiveRing,
    n: usize,
    letters: Vec<UMatrix>,
    length: usize,
    rng: ChaCha8Rng,
}

impl<'a> WordSampler<'a> {
    pub fn new(ring: &'a InvolutiveRing, n: usize, gens: &[UMatrix], length: usize, seed: u64) -> Result<Self> {
        let mut letters = Vec::with_capacity(2 * gens.len());
        for g in gens {
            letters.push(g.clone());
            letters.push(g.inverse(ring)?);
        }
        Ok(WordSampler { ring, n, letters, length, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn next_word(&mut self) -> UMatrix {
        let mut m = UMatrix::identity(self.ring, self.n);
        if self.letters.is_empty() {
            return m;
        }
        for _ in 0..self.length {
            let k = self.rng.gen_range(0..self.letters.len());
            m = m.mul(self.ring, &self.letters[k]);
        }
        m
    }
}

/// `count` seeded random words; deterministic in `seed`.
pub fn random_word_sampler(
    ring: &InvolutiveRing,
    n: usize,
    gens: &[UMatrix],
    length: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<UMatrix>> {
    if gens.iter().any(|g| g.n() != n) {
        return Err(Error::Dimension("generator of the wrong size".into()));
    }
    let mut s = WordSampler::new(ring, n, gens, length, seed)?;
    Ok((0..count).map(|_| s.next_word()).collect())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::elementary::fu_generators;
    use crate::form_ideal::FormIdeal;
    use crate::forms::preserves_forms;
    use crate::ring::{zmod, FormRing};

    #[test]
    fn deterministic_members() {
        let fr = FormRing::with_bound(Arc::new(zmod(4).unwrap()), 3, true).unwrap();
        let gens = fu_generators(&fr, &FormIdeal::unit(&fr), 3);
        let a = random_word_sampler(&fr.ring, 3, &gens, 12, 20, 5).unwrap();
        let b = random_word_sampler(&fr.ring, 3, &gens, 12, 20, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|g| preserves_forms(&fr, g)));
    }
}
