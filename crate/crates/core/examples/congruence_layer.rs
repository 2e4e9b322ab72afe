//! The principal congruence subgroup of level (2Z/4, Γ) on Z/4, computed as
//! an additive layer, and random members of it.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use formring::engine::layer::LayerGroup;
use formring::form_ideal::{gamma_bounds, ideal_closure, FormIdeal};
use formring::forms::congruence_membership;
use formring::ring::{zmod, FormRing};

fn main() -> formring::error::Result<()> {
    let fr = FormRing::with_bound(Arc::new(zmod(4)?), 3, true)?;
    let ideal = ideal_closure(&fr.ring, &[2]);
    let (gmin, gmax) = gamma_bounds(&fr, ideal);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for gamma in [gmin, gmax] {
        let fi = FormIdeal { ideal, gamma };
        let layer = LayerGroup::new(&fr, &fi, 3)?;
        let ok = (0..1000).all(|_| congruence_membership(&fr, &fi, &layer.sample(&fr.ring, &mut rng)));
        println!("Γ = {:?}: 2^{} elements, 1000 samples congruent: {ok}", gamma.to_vec(), layer.log2_size());
    }
    Ok(())
}
