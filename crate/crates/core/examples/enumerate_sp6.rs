//! Enumerates Sp(6, 2) from its elementary generators.

use std::sync::Arc;
use std::time::Instant;

use formring::elementary::fu_generators;
use formring::engine::{closure_enumerate, DEFAULT_BUDGET};
use formring::form_ideal::FormIdeal;
use formring::ring::{zmod, FormRing};

fn main() -> formring::error::Result<()> {
    let fr = FormRing::with_bound(Arc::new(zmod(2)?), 1, true)?;
    let gens = fu_generators(&fr, &FormIdeal::unit(&fr), 3);
    let start = Instant::now();
    let group = closure_enumerate(&fr.ring, 3, &gens, DEFAULT_BUDGET)?;
    let order: u64 = (1 << 9) * (4 - 1) * (16 - 1) * (64 - 1);
    println!(
        "{} generators, {} elements (expected {order}) in {:.1?}",
        gens.len(),
        group.size().unwrap_or(0),
        start.elapsed()
    );
    Ok(())
}
