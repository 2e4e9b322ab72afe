//! Elementary transvections and an exhaustive sweep of the relations they satisfy.

use std::sync::Arc;

use formring::elementary::transvection;
use formring::forms::preserves_forms;
use formring::ring::{quadratic, zmod, FormRing};
use formring::steinberg::{sweep, SweepMode};

fn main() -> formring::error::Result<()> {
    let f2 = zmod(2)?;
    // F4 = F2[x]/(x² + x + 1) with the Frobenius x ↦ x + 1
    let f4 = quadratic(&f2, &[1, 1, 1], &[1, 1])?;
    let rings = [
        ("F2 symplectic", FormRing::with_bound(Arc::new(zmod(2)?), 1, true)?),
        ("F2 orthogonal", FormRing::with_bound(Arc::new(zmod(2)?), 1, false)?),
        ("Z/4 symplectic", FormRing::with_bound(Arc::new(zmod(4)?), 3, true)?),
        ("F4 unitary", FormRing::with_bound(Arc::new(f4), 1, true)?),
    ];
    for (name, fr) in &rings {
        let t = transvection(fr, 3, 1, 2, fr.ring.one())?;
        assert!(preserves_forms(fr, &t));
        let report = sweep(fr, 3, SweepMode::Exhaustive);
        println!("{name}: {} relation instances, passed = {}", report.total(), report.passed());
    }
    Ok(())
}
