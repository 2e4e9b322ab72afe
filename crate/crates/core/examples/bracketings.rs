//! All bracketings of four leaves, evaluated with one elementary leaf and the
//! rest congruence subgroups.

use std::sync::Arc;

use formring::engine::{enumerate_bracketings, CommExpr, Instance, LeafKind, Level, Options};
use formring::ring::{zmod, FormRing};

fn main() -> formring::error::Result<()> {
    let fr = FormRing::with_bound(Arc::new(zmod(2)?), 1, false)?;
    let inst = Instance::new(fr, 3, Options::default())?;
    let a = Level { name: "A".into(), ideal: inst.unit() };
    let all_e: Vec<CommExpr> = (0..4).map(|_| CommExpr::leaf(LeafKind::E, &a)).collect();
    for shape in enumerate_bracketings(4) {
        let target = inst.evaluate(&shape.fill(&all_e))?;
        for j in 0..4 {
            let leaves: Vec<CommExpr> =
                (0..4).map(|i| CommExpr::leaf(if i == j { LeafKind::E } else { LeafKind::G }, &a)).collect();
            let expr = shape.fill(&leaves);
            let h = inst.evaluate(&expr)?;
            println!("{expr}: {:?}, equal to all-E: {:?}", h.size(), h.same_elements(&target));
        }
    }
    Ok(())
}
