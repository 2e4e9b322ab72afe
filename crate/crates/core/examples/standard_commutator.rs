//! Mixed commutators of elementary and congruence subgroups on the orthogonal
//! group O+(6, 2) and its full congruence subgroup.

use std::sync::Arc;

use formring::engine::{CommExpr, Instance, LeafKind, Level, Options};
use formring::ring::{zmod, FormRing};

fn main() -> formring::error::Result<()> {
    let fr = FormRing::with_bound(Arc::new(zmod(2)?), 1, false)?;
    let inst = Instance::new(fr, 3, Options::default())?;
    let a = Level { name: "A".into(), ideal: inst.unit() };
    let e = CommExpr::leaf(LeafKind::E, &a);
    let g = CommExpr::leaf(LeafKind::G, &a);
    for expr in [g.clone(), e.clone(), CommExpr::leaf(LeafKind::C, &a), CommExpr::bracket(e.clone(), g.clone()), CommExpr::bracket(g.clone(), g)] {
        let h = inst.evaluate(&expr)?;
        println!("{expr}: {:?}", h.size());
    }
    Ok(())
}
