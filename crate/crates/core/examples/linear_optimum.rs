//! The optimal EL function for a hyperplane `c . x = M` is
//! `min(c . x, M) / min c`, with cost `max c / min c`.
//!
//! cargo run --example linear_optimum

use elopt::analysis::{check_feasible, theorem1_bound};
use elopt::construct::linear_opt;
use elopt::{Hyperplane, Point, SSurface};

fn main() -> elopt::Result<()> {
    for (c, m) in [(vec![1.0, 2.0], 1.0), (vec![3.0, 3.0, 3.0], 2.0), (vec![2.0, 5.0], 10.0)] {
        let h = Hyperplane::new(c.clone(), m)?;
        let s = SSurface::Hyperplane(h.clone());
        let r = linear_opt(&h)?;
        let bound = theorem1_bound(&s)?;
        let feas = check_feasible(&r.expr, &s, 1000, 0)?;
        println!("c = {c:?}, M = {m}");
        println!("  scale {} cost {} lower bound {}", r.scale_k, r.expr.cost(), bound.value);
        println!("  cost_total {}", r.expr.cost_total()?);
        println!("  min jump {} on axis {}", feas.min_jump, feas.witness_axis);
        let x = Point::new(vec![m / (2.0 * c[0]); c.len()])?;
        let g = r.expr.one_sided_partials(&x)?;
        println!("  at {:?}: value {} right partials {:?}", x.coords(), r.expr.eval(&x)?, g.right);
    }
    Ok(())
}
