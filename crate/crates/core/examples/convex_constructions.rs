//! Two different optimal constructions for a strictly convex curve: equal
//! cost, different values at the T-point.
//!
//! cargo run --example convex_constructions

use elopt::analysis::theorem1_bound;
use elopt::construct::{convex_diag, convex_plateau};
use elopt::{Curve2D, OrthantFunction, Point, SSurface};

fn main() -> elopt::Result<()> {
    // alpha(x) = 1 - 1.5 x + 0.5 x^2
    let curve = Curve2D::quadratic(1.0, 1.0, 0.5)?;
    let t = curve.t_point().expect("slopes straddle 1");
    let bound = theorem1_bound(&SSurface::Curve(curve.clone()))?;
    println!("T = ({}, {}), lower bound {}", t.t_x, t.t_y, bound.value);

    for r in [convex_plateau(&curve)?, convex_diag(&curve)?] {
        println!("{:?}: cost {} (scale {})", r.kind, r.expr.cost(), r.scale_k);
        println!("  value at T {}", r.expr.value(&[t.t_x, t.t_y]));
        println!("  cost_total {}", r.expr.cost_total()?);
        for x in [0.25, 0.75] {
            let p = Point::new(vec![x, curve.alpha(x)])?;
            let g = r.expr.one_sided_partials(&p)?;
            println!(
                "  on the curve at x = {x}: jumps ({:.6}, {:.6})",
                g.jump(0).unwrap(),
                g.jump(1).unwrap()
            );
        }
    }

    // without a T-point the plateau construction falls back to an endpoint seam
    let steep = Curve2D::quadratic(1.0, 3.0, 1.0)?;
    let r = convex_plateau(&steep)?;
    println!("steep curve: cost {} (bound {})", r.expr.cost(), theorem1_bound(&SSurface::Curve(steep))?.value);
    Ok(())
}
