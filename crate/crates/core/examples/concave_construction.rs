//! The stepped construction for a strictly concave curve.
//!
//! cargo run --example concave_construction

use elopt::analysis::{check_feasible, theorem1_bound};
use elopt::construct::concave_construct;
use elopt::{Curve2D, OrthantFunction, SSurface};

fn main() -> elopt::Result<()> {
    // alpha(x) = 1 - 0.5 x - 0.5 x^2
    let curve = Curve2D::quadratic(1.0, 1.0, -0.5)?;
    let s = SSurface::Curve(curve.clone());
    let t = curve.t_point().expect("slopes straddle 1");
    let r = concave_construct(&curve)?;
    println!("T = ({}, {}), k = {}", t.t_x, t.t_y, r.scale_k);
    println!("cost {} lower bound {}", r.expr.cost(), theorem1_bound(&s)?.value);
    println!("cost_total {}", r.expr.cost_total()?);
    let feas = check_feasible(&r.expr, &s, 1000, 0)?;
    println!("min jump {} at {:?}", feas.min_jump, feas.witness_point);
    for y in [0.0, 0.3, 0.625, 0.9] {
        let x = curve.beta(y)?;
        println!("f({x:.4}, {y}) = {:.6}", r.expr.value(&[x, y]));
    }

    // shallow and steep curves without a T-point use endpoint seams
    for (b, c2) in [(0.4, -0.2), (2.0, -0.5)] {
        let c = Curve2D::quadratic(1.0, b, c2)?;
        let r = concave_construct(&c)?;
        println!(
            "b = {b}: regime {:?}, cost {} bound {}",
            c.slope_regime(),
            r.expr.cost(),
            theorem1_bound(&SSurface::Curve(c))?.value
        );
    }
    Ok(())
}
