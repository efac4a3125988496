//! Brackets on the optimum: normal-ratio bound, construction cost and grid
//! LP bound.
//!
//! cargo run --release --example gap_report

use elopt::analysis::gap_report;
use elopt::{Curve2D, Hyperplane, SSurface};

fn main() -> elopt::Result<()> {
    let surfaces = [
        ("hyperplane (1, 2), M = 1", SSurface::Hyperplane(Hyperplane::new(vec![1.0, 2.0], 1.0)?)),
        ("convex quadratic", SSurface::Curve(Curve2D::quadratic(1.0, 1.0, 0.5)?)),
        ("concave quadratic", SSurface::Curve(Curve2D::quadratic(1.0, 1.0, -0.5)?)),
        ("hyperbola", SSurface::Curve(Curve2D::hyperbola(2.0, 1.0, 0.4)?)),
    ];
    for (name, s) in &surfaces {
        let r = gap_report(s, Some(32))?;
        println!("{name}");
        println!("  normal-ratio bound {:.6} at {:?}", r.thm1_bound, r.witness.point);
        println!("  {:?} cost {:.6}", r.construction_kind.unwrap(), r.construction_cost.unwrap());
        println!("  grid LP (m = 32) {:.6}", r.lp_bound.unwrap());
        println!("  gaps: construction {:e}, lp {:.6}", r.gap_construction.unwrap(), r.gap_lp.unwrap());
    }
    Ok(())
}
