//! Validate a few planar curves and a hyperplane, and locate their T-points.
//!
//! cargo run --example validate_surface

use elopt::surface::ValidationReport;
use elopt::{Curve2D, CurveFamily, Hyperplane, SSurface, Shape};

fn show(name: &str, r: &ValidationReport) {
    println!("{name}: valid {} shape {:?}", r.valid, r.shape);
    if let (Some(lo), Some(hi)) = (r.slope_min, r.slope_max) {
        println!("  -alpha' in [{lo:.4}, {hi:.4}]");
    }
    for v in &r.violations {
        println!("  violation: {v}");
    }
}

fn main() -> elopt::Result<()> {
    let curves = [
        ("convex quadratic", Curve2D::quadratic(1.0, 1.0, 0.5)?),
        ("concave quadratic", Curve2D::quadratic(1.0, 1.0, -0.5)?),
        ("steep convex quadratic", Curve2D::quadratic(1.0, 3.0, 1.0)?),
        ("hyperbola", Curve2D::hyperbola(2.0, 1.0, 0.4)?),
        ("line", Curve2D::line(2.0, 1.0)?),
    ];
    for (name, c) in &curves {
        show(name, &c.validate());
        println!("  regime {:?}", c.slope_regime());
        match c.t_point() {
            Some(t) => println!("  T = ({:.6}, {:.6}), beta(alpha(t_x)) = {:.6}", t.t_x, t.t_y, c.beta(t.t_y)?),
            None => println!("  no T-point"),
        }
    }

    // a wrong shape flag is reported, not silently accepted
    let lying = Curve2D::new(1.0, 1.0, CurveFamily::Quadratic { c2: 0.5 }, Shape::StrictlyConcave)?;
    show("mislabelled quadratic", &lying.validate());

    let h = SSurface::Hyperplane(Hyperplane::new(vec![1.0, 2.0, 4.0], 2.0)?);
    show("hyperplane", &h.validate());
    show("degenerate hyperplane", &Hyperplane::new(vec![1.0, 0.0], 1.0)?.validate());
    Ok(())
}
