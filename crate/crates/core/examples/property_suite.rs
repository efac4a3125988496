//! The sampled EL property suite on EL and non-EL functions.
//!
//! cargo run --release --example property_suite

use elopt::analysis::{check_el, check_feasible, FnFunction};
use elopt::construct::linear_opt;
use elopt::{ElExpr, Hyperplane, Point, SSurface};

fn main() -> elopt::Result<()> {
    let bbox = Point::new(vec![2.0, 2.0])?;

    let f = ElExpr::truncate(1.0, ElExpr::linear(vec![1.0, 2.0])?)?;
    let r = check_el(&f, &bbox, 10_000, 0)?;
    println!("min(x + 2y, 1): passed {}", r.passed);
    for v in &r.verdicts {
        println!("  {:?}: worst {:e} over {} checks", v.property, v.worst_violation, v.checks);
    }

    let xy = FnFunction::new(2, |x: &[f64]| x[0] * x[1]);
    let r = check_el(&xy, &bbox, 10_000, 0)?;
    println!("x y: passed {}", r.passed);
    for v in r.failures() {
        println!("  {:?} fails, witness {:?}", v.property, v.witness);
    }

    let sqrt = FnFunction::new(2, |x: &[f64]| (x[0] + x[1]).sqrt());
    println!("sqrt(x + y): passed {}", check_el(&sqrt, &bbox, 10_000, 0)?.passed);

    let h = Hyperplane::new(vec![1.0, 2.0], 1.0)?;
    let half = ElExpr::scale(0.5, linear_opt(&h)?.expr)?;
    let feas = check_feasible(&half, &SSurface::Hyperplane(h), 1000, 0)?;
    println!("half the optimum: feasible {} min jump {}", feas.feasible, feas.min_jump);
    Ok(())
}
