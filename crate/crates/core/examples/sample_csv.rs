//! Values and one-sided partials of a construction on a grid, as CSV, plus a
//! JSON round trip of the expression.
//!
//! cargo run --example sample_csv > concave.csv

use elopt::cli::sample_csv;
use elopt::construct::concave_construct;
use elopt::{Curve2D, ElExpr, Point};

fn main() -> elopt::Result<()> {
    let curve = Curve2D::quadratic(1.0, 1.0, -0.5)?;
    let r = concave_construct(&curve)?;
    let json = serde_json::to_string(&r.expr).expect("serializes");
    eprintln!("{json}");
    let back: ElExpr = serde_json::from_str(&json).expect("parses");
    let p = Point::new(vec![0.3, 0.4])?;
    assert_eq!(back.eval(&p)?.to_bits(), r.expr.eval(&p)?.to_bits());
    print!("{}", sample_csv(&r.expr, &[1.25, 1.25], 11));
    Ok(())
}
