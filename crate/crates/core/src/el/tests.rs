use super::*;
use crate::surface::Curve2D;

fn pt(v: &[f64]) -> Point {
    Point::new(v.to_vec()).unwrap()
}

/// alpha(x) = 1 - 1.5x + 0.5x^2
fn qc() -> Curve2D {
    Curve2D::quadratic(1.0, 1.0, 0.5).unwrap()
}

/// alpha(x) = 1 - 0.5x - 0.5x^2
fn qcc() -> Curve2D {
    Curve2D::quadratic(1.0, 1.0, -0.5).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn truncated_linear_below_cap() {
    let f = ElExpr::truncate(1.0, ElExpr::linear(vec![1.0, 2.0]).unwrap()).unwrap();
    assert!(close(f.eval(&pt(&[0.25, 0.25])).unwrap(), 0.75, 1e-15));
    assert_eq!(f.eval(&pt(&[1.0, 1.0])).unwrap(), 1.0);
}

#[test]
fn construction_values_at_seam() {
    // closed form: alpha'(t) = -1 gives t = 0.5 for both worked curves
    let (tx, ty_qc, ty_qcc) = (0.5, 0.375, 0.625);
    let plateau = ElExpr::convex_plateau(qc()).unwrap();
    let c = 1.0 + 1.0 - tx - ty_qc;
    assert!(close(plateau.eval(&pt(&[tx, ty_qc])).unwrap(), c, 1e-11));
    assert!(close(c, 1.125, 1e-15));
    assert_eq!(plateau.eval(&pt(&[0.0, 0.0])).unwrap(), 0.0);

    let step = ElExpr::concave_step(qcc()).unwrap();
    assert!(close(step.eval(&pt(&[tx, ty_qcc])).unwrap(), tx + ty_qcc, 1e-11));

    let diag = ElExpr::convex_diag(qc()).unwrap();
    assert!(close(diag.eval(&pt(&[tx, ty_qc])).unwrap(), 0.875, 1e-11));
}

#[test]
fn kink_of_truncation() {
    let f = ElExpr::truncate(1.0, ElExpr::linear(vec![1.0]).unwrap()).unwrap();
    let g = f.one_sided_partials(&pt(&[1.0])).unwrap();
    assert_eq!(g.left, vec![Some(1.0)]);
    assert_eq!(g.right, vec![0.0]);
    let g = f.one_sided_partials(&pt(&[2.0])).unwrap();
    assert_eq!((g.left[0], g.right[0]), (Some(0.0), 0.0));
}

#[test]
fn left_derivative_undefined_on_axes() {
    let f = ElExpr::convex_plateau(qc()).unwrap();
    let g = f.one_sided_partials(&pt(&[0.0, 0.0])).unwrap();
    assert_eq!(g.left, vec![None, None]);
    assert!(close(g.right[0], 1.5, 1e-12));
    assert!(close(g.right[1], 2.0, 1e-12));
}

#[test]
fn convex_plateau_pairs_on_curve() {
    let curve = qc();
    let f = ElExpr::convex_plateau(curve.clone()).unwrap();
    // x >= t_x: x-pair (1, 0), y-pair (-beta'(y), 0) with beta'(y) = 1/alpha'(x)
    let x = 0.75;
    let g = f.one_sided_partials(&pt(&[x, curve.alpha(x)])).unwrap();
    assert!(close(g.left[0].unwrap(), 1.0, 1e-12) && g.right[0] == 0.0);
    assert!(close(g.left[1].unwrap(), 1.0 / 0.75, 1e-12) && g.right[1] == 0.0);
    // y >= t_y: x-pair (-alpha'(x), 0), y-pair (1, 0)
    let x = 0.25;
    let g = f.one_sided_partials(&pt(&[x, curve.alpha(x)])).unwrap();
    assert!(close(g.left[0].unwrap(), 1.25, 1e-12) && g.right[0] == 0.0);
    assert!(close(g.left[1].unwrap(), 1.0, 1e-12) && g.right[1] == 0.0);
}

#[test]
fn convex_diag_jumps_on_curve() {
    let curve = qc();
    let f = ElExpr::convex_diag(curve.clone()).unwrap();
    let x = 0.75;
    let g = f.one_sided_partials(&pt(&[x, curve.alpha(x)])).unwrap();
    assert!(close(g.jump(0).unwrap(), 0.75, 1e-12));
    assert!(close(g.jump(1).unwrap(), 1.0, 1e-12));
    let x = 0.25;
    let g = f.one_sided_partials(&pt(&[x, curve.alpha(x)])).unwrap();
    assert!(close(g.jump(0).unwrap(), 1.0, 1e-12));
    assert!(close(g.jump(1).unwrap(), 1.0 / 1.25, 1e-12));
}

#[test]
fn concave_step_pairs_on_curve() {
    let curve = qcc();
    let f = ElExpr::concave_step(curve.clone()).unwrap();
    let y = curve.alpha(0.75);
    assert!(close(y, 0.34375, 1e-15));
    let g = f.one_sided_partials(&pt(&[0.75, y])).unwrap();
    assert!(close(g.left[0].unwrap(), 1.0, 1e-12) && close(g.right[0], 0.0, 1e-12));
    // beta'(y) = 1/alpha'(0.75) = -0.8
    assert!(close(g.left[1].unwrap(), 1.0, 1e-12));
    assert!(close(g.right[1], 0.2, 1e-12));
}

#[test]
fn clamp_partials() {
    let f = ElExpr::clamp(pt(&[1.0, 1.0]), ElExpr::linear(vec![1.0, 2.0]).unwrap()).unwrap();
    let g = f.one_sided_partials(&pt(&[1.0, 0.5])).unwrap();
    assert_eq!(g.left, vec![Some(1.0), Some(2.0)]);
    assert_eq!(g.right, vec![0.0, 2.0]);
    let g = f.one_sided_partials(&pt(&[2.0, 0.5])).unwrap();
    assert_eq!(g.left[0], Some(0.0));
    assert_eq!(g.right[0], 0.0);
    assert_eq!(f.eval(&pt(&[3.0, 3.0])).unwrap(), 3.0);
}

#[test]
fn costs() {
    let f = ElExpr::truncate(1.0, ElExpr::linear(vec![1.0, 2.0]).unwrap()).unwrap();
    assert_eq!(f.cost(), 2.0);
    let g = ElExpr::linear(vec![3.0, 3.0, 3.0]).unwrap();
    assert_eq!(g.cost(), 3.0);
    assert!(close(ElExpr::scale(1.0 / 3.0, g).unwrap().cost(), 1.0, 1e-15));
    // max(-alpha'(0), -beta'(0)) = max(1.5, 2)
    assert!(close(ElExpr::convex_plateau(qc()).unwrap().cost(), 2.0, 1e-12));
    assert_eq!(ElExpr::convex_diag(qc()).unwrap().cost(), 1.0);
    assert_eq!(ElExpr::concave_step(qcc()).unwrap().cost(), 1.0);
}

#[test]
fn total_costs() {
    assert!(close(ElExpr::convex_plateau(qc()).unwrap().cost_total().unwrap(), 1.125, 1e-11));
    let f = ElExpr::truncate(5.0, ElExpr::linear(vec![1.0, 1.0]).unwrap()).unwrap();
    assert_eq!(f.cost_total().unwrap(), 5.0);
    let g = ElExpr::scale(2.0, ElExpr::concave_step(qcc()).unwrap()).unwrap();
    assert!(close(g.cost_total().unwrap(), 2.25, 1e-11));
    let h = ElExpr::linear(vec![1.0]).unwrap();
    assert_eq!(h.cost_total(), Err(Error::Unbounded));
    let z = ElExpr::scale(0.0, h).unwrap();
    assert_eq!(z.cost_total().unwrap(), 0.0);
    let clamp = ElExpr::clamp(pt(&[1.0, 2.0]), ElExpr::linear(vec![1.0, 1.0]).unwrap()).unwrap();
    assert_eq!(clamp.cost_total().unwrap(), 3.0);
}

#[test]
fn zero_scale_is_zero_function() {
    let z = ElExpr::scale(0.0, ElExpr::convex_plateau(qc()).unwrap()).unwrap();
    assert_eq!(z.eval(&pt(&[0.3, 0.7])).unwrap(), 0.0);
    assert_eq!(z.cost(), 0.0);
}

#[test]
fn errors() {
    let f = ElExpr::linear(vec![1.0, 2.0]).unwrap();
    assert!(matches!(f.eval(&pt(&[1.0])), Err(Error::DimensionMismatch { .. })));
    assert!(ElExpr::sum(f.clone(), ElExpr::linear(vec![1.0]).unwrap()).is_err());
    assert!(ElExpr::scale(-1.0, f.clone()).is_err());
    assert!(ElExpr::truncate(-0.5, f.clone()).is_err());
    assert!(ElExpr::linear(vec![1.0, 0.0]).is_err());
    assert!(matches!(ElExpr::convex_plateau(qcc()), Err(Error::ShapeMismatch(_))));
    assert!(matches!(ElExpr::concave_step(Curve2D::line(1.0, 1.0).unwrap()), Err(Error::ShapeMismatch(_))));
    let steep = Curve2D::quadratic(1.0, 3.0, 1.0).unwrap();
    assert_eq!(ElExpr::convex_diag(steep), Err(Error::NoTPoint));
}

/// Both sides of every branch boundary must agree.
#[test]
fn branches_meet_continuously() {
    let cases = [
        ElExpr::convex_plateau(qc()).unwrap(),
        ElExpr::convex_diag(qc()).unwrap(),
        ElExpr::concave_step(qcc()).unwrap(),
        ElExpr::convex_plateau(Curve2D::hyperbola(2.0, 1.0, 0.7).unwrap()).unwrap(),
    ];
    let h = 1e-10;
    for f in &cases {
        let (_, s) = f.construction().unwrap();
        let TPoint { t_x, t_y } = s.seam();
        for k in 1..50 {
            let r = k as f64 / 50.0;
            // along x = t_x for y both below and above t_y
            for y in [r * t_y, t_y + r * 2.0] {
                let lo = f.value(&[t_x - h, y]);
                let hi = f.value(&[t_x + h, y]);
                assert!((lo - hi).abs() < 1e-8, "x-seam at y={y}: {lo} vs {hi}");
            }
            for x in [r * t_x, t_x + r * 2.0] {
                let lo = f.value(&[x, t_y - h]);
                let hi = f.value(&[x, t_y + h]);
                assert!((lo - hi).abs() < 1e-8, "y-seam at x={x}: {lo} vs {hi}");
            }
        }
    }
}

/// The third convex-plateau branch `a - alpha(x) + b - beta(y)` meets the
/// side branches as printed.
#[test]
fn plateau_third_branch_limits() {
    let curve = qc();
    let f = ElExpr::convex_plateau(curve.clone()).unwrap();
    let (tx, ty) = (0.5, 0.375);
    let c = 2.0 - tx - ty;
    for k in 0..10 {
        let y = ty * k as f64 / 10.0;
        let beta = curve.beta(y).unwrap();
        // side branch C + min(x - beta(y), 0) and third branch at x = t_x
        let side = c + (tx - beta).min(0.0);
        let third = 1.0 - curve.alpha(tx) + 1.0 - beta;
        assert!(close(side, third, 1e-10));
        assert!(close(f.value(&[tx, y]), side, 1e-10));
    }
}

#[test]
fn fallback_plateau_steep() {
    // slope range [2, 4]: single branch b + min(y - alpha(x), 0)
    let curve = Curve2D::quadratic(1.0, 3.0, 1.0).unwrap();
    let f = ElExpr::convex_plateau(curve.clone()).unwrap();
    let (_, s) = f.construction().unwrap();
    assert!(s.is_fallback());
    assert_eq!(f.value(&[0.0, 0.0]), 0.0);
    for &x in &[0.1, 0.4, 0.9] {
        let expect = 3.0 + (0.2 - curve.alpha(x)).min(0.0);
        assert!(close(f.value(&[x, 0.2]), expect, 1e-14));
    }
    assert!(close(f.cost(), 4.0, 1e-12));
    assert_eq!(f.cost_total().unwrap(), 3.0);
}

#[test]
fn serde_round_trip_is_bit_identical() {
    let e = ElExpr::sum(
        ElExpr::scale(0.5, ElExpr::convex_plateau(qc()).unwrap()).unwrap(),
        ElExpr::clamp(
            pt(&[0.3, 0.9]),
            ElExpr::truncate(0.7, ElExpr::linear(vec![0.1, 3.0]).unwrap()).unwrap(),
        )
        .unwrap(),
    )
    .unwrap();
    let text = serde_json::to_string(&e).unwrap();
    let back: ElExpr = serde_json::from_str(&text).unwrap();
    assert_eq!(back, e);
    for k in 0..100 {
        let x = [(k % 10) as f64 * 0.13, (k / 10) as f64 * 0.11];
        assert_eq!(e.value(&x).to_bits(), back.value(&x).to_bits());
    }
}

#[test]
fn serde_rejects_invalid_trees() {
    let bad = r#"{"op":"scale","lambda":-1,"inner":{"op":"linear","c":[1]}}"#;
    assert!(serde_json::from_str::<ElExpr>(bad).is_err());
    let bad = r#"{"op":"concave_step","curve":{"a":1,"b":1,"family":"quadratic","c2":0.5,"shape":"strictly_convex"}}"#;
    assert!(serde_json::from_str::<ElExpr>(bad).is_err());
}
