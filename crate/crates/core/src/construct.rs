//! Optimal S-feasible EL functions for linear surfaces and for strictly
//! convex or concave planar curves.
//!
//! Each builder computes the claimed cost from the surface's closed-form
//! slopes and checks it against [`ElExpr::cost`], which goes through the
//! derivative rules instead. Fallback constructions (no T-point) are run
//! through the property suite and the feasibility check before being
//! returned.

use serde::{Deserialize, Serialize};

use crate::analysis::{check_el, check_feasible};
use crate::el::ElExpr;
use crate::error::{Error, Result};
use crate::point::Point;
use crate::surface::{Curve2D, Hyperplane, SSurface, Shape};

/// Agreement required between the claimed and the computed cost.
pub const COST_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Linear,
    ConvexPlateau,
    ConvexDiag,
    ConcaveStep,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionResult {
    pub kind: Kind,
    pub expr: ElExpr,
    pub claimed_cost: f64,
    /// Multiplier applied to the unscaled construction.
    pub scale_k: f64,
}

fn finish(kind: Kind, expr: ElExpr, claimed_cost: f64, scale_k: f64) -> Result<ConstructionResult> {
    let computed = expr.cost();
    if (computed - claimed_cost).abs() > COST_TOL * claimed_cost.abs().max(1.0) {
        return Err(Error::Verification(format!(
            "{kind:?}: cost from derivative rules {computed} disagrees with closed form {claimed_cost}"
        )));
    }
    Ok(ConstructionResult {
        kind,
        expr,
        claimed_cost,
        scale_k,
    })
}

fn require_valid(surface: &SSurface) -> Result<()> {
    let report = surface.validate();
    if !report.valid {
        return Err(Error::InvalidSurface(report.violations.join("; ")));
    }
    Ok(())
}

/// `k min(c . x, M)` with `k = 1 / min c`; cost `max c / min c`.
pub fn linear_opt(h: &Hyperplane) -> Result<ConstructionResult> {
    require_valid(&SSurface::Hyperplane(h.clone()))?;
    let k = 1.0 / h.c_min();
    let expr = ElExpr::scale(k, ElExpr::truncate(h.m, ElExpr::linear(h.c.clone())?)?)?;
    finish(Kind::Linear, expr, h.c_max() / h.c_min(), k)
}

/// Runs the full suite on a construction that has no T-point.
fn verify_fallback(expr: &ElExpr, curve: &Curve2D, scale: f64) -> Result<()> {
    let bbox = Point::new(vec![1.25 * curve.a(), 1.25 * curve.b()])?;
    let report = check_el(expr, &bbox, 10_000, 0)?;
    if !report.passed {
        let names: Vec<String> = report.failures().map(|v| format!("{:?}", v.property)).collect();
        return Err(Error::Verification(format!("fallback fails {}", names.join(", "))));
    }
    let scaled = ElExpr::scale(scale, expr.clone())?;
    let feas = check_feasible(&scaled, &SSurface::Curve(curve.clone()), 1000, 0)?;
    if !feas.feasible {
        return Err(Error::Verification(format!(
            "fallback is not feasible: min jump {}",
            feas.min_jump
        )));
    }
    Ok(())
}

/// Flat-plateau construction; already feasible without scaling.
pub fn convex_plateau(curve: &Curve2D) -> Result<ConstructionResult> {
    let expr = ElExpr::convex_plateau(curve.clone())?;
    // -beta'(0) = 1 / -alpha'(a)
    let claimed = (-curve.alpha_prime(0.0)).max(1.0 / -curve.alpha_prime(curve.a()));
    if expr.construction().is_some_and(|(_, s)| s.is_fallback()) {
        verify_fallback(&expr, curve, 1.0)?;
    }
    finish(Kind::ConvexPlateau, expr, claimed, 1.0)
}

/// Diagonal construction scaled by `1/k`, `k = min(-alpha'(a), -beta'(b))`.
pub fn convex_diag(curve: &Curve2D) -> Result<ConstructionResult> {
    let base = ElExpr::convex_diag(curve.clone())?;
    // -beta'(b) = 1 / -alpha'(0)
    let k = (-curve.alpha_prime(curve.a())).min(1.0 / -curve.alpha_prime(0.0));
    let expr = ElExpr::scale(1.0 / k, base)?;
    finish(Kind::ConvexDiag, expr, 1.0 / k, 1.0 / k)
}

/// Stepped-plateau construction scaled by `k = 1 / min(-alpha'(0), -beta'(0))`.
pub fn concave_construct(curve: &Curve2D) -> Result<ConstructionResult> {
    let base = ElExpr::concave_step(curve.clone())?;
    let k = 1.0 / (-curve.alpha_prime(0.0)).min(1.0 / -curve.alpha_prime(curve.a()));
    if base.construction().is_some_and(|(_, s)| s.is_fallback()) {
        verify_fallback(&base, curve, k)?;
    }
    let expr = ElExpr::scale(k, base)?;
    finish(Kind::ConcaveStep, expr, k, k)
}

/// Every construction that applies to `surface`, best first. A curve flagged
/// linear is handled as the hyperplane through its intercepts.
pub fn constructions_for(surface: &SSurface) -> Result<Vec<ConstructionResult>> {
    require_valid(surface)?;
    match surface {
        SSurface::Hyperplane(h) => Ok(vec![linear_opt(h)?]),
        SSurface::Curve(c) => match c.shape() {
            Shape::Linear => {
                let h = Hyperplane::new(vec![c.b(), c.a()], c.a() * c.b())?;
                Ok(vec![linear_opt(&h)?])
            }
            Shape::StrictlyConvex => {
                let mut out = vec![convex_plateau(c)?];
                if c.t_point().is_some() {
                    out.push(convex_diag(c)?);
                }
                Ok(out)
            }
            Shape::StrictlyConcave => Ok(vec![concave_construct(c)?]),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::el::OrthantFunction;

    fn qc() -> Curve2D {
        Curve2D::quadratic(1.0, 1.0, 0.5).unwrap()
    }

    fn qcc() -> Curve2D {
        Curve2D::quadratic(1.0, 1.0, -0.5).unwrap()
    }

    #[test]
    fn linear_examples() {
        let r = linear_opt(&Hyperplane::new(vec![1.0, 2.0], 1.0).unwrap()).unwrap();
        assert_eq!((r.scale_k, r.claimed_cost), (1.0, 2.0));
        let r = linear_opt(&Hyperplane::new(vec![3.0, 3.0, 3.0], 2.0).unwrap()).unwrap();
        assert!((r.scale_k - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.claimed_cost, 1.0);
        let r = linear_opt(&Hyperplane::new(vec![2.0, 5.0], 10.0).unwrap()).unwrap();
        assert_eq!((r.scale_k, r.claimed_cost), (0.5, 2.5));
        assert!(linear_opt(&Hyperplane::new(vec![2.0, -5.0], 10.0).unwrap()).is_err());
    }

    #[test]
    fn convex_examples() {
        let r = convex_plateau(&qc()).unwrap();
        assert!((r.claimed_cost - 2.0).abs() < 1e-12);
        let d = convex_diag(&qc()).unwrap();
        // k = min(0.5, 2/3)
        assert!((d.scale_k - 2.0).abs() < 1e-12);
        assert!((d.claimed_cost - 2.0).abs() < 1e-12);
        // equal costs, different values at the seam
        let t = [0.5, 0.375];
        let gap = (r.expr.value(&t) - d.expr.value(&t)).abs();
        assert!((gap - (1.75 - 1.125)).abs() < 1e-10);
    }

    #[test]
    fn symmetric_convex_curve() {
        // a = b with a symmetric family: hyperbola alpha = kappa/(x+s) - t, t = s
        let c = Curve2D::hyperbola(1.0, 1.0, 0.5).unwrap();
        let r = convex_plateau(&c).unwrap();
        assert!((r.claimed_cost + c.alpha_prime(0.0)).abs() < 1e-12);
        let t = c.t_point().unwrap();
        assert!((t.t_x - t.t_y).abs() < 1e-10);
        let d = convex_diag(&c).unwrap();
        assert!((d.claimed_cost - 1.0 / -c.alpha_prime(1.0)).abs() < 1e-12);
    }

    #[test]
    fn steep_convex_fallback() {
        // slope range [2, 4]
        let c = Curve2D::quadratic(1.0, 3.0, 1.0).unwrap();
        let r = convex_plateau(&c).unwrap();
        assert!((r.claimed_cost - 4.0).abs() < 1e-12);
        assert!(convex_diag(&c).is_err());
    }

    #[test]
    fn shallow_convex_fallback() {
        // -alpha' in [0.1, 0.5]
        let c = Curve2D::quadratic(1.0, 0.3, 0.2).unwrap();
        assert!(c.t_point().is_none());
        let r = convex_plateau(&c).unwrap();
        assert!((r.claimed_cost - 10.0).abs() < 1e-9);
    }

    #[test]
    fn concave_examples() {
        let r = concave_construct(&qcc()).unwrap();
        assert!((r.scale_k - 2.0).abs() < 1e-12);
        assert!((r.claimed_cost - 2.0).abs() < 1e-12);
        assert!(concave_construct(&Curve2D::line(1.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn concave_fallbacks() {
        // shallow: -alpha' in [0.2, 0.6]; steep: -alpha' in [1.5, 2.5]
        for (b, c2) in [(0.4, -0.2), (2.0, -0.5)] {
            let c = Curve2D::quadratic(1.0, b, c2).unwrap();
            assert!(c.t_point().is_none());
            let r = concave_construct(&c).unwrap();
            let bound = 1.0 / (-c.alpha_prime(0.0)).min(1.0 / -c.alpha_prime(1.0));
            assert!((r.claimed_cost - bound).abs() < 1e-9);
        }
    }

    #[test]
    fn line_curve_uses_hyperplane() {
        let s = SSurface::Curve(Curve2D::line(2.0, 1.0).unwrap());
        let out = constructions_for(&s).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].kind, Kind::Linear);
        assert!((out[0].claimed_cost - 2.0).abs() < 1e-12);
    }
}
