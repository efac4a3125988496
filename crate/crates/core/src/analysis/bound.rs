use serde::{Deserialize, Serialize};

use crate::construct::{constructions_for, Kind};
use crate::error::{Error, Result};
use crate::lp::{build_lp, solve_lp, Backend, LpStatus};
use crate::surface::{Curve2D, SSurface};

/// Samples for [`theorem1_bound_sampled`].
pub const BOUND_SAMPLES: usize = 1024;

/// Normal-ratio bound `grad_j / grad_i` and where it is attained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundWitness {
    pub value: f64,
    pub point: Vec<f64>,
    /// 0-based coordinate in the denominator.
    pub i: usize,
    /// 0-based coordinate in the numerator.
    pub j: usize,
    /// The value is a supremum over the closure of the surface, attained as
    /// a limit at `point`.
    pub closure: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub thm1_bound: f64,
    pub witness: BoundWitness,
    pub construction_kind: Option<Kind>,
    pub construction_cost: Option<f64>,
    pub lp_m: Option<usize>,
    pub lp_backend: Option<Backend>,
    pub lp_bound: Option<f64>,
    /// `construction_cost - thm1_bound`.
    pub gap_construction: Option<f64>,
    /// `thm1_bound - lp_bound`.
    pub gap_lp: Option<f64>,
}

fn require_valid(surface: &SSurface) -> Result<()> {
    let report = surface.validate();
    if report.valid {
        Ok(())
    } else {
        Err(Error::InvalidSurface(report.violations.join("; ")))
    }
}

/// Witness for the better of the two ratios at curve abscissa `x`.
fn curve_witness(c: &Curve2D, x: f64, closure: bool) -> BoundWitness {
    let s = -c.alpha_prime(x);
    let (value, i, j) = if s >= 1.0 / s { (s, 1, 0) } else { (1.0 / s, 0, 1) };
    BoundWitness {
        value,
        point: vec![x, c.alpha(x)],
        i,
        j,
        closure,
    }
}

/// Lower bound on the optimum from the ratio of normal components.
///
/// Hyperplanes: `max c / min c`, attained everywhere. Curves: every
/// supported family has monotone slope, so the supremum of
/// `max(-alpha', 1 / -alpha')` is the larger endpoint limit.
pub fn theorem1_bound(surface: &SSurface) -> Result<BoundWitness> {
    require_valid(surface)?;
    Ok(match surface {
        SSurface::Hyperplane(h) => {
            let (mut i, mut j) = (0, 0);
            for (k, &c) in h.c.iter().enumerate() {
                if c < h.c[i] {
                    i = k;
                }
                if c > h.c[j] {
                    j = k;
                }
            }
            let s: f64 = h.c.iter().sum();
            BoundWitness {
                value: h.c[j] / h.c[i],
                point: vec![h.m / s; h.dim()],
                i,
                j,
                closure: false,
            }
        }
        SSurface::Curve(c) => {
            let w0 = curve_witness(c, 0.0, true);
            let wa = curve_witness(c, c.a(), true);
            if wa.value > w0.value {
                wa
            } else {
                w0
            }
        }
    })
}

/// Family-agnostic version for curves: a uniform scan of the open interval
/// followed by golden-section refinement around the best sample, with the
/// endpoint limits as candidates. Hyperplanes use the closed form.
pub fn theorem1_bound_sampled(surface: &SSurface) -> Result<BoundWitness> {
    let SSurface::Curve(c) = surface else {
        return theorem1_bound(surface);
    };
    require_valid(surface)?;
    let a = c.a();
    let ratio = |x: f64| {
        let s = -c.alpha_prime(x);
        s.max(1.0 / s)
    };
    let n = BOUND_SAMPLES;
    let xs: Vec<f64> = (0..n).map(|k| a * (k as f64 + 0.5) / n as f64).collect();
    let best = (0..n).max_by(|&p, &q| ratio(xs[p]).total_cmp(&ratio(xs[q]))).unwrap();
    let mut lo = if best == 0 { 0.0 } else { xs[best - 1] };
    let mut hi = if best + 1 == n { a } else { xs[best + 1] };
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (ratio(x1), ratio(x2));
    while hi - lo > 1e-12 * a {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = ratio(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = ratio(x2);
        }
    }
    let mut w = curve_witness(c, 0.5 * (lo + hi), false);
    for end in [0.0, a] {
        let e = curve_witness(c, end, true);
        if e.value > w.value {
            w = e;
        }
    }
    Ok(w)
}

/// Brackets the optimum: the normal-ratio bound from below, the best
/// available construction from above and, for planar surfaces when `grid_m`
/// is given, the grid LP bound from below.
pub fn gap_report(surface: &SSurface, grid_m: Option<usize>) -> Result<BoundReport> {
    let witness = theorem1_bound(surface)?;
    let thm1 = witness.value;
    let best = constructions_for(surface)?
        .into_iter()
        .min_by(|p, q| p.claimed_cost.total_cmp(&q.claimed_cost));
    let (mut lp_m, mut lp_backend, mut lp_bound) = (None, None, None);
    if let (Some(m), 2) = (grid_m, surface.dim()) {
        let sol = solve_lp(&build_lp(surface, m)?)?;
        if sol.status != LpStatus::Optimal {
            return Err(Error::Solver(format!("grid LP status {:?}", sol.status)));
        }
        lp_m = Some(m);
        lp_backend = Some(sol.backend);
        lp_bound = Some(sol.value);
    }
    let construction_cost = best.as_ref().map(|b| b.claimed_cost);
    Ok(BoundReport {
        thm1_bound: thm1,
        witness,
        construction_kind: best.map(|b| b.kind),
        construction_cost,
        lp_m,
        lp_backend,
        lp_bound,
        gap_construction: construction_cost.map(|c| c - thm1),
        gap_lp: lp_bound.map(|v| thm1 - v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Hyperplane;

    fn curve(c2: f64) -> SSurface {
        SSurface::Curve(Curve2D::quadratic(1.0, 1.0, c2).unwrap())
    }

    #[test]
    fn hyperplane_bound() {
        let w = theorem1_bound(&SSurface::Hyperplane(Hyperplane::new(vec![1.0, 4.0], 2.0).unwrap())).unwrap();
        assert_eq!(w.value, 4.0);
        assert_eq!((w.i, w.j), (0, 1));
        assert!(!w.closure);
    }

    #[test]
    fn curve_bounds_at_endpoints() {
        let w = theorem1_bound(&curve(0.5)).unwrap();
        assert!((w.value - 2.0).abs() < 1e-12);
        assert_eq!((w.i, w.j, w.point[0]), (0, 1, 1.0));
        assert!(w.closure);
        let w = theorem1_bound(&curve(-0.5)).unwrap();
        assert!((w.value - 2.0).abs() < 1e-12);
        assert_eq!((w.i, w.j, w.point[0]), (0, 1, 0.0));
    }

    #[test]
    fn sampled_agrees_with_endpoints() {
        for s in [
            curve(0.5),
            curve(-0.5),
            SSurface::Curve(Curve2D::hyperbola(2.0, 1.0, 0.3).unwrap()),
            SSurface::Curve(Curve2D::quadratic(1.0, 3.0, 1.0).unwrap()),
        ] {
            let a = theorem1_bound(&s).unwrap().value;
            let b = theorem1_bound_sampled(&s).unwrap().value;
            assert!((a - b).abs() < 1e-9 * a, "{a} vs {b}");
        }
    }

    #[test]
    fn report_brackets() {
        let r = gap_report(&SSurface::Hyperplane(Hyperplane::new(vec![1.0, 2.0], 1.0).unwrap()), None).unwrap();
        assert_eq!(r.gap_construction, Some(0.0));
        assert!(r.lp_bound.is_none());
        let r = gap_report(&curve(-0.5), Some(8)).unwrap();
        assert!(r.gap_construction.unwrap().abs() < 1e-9);
        assert!(r.lp_bound.unwrap() <= 2.0 + 1e-6);
    }
}
