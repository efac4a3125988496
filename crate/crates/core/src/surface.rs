//! Secret-sharing surfaces: hyperplanes in any dimension and monotone
//! analytic curves in the plane.
//!
//! A curve is stored as the graph `y = alpha(x)` on `[0, a]` with
//! `alpha(0) = b` and `alpha(a) = 0`; its inverse `x = beta(y)` on `[0, b]`
//! describes the same set. The outward normal at `(x, alpha(x))` is
//! `(-alpha'(x), 1)`.

use rand::RngExt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point;

/// Absolute tolerance of curve root solves.
pub const BISECTION_TOL: f64 = 1e-12;
/// Iteration cap of every bisection.
pub const BISECTION_MAX_ITER: usize = 200;
/// Accepted range of `-alpha'`; outside it the normal is treated as degenerate.
pub const SLOPE_FLOOR: f64 = 1e-6;
pub const SLOPE_CEIL: f64 = 1e6;
/// Minimum number of sample points used by curve validation.
pub const VALIDATION_SAMPLES: usize = 1024;
/// Tolerance for "point lies on the surface".
pub const ON_SURFACE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Linear,
    StrictlyConvex,
    StrictlyConcave,
}

/// Analytic family of a curve. Free parameters only; the remaining
/// coefficients are fixed by the endpoint conditions `alpha(0) = b`,
/// `alpha(a) = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CurveFamily {
    /// `alpha(x) = b (1 - x/a)`.
    Line,
    /// `alpha(x) = b + c1 x + c2 x^2`.
    Quadratic { c2: f64 },
    /// `alpha(x) = kappa / (x + s) - t`, with `t = s b / a` and
    /// `kappa = t (a + s)`.
    Hyperbola { s: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Coeffs {
    Line { slope: f64 },
    Quadratic { c1: f64, c2: f64 },
    Hyperbola { s: f64, t: f64, kappa: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum FamilyName {
    Line,
    Quadratic,
    Hyperbola,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveRepr {
    a: f64,
    b: f64,
    family: FamilyName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<f64>,
    shape: Shape,
}

/// A strictly decreasing curve from `(0, b)` to `(a, 0)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveRepr", into = "CurveRepr")]
pub struct Curve2D {
    a: f64,
    b: f64,
    family: CurveFamily,
    shape: Shape,
    coeffs: Coeffs,
}

impl TryFrom<CurveRepr> for Curve2D {
    type Error = Error;
    fn try_from(r: CurveRepr) -> Result<Self> {
        let missing = |p: &str| Error::Malformed(format!("{:?} curve needs parameter {p}", r.family));
        let family = match (r.family, r.c2, r.s) {
            (FamilyName::Line, None, None) => CurveFamily::Line,
            (FamilyName::Quadratic, Some(c2), None) => CurveFamily::Quadratic { c2 },
            (FamilyName::Quadratic, None, _) => return Err(missing("c2")),
            (FamilyName::Hyperbola, None, Some(s)) => CurveFamily::Hyperbola { s },
            (FamilyName::Hyperbola, _, None) => return Err(missing("s")),
            _ => {
                return Err(Error::Malformed(format!(
                    "parameter not used by the {:?} family",
                    r.family
                )))
            }
        };
        Curve2D::new(r.a, r.b, family, r.shape)
    }
}

impl From<Curve2D> for CurveRepr {
    fn from(c: Curve2D) -> Self {
        let (family, c2, s) = match c.family {
            CurveFamily::Line => (FamilyName::Line, None, None),
            CurveFamily::Quadratic { c2 } => (FamilyName::Quadratic, Some(c2), None),
            CurveFamily::Hyperbola { s } => (FamilyName::Hyperbola, None, Some(s)),
        };
        CurveRepr {
            a: c.a,
            b: c.b,
            family,
            c2,
            s,
            shape: c.shape,
        }
    }
}

/// The point of a curve where the normal is `(1, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TPoint {
    pub t_x: f64,
    pub t_y: f64,
}

/// How `-alpha'` sits relative to 1 along the whole curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeRegime {
    /// `-alpha' <= 1` everywhere.
    Shallow,
    /// `-alpha' >= 1` everywhere.
    Steep,
    /// `-alpha' - 1` changes sign; a T-point exists.
    Crossing,
}

impl Curve2D {
    /// Builds a curve. Only malformed parameters are rejected here; the
    /// s-surface conditions are checked by [`Curve2D::validate`].
    pub fn new(a: f64, b: f64, family: CurveFamily, shape: Shape) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::Malformed(format!("x-intercept a must be positive, got {a}")));
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::Malformed(format!("y-intercept b must be positive, got {b}")));
        }
        let coeffs = match family {
            CurveFamily::Line => Coeffs::Line { slope: -b / a },
            CurveFamily::Quadratic { c2 } => {
                if !c2.is_finite() {
                    return Err(Error::Malformed(format!("non-finite c2 {c2}")));
                }
                Coeffs::Quadratic {
                    c1: -b / a - c2 * a,
                    c2,
                }
            }
            CurveFamily::Hyperbola { s } => {
                if !(s.is_finite() && s > 0.0) {
                    return Err(Error::Malformed(format!("hyperbola shift s must be positive, got {s}")));
                }
                let t = s * b / a;
                Coeffs::Hyperbola {
                    s,
                    t,
                    kappa: t * (a + s),
                }
            }
        };
        Ok(Curve2D {
            a,
            b,
            family,
            shape,
            coeffs,
        })
    }

    pub fn line(a: f64, b: f64) -> Result<Self> {
        Curve2D::new(a, b, CurveFamily::Line, Shape::Linear)
    }

    /// Quadratic curve; the shape flag follows the sign of `c2`.
    pub fn quadratic(a: f64, b: f64, c2: f64) -> Result<Self> {
        let shape = if c2 > 0.0 {
            Shape::StrictlyConvex
        } else if c2 < 0.0 {
            Shape::StrictlyConcave
        } else {
            Shape::Linear
        };
        Curve2D::new(a, b, CurveFamily::Quadratic { c2 }, shape)
    }

    pub fn hyperbola(a: f64, b: f64, s: f64) -> Result<Self> {
        Curve2D::new(a, b, CurveFamily::Hyperbola { s }, Shape::StrictlyConvex)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn family(&self) -> CurveFamily {
        self.family
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    fn alpha_formula(&self, x: f64) -> f64 {
        match self.coeffs {
            Coeffs::Line { slope } => self.b + slope * x,
            Coeffs::Quadratic { c1, c2 } => self.b + x * (c1 + c2 * x),
            Coeffs::Hyperbola { s, t, kappa } => kappa / (x + s) - t,
        }
    }

    /// `alpha(x)`; exact at both endpoints. The formula is applied as is
    /// outside `[0, a]`.
    pub fn alpha(&self, x: f64) -> f64 {
        if x == 0.0 {
            self.b
        } else if x == self.a {
            0.0
        } else {
            self.alpha_formula(x)
        }
    }

    pub fn alpha_prime(&self, x: f64) -> f64 {
        match self.coeffs {
            Coeffs::Line { slope } => slope,
            Coeffs::Quadratic { c1, c2 } => c1 + 2.0 * c2 * x,
            Coeffs::Hyperbola { s, kappa, .. } => -kappa / ((x + s) * (x + s)),
        }
    }

    pub fn alpha_second(&self, x: f64) -> f64 {
        match self.coeffs {
            Coeffs::Line { .. } => 0.0,
            Coeffs::Quadratic { c2, .. } => 2.0 * c2,
            Coeffs::Hyperbola { s, kappa, .. } => 2.0 * kappa / (x + s).powi(3),
        }
    }

    /// Inverse of `alpha` without range checks; `y` is clamped to `[0, b]`.
    pub(crate) fn beta_unchecked(&self, y: f64) -> f64 {
        let y = y.clamp(0.0, self.b);
        if y == 0.0 {
            return self.a;
        }
        if y == self.b {
            return 0.0;
        }
        let x = match self.coeffs {
            Coeffs::Line { slope } => (y - self.b) / slope,
            Coeffs::Quadratic { c1, c2 } => {
                // root of c2 x^2 + c1 x + (b - y) = 0 in [0, a], in the
                // cancellation-free form
                let r = self.b - y;
                let disc = (c1 * c1 - 4.0 * c2 * r).max(0.0);
                2.0 * r / (-c1 + disc.sqrt())
            }
            Coeffs::Hyperbola { s, t, kappa } => kappa / (y + t) - s,
        };
        x.clamp(0.0, self.a)
    }

    /// `beta(y) = alpha^{-1}(y)` for `y` in `[0, b]`.
    pub fn beta(&self, y: f64) -> Result<f64> {
        self.check_y(y)?;
        Ok(self.beta_unchecked(y))
    }

    /// `beta'(y) = 1 / alpha'(beta(y))`.
    pub fn beta_prime(&self, y: f64) -> Result<f64> {
        self.check_y(y)?;
        Ok(self.beta_prime_unchecked(y))
    }

    pub(crate) fn beta_prime_unchecked(&self, y: f64) -> f64 {
        1.0 / self.alpha_prime(self.beta_unchecked(y))
    }

    /// `beta` by bisection on the decreasing `alpha`, independent of the
    /// closed forms.
    pub fn beta_bisect(&self, y: f64) -> Result<f64> {
        self.check_y(y)?;
        let (mut lo, mut hi) = (0.0, self.a);
        for _ in 0..BISECTION_MAX_ITER {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= BISECTION_TOL {
                return Ok(mid);
            }
            if self.alpha(mid) > y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Err(Error::Bisection(BISECTION_MAX_ITER))
    }

    fn check_y(&self, y: f64) -> Result<()> {
        if !(0.0..=self.b).contains(&y) {
            return Err(Error::OutOfRange {
                value: y,
                lo: 0.0,
                hi: self.b,
            });
        }
        Ok(())
    }

    /// Classifies `-alpha' - 1` over `[0, a]`. `alpha'` is monotone for
    /// every built-in family, so the endpoint values decide.
    pub fn slope_regime(&self) -> SlopeRegime {
        let g0 = -self.alpha_prime(0.0) - 1.0;
        let ga = -self.alpha_prime(self.a) - 1.0;
        if g0 * ga < 0.0 {
            SlopeRegime::Crossing
        } else if g0 <= 0.0 && ga <= 0.0 {
            SlopeRegime::Shallow
        } else {
            SlopeRegime::Steep
        }
    }

    /// Solves `alpha'(t) = -1` by bisection. `None` when `-alpha' - 1` keeps
    /// its sign on `(0, a)`.
    pub fn t_point(&self) -> Option<TPoint> {
        if self.slope_regime() != SlopeRegime::Crossing {
            return None;
        }
        let g = |x: f64| -self.alpha_prime(x) - 1.0;
        let (mut lo, mut hi) = (0.0, self.a);
        let g_lo = g(lo);
        for _ in 0..BISECTION_MAX_ITER {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= BISECTION_TOL {
                break;
            }
            if g(mid) * g_lo > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t_x = 0.5 * (lo + hi);
        Some(TPoint {
            t_x,
            t_y: self.alpha(t_x),
        })
    }

    /// Normal `(-alpha'(x), 1)` at the curve point over `x`.
    pub fn normal_at(&self, x: f64) -> [f64; 2] {
        [-self.alpha_prime(x), 1.0]
    }

    /// Checks the s-surface conditions by closed form and dense sampling.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let at0 = self.alpha_formula(0.0);
        let at_a = self.alpha_formula(self.a);
        if (at0 - self.b).abs() > 1e-12 * self.b.max(1.0) {
            violations.push(format!("alpha(0) = {at0} differs from b = {}", self.b));
        }
        if at_a.abs() > 1e-12 * self.b.max(1.0) {
            violations.push(format!("alpha(a) = {at_a} differs from 0"));
        }

        let n = VALIDATION_SAMPLES;
        let mut slope_min = f64::INFINITY;
        let mut slope_max = f64::NEG_INFINITY;
        let mut curvature_bad = None;
        let curv_scale = self.b / (self.a * self.a);
        for k in 0..=n {
            let x = self.a * k as f64 / n as f64;
            let s = -self.alpha_prime(x);
            slope_min = slope_min.min(s);
            slope_max = slope_max.max(s);
            if k == 0 || k == n || curvature_bad.is_some() {
                continue;
            }
            let c = self.alpha_second(x);
            let ok = match self.shape {
                Shape::Linear => c.abs() <= 1e-12 * curv_scale,
                Shape::StrictlyConvex => c > 0.0,
                Shape::StrictlyConcave => c < 0.0,
            };
            if !ok {
                curvature_bad = Some((x, c));
            }
        }
        let end_slopes = [-self.alpha_prime(0.0), -self.alpha_prime(self.a)];
        if end_slopes.iter().any(|s| !(SLOPE_FLOOR..=SLOPE_CEIL).contains(s)) {
            violations.push(format!(
                "normal degenerate at endpoint: -alpha' = {:?} outside [{SLOPE_FLOOR:e}, {SLOPE_CEIL:e}]",
                end_slopes
            ));
        } else if slope_min < SLOPE_FLOOR || slope_max > SLOPE_CEIL {
            violations.push(format!(
                "normal degenerate in the interior: -alpha' ranges over [{slope_min}, {slope_max}]"
            ));
        }
        if let Some((x, c)) = curvature_bad {
            violations.push(format!(
                "shape flag {:?} contradicted: alpha''({x}) = {c}",
                self.shape
            ));
        }
        ValidationReport {
            valid: violations.is_empty(),
            violations,
            slope_min: Some(slope_min),
            slope_max: Some(slope_max),
            shape: self.shape,
        }
    }
}

/// The surface `c . x = m` intersected with the orthant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hyperplane {
    pub c: Vec<f64>,
    pub m: f64,
}

impl Hyperplane {
    pub fn new(c: Vec<f64>, m: f64) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::Malformed("hyperplane needs at least one coefficient".into()));
        }
        if c.iter().chain(std::iter::once(&m)).any(|v| !v.is_finite()) {
            return Err(Error::Malformed("non-finite hyperplane coefficient".into()));
        }
        Ok(Hyperplane { c, m })
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn c_min(&self) -> f64 {
        self.c.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn c_max(&self) -> f64 {
        self.c.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Intercept of the surface with axis `i`.
    pub fn intercept(&self, i: usize) -> f64 {
        self.m / self.c[i]
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (i, &ci) in self.c.iter().enumerate() {
            if ci <= 0.0 {
                violations.push(format!("coefficient c[{i}] = {ci} is not strictly positive"));
            }
        }
        if self.m <= 0.0 {
            violations.push(format!("level M = {} is not strictly positive", self.m));
        }
        ValidationReport {
            valid: violations.is_empty(),
            violations,
            slope_min: None,
            slope_max: None,
            shape: Shape::Linear,
        }
    }

    /// The same line as a curve, when two-dimensional.
    pub fn as_curve(&self) -> Option<Curve2D> {
        if self.dim() != 2 {
            return None;
        }
        Curve2D::line(self.intercept(0), self.intercept(1)).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<String>,
    /// Range of `-alpha'` for curves.
    pub slope_min: Option<f64>,
    pub slope_max: Option<f64>,
    pub shape: Shape,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SSurface {
    Hyperplane(Hyperplane),
    Curve(Curve2D),
}

impl SSurface {
    pub fn dim(&self) -> usize {
        match self {
            SSurface::Hyperplane(h) => h.dim(),
            SSurface::Curve(_) => 2,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        match self {
            SSurface::Hyperplane(h) => h.validate(),
            SSurface::Curve(c) => c.validate(),
        }
    }

    pub fn shape(&self) -> Shape {
        match self {
            SSurface::Hyperplane(_) => Shape::Linear,
            SSurface::Curve(c) => c.shape(),
        }
    }

    /// Upper corner of the axis-aligned box spanned by the intercepts.
    pub fn intercept_box(&self) -> Vec<f64> {
        match self {
            SSurface::Hyperplane(h) => (0..h.dim()).map(|i| h.intercept(i)).collect(),
            SSurface::Curve(c) => vec![c.a(), c.b()],
        }
    }

    /// Outward normal at a point of the surface; not normalized.
    pub fn normal(&self, x: &Point) -> Result<Vec<f64>> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        match self {
            SSurface::Hyperplane(h) => {
                let lhs: f64 = h.c.iter().zip(x.coords()).map(|(c, v)| c * v).sum();
                let residual = (lhs - h.m).abs();
                if residual > ON_SURFACE_TOL * h.m.abs().max(1.0) {
                    return Err(Error::NotOnSurface { residual });
                }
                Ok(h.c.clone())
            }
            SSurface::Curve(c) => {
                let (px, py) = (x[0], x[1]);
                if !(px > 0.0 && px < c.a()) {
                    return Err(Error::OutOfRange {
                        value: px,
                        lo: 0.0,
                        hi: c.a(),
                    });
                }
                let residual = (py - c.alpha(px)).abs();
                if residual > ON_SURFACE_TOL {
                    return Err(Error::NotOnSurface { residual });
                }
                Ok(c.normal_at(px).to_vec())
            }
        }
    }

    /// A uniformly drawn positive surface point, kept a relative margin
    /// `delta` away from the boundary of the surface.
    pub fn sample_inner<R: rand::Rng + ?Sized>(&self, rng: &mut R, delta: f64) -> Vec<f64> {
        match self {
            SSurface::Hyperplane(h) => {
                let n = h.dim();
                // uniform on the simplex via normalized exponentials
                let e: Vec<f64> = (0..n)
                    .map(|_| -(1.0 - rng.random::<f64>()).ln())
                    .collect();
                let total: f64 = e.iter().sum();
                let spread = 1.0 - n as f64 * delta;
                e.iter()
                    .zip(&h.c)
                    .map(|(w, c)| h.m * (delta + spread * w / total) / c)
                    .collect()
            }
            SSurface::Curve(c) => {
                let lo = delta * c.a();
                let x = lo + (c.a() - 2.0 * lo) * rng.random::<f64>();
                vec![x, c.alpha(x)]
            }
        }
    }
}
