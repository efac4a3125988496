//! Entropy-like (EL) functions as closed expression trees.
//!
//! An [`ElExpr`] is built from linear atoms, the closure operations that
//! preserve the EL properties (non-negative combinations, truncation by a
//! constant, clamping of the argument) and the three planar constructions
//! that attain the normal-ratio bound on convex and concave curves.
//!
//! Besides values, every node propagates exact left and right partial
//! derivatives. Derivatives are never estimated numerically here; finite
//! differences live in [`crate::analysis`] as an independent cross-check.

mod pieces;

use serde::{Deserialize, Serialize};

pub use pieces::{ConstructionKind, Seamed, Side, TIE_TOL};

use crate::error::{Error, Result};
use crate::point::{OneSidedGrad, Point};
use crate::surface::{Curve2D, Shape, SlopeRegime, TPoint};

/// Anything defined on the non-negative orthant that can report values and
/// one-sided partials. The property suite in [`crate::analysis`] runs
/// against this trait, so it also accepts functions that are not EL.
pub trait OrthantFunction: Sync {
    fn dim(&self) -> usize;

    /// Value at `x`; `x` has length [`OrthantFunction::dim`] and
    /// non-negative coordinates.
    fn value(&self, x: &[f64]) -> f64;

    /// One-sided partial along axis `d`. Only called with `Side::Left`
    /// where `x[d] > 0`.
    fn partial(&self, x: &[f64], d: usize, side: Side) -> f64;

    fn one_sided(&self, x: &[f64]) -> OneSidedGrad {
        let n = self.dim();
        OneSidedGrad {
            left: (0..n)
                .map(|d| (x[d] > 0.0).then(|| self.partial(x, d, Side::Left)))
                .collect(),
            right: (0..n).map(|d| self.partial(x, d, Side::Right)).collect(),
        }
    }
}

/// Expression tree of an EL function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExprRepr", into = "ExprRepr")]
pub enum ElExpr {
    /// `sum_i c_i x_i` with positive `c`.
    Linear { c: Vec<f64> },
    Sum { left: Box<ElExpr>, right: Box<ElExpr> },
    /// `lambda * inner`, `lambda >= 0`.
    Scale { lambda: f64, inner: Box<ElExpr> },
    /// `min(inner, m)`.
    TruncateMin { m: f64, inner: Box<ElExpr> },
    /// `inner(min(x, a))`.
    Clamp { a: Point, inner: Box<ElExpr> },
    ConvexPlateau(Seamed),
    ConvexDiag(Seamed),
    ConcaveStep(Seamed),
}

impl ElExpr {
    pub fn linear(c: Vec<f64>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::Malformed("linear atom needs coefficients".into()));
        }
        if let Some(v) = c.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Malformed(format!("linear coefficient {v} is not positive")));
        }
        Ok(ElExpr::Linear { c })
    }

    pub fn sum(left: ElExpr, right: ElExpr) -> Result<Self> {
        if left.dim() != right.dim() {
            return Err(Error::DimensionMismatch {
                expected: left.dim(),
                got: right.dim(),
            });
        }
        Ok(ElExpr::Sum {
            left: Box::new(left),
            right: Box::new(right),
        })
    }

    pub fn scale(lambda: f64, inner: ElExpr) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::Malformed(format!("scale factor {lambda} is negative")));
        }
        Ok(ElExpr::Scale {
            lambda,
            inner: Box::new(inner),
        })
    }

    pub fn truncate(m: f64, inner: ElExpr) -> Result<Self> {
        if !(m.is_finite() && m >= 0.0) {
            return Err(Error::Malformed(format!("truncation level {m} is negative")));
        }
        Ok(ElExpr::TruncateMin {
            m,
            inner: Box::new(inner),
        })
    }

    pub fn clamp(a: Point, inner: ElExpr) -> Result<Self> {
        if a.dim() != inner.dim() {
            return Err(Error::DimensionMismatch {
                expected: inner.dim(),
                got: a.dim(),
            });
        }
        if a.iter().any(|v| *v <= 0.0) {
            return Err(Error::Malformed("clamp corner must be strictly positive".into()));
        }
        Ok(ElExpr::Clamp {
            a,
            inner: Box::new(inner),
        })
    }

    /// The flat-plateau construction for a strictly convex curve. Without a
    /// T-point it degenerates to the single branch the slope regime allows.
    pub fn convex_plateau(curve: Curve2D) -> Result<Self> {
        require_shape(&curve, Shape::StrictlyConvex)?;
        let (seam, fallback) = match curve.t_point() {
            Some(t) => (t, false),
            None => match curve.slope_regime() {
                // whole curve on the x >= t_x branch, C = a
                SlopeRegime::Shallow => (TPoint { t_x: 0.0, t_y: curve.b() }, true),
                // whole curve on the y >= t_y branch, C = b
                _ => (TPoint { t_x: curve.a(), t_y: 0.0 }, true),
            },
        };
        Ok(ElExpr::ConvexPlateau(Seamed {
            curve,
            seam,
            fallback,
        }))
    }

    /// The diagonal construction for a strictly convex curve; its cost at
    /// the origin is 1 and it needs an interior T-point.
    pub fn convex_diag(curve: Curve2D) -> Result<Self> {
        require_shape(&curve, Shape::StrictlyConvex)?;
        let seam = curve.t_point().ok_or(Error::NoTPoint)?;
        Ok(ElExpr::ConvexDiag(Seamed {
            curve,
            seam,
            fallback: false,
        }))
    }

    /// The stepped-plateau construction for a strictly concave curve.
    pub fn concave_step(curve: Curve2D) -> Result<Self> {
        require_shape(&curve, Shape::StrictlyConcave)?;
        let (seam, fallback) = match curve.t_point() {
            Some(t) => (t, false),
            None => match curve.slope_regime() {
                SlopeRegime::Shallow => (TPoint { t_x: curve.a(), t_y: 0.0 }, true),
                _ => (TPoint { t_x: 0.0, t_y: curve.b() }, true),
            },
        };
        Ok(ElExpr::ConcaveStep(Seamed {
            curve,
            seam,
            fallback,
        }))
    }

    pub fn dim(&self) -> usize {
        match self {
            ElExpr::Linear { c } => c.len(),
            ElExpr::Sum { left, .. } => left.dim(),
            ElExpr::Scale { inner, .. } | ElExpr::TruncateMin { inner, .. } => inner.dim(),
            ElExpr::Clamp { a, .. } => a.dim(),
            ElExpr::ConvexPlateau(_) | ElExpr::ConvexDiag(_) | ElExpr::ConcaveStep(_) => 2,
        }
    }

    fn check(&self, x: &Point) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        Ok(())
    }

    /// `f(x)`.
    pub fn eval(&self, x: &Point) -> Result<f64> {
        self.check(x)?;
        Ok(self.value(x))
    }

    /// Exact left and right partials at `x`.
    pub fn one_sided_partials(&self, x: &Point) -> Result<OneSidedGrad> {
        self.check(x)?;
        Ok(self.one_sided(x))
    }

    /// `max_i f_i^+(0)`.
    pub fn cost(&self) -> f64 {
        let origin = vec![0.0; self.dim()];
        (0..self.dim())
            .map(|d| self.partial(&origin, d, Side::Right))
            .fold(0.0, f64::max)
    }

    /// Supremum of the range.
    pub fn cost_total(&self) -> Result<f64> {
        self.sup().ok_or(Error::Unbounded)
    }

    fn sup(&self) -> Option<f64> {
        match self {
            ElExpr::Linear { .. } => None,
            ElExpr::Sum { left, right } => Some(left.sup()? + right.sup()?),
            ElExpr::Scale { lambda, inner } => {
                if *lambda == 0.0 {
                    Some(0.0)
                } else {
                    inner.sup().map(|s| lambda * s)
                }
            }
            // an unbounded inner crosses every level
            ElExpr::TruncateMin { m, inner } => Some(inner.sup().map_or(*m, |s| s.min(*m))),
            ElExpr::Clamp { a, inner } => Some(inner.value(a)),
            ElExpr::ConvexPlateau(s) => Some(s.plateau(ConstructionKind::ConvexPlateau)),
            ElExpr::ConvexDiag(s) => Some(s.plateau(ConstructionKind::ConvexDiag)),
            ElExpr::ConcaveStep(s) => Some(s.plateau(ConstructionKind::ConcaveStep)),
        }
    }

    /// The construction kind and seamed curve, if this is a bare construction.
    pub fn construction(&self) -> Option<(ConstructionKind, &Seamed)> {
        match self {
            ElExpr::ConvexPlateau(s) => Some((ConstructionKind::ConvexPlateau, s)),
            ElExpr::ConvexDiag(s) => Some((ConstructionKind::ConvexDiag, s)),
            ElExpr::ConcaveStep(s) => Some((ConstructionKind::ConcaveStep, s)),
            _ => None,
        }
    }
}

fn require_shape(curve: &Curve2D, shape: Shape) -> Result<()> {
    if curve.shape() != shape {
        return Err(Error::ShapeMismatch(format!(
            "construction needs a {shape:?} curve, got {:?}",
            curve.shape()
        )));
    }
    let report = curve.validate();
    if !report.valid {
        return Err(Error::InvalidSurface(report.violations.join("; ")));
    }
    Ok(())
}

fn tie(u: f64, scale: f64) -> bool {
    u.abs() <= TIE_TOL * scale.abs().max(1.0)
}

impl OrthantFunction for ElExpr {
    fn dim(&self) -> usize {
        ElExpr::dim(self)
    }

    fn value(&self, x: &[f64]) -> f64 {
        match self {
            ElExpr::Linear { c } => c.iter().zip(x).map(|(c, v)| c * v).sum(),
            ElExpr::Sum { left, right } => left.value(x) + right.value(x),
            ElExpr::Scale { lambda, inner } => lambda * inner.value(x),
            ElExpr::TruncateMin { m, inner } => inner.value(x).min(*m),
            ElExpr::Clamp { a, inner } => {
                let y: Vec<f64> = x.iter().zip(a.iter()).map(|(v, a)| v.min(*a)).collect();
                inner.value(&y)
            }
            ElExpr::ConvexPlateau(s) => s.value(ConstructionKind::ConvexPlateau, x[0], x[1]),
            ElExpr::ConvexDiag(s) => s.value(ConstructionKind::ConvexDiag, x[0], x[1]),
            ElExpr::ConcaveStep(s) => s.value(ConstructionKind::ConcaveStep, x[0], x[1]),
        }
    }

    fn partial(&self, x: &[f64], d: usize, side: Side) -> f64 {
        match self {
            ElExpr::Linear { c } => c[d],
            ElExpr::Sum { left, right } => left.partial(x, d, side) + right.partial(x, d, side),
            ElExpr::Scale { lambda, inner } => {
                if *lambda == 0.0 {
                    0.0
                } else {
                    lambda * inner.partial(x, d, side)
                }
            }
            ElExpr::TruncateMin { m, inner } => {
                let v = inner.value(x);
                if tie(v - m, *m) {
                    match side {
                        Side::Left => inner.partial(x, d, side).max(0.0),
                        Side::Right => inner.partial(x, d, side).min(0.0),
                    }
                } else if v < *m {
                    inner.partial(x, d, side)
                } else {
                    0.0
                }
            }
            ElExpr::Clamp { a, inner } => {
                let mut y: Vec<f64> = x.iter().zip(a.iter()).map(|(v, a)| v.min(*a)).collect();
                if tie(x[d] - a[d], a[d]) {
                    y[d] = a[d];
                    match side {
                        Side::Left => inner.partial(&y, d, side),
                        Side::Right => 0.0,
                    }
                } else if x[d] < a[d] {
                    inner.partial(&y, d, side)
                } else {
                    0.0
                }
            }
            ElExpr::ConvexPlateau(s) => s.partial(ConstructionKind::ConvexPlateau, x[0], x[1], d, side),
            ElExpr::ConvexDiag(s) => s.partial(ConstructionKind::ConvexDiag, x[0], x[1], d, side),
            ElExpr::ConcaveStep(s) => s.partial(ConstructionKind::ConcaveStep, x[0], x[1], d, side),
        }
    }
}

/// Serialized form. Constructions store only their curve; the seam is
/// recomputed deterministically on load.
#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
enum ExprRepr {
    Linear { c: Vec<f64> },
    Sum { left: Box<ExprRepr>, right: Box<ExprRepr> },
    Scale { lambda: f64, inner: Box<ExprRepr> },
    TruncateMin { m: f64, inner: Box<ExprRepr> },
    Clamp { a: Point, inner: Box<ExprRepr> },
    ConvexPlateau { curve: Curve2D },
    ConvexDiag { curve: Curve2D },
    ConcaveStep { curve: Curve2D },
}

impl TryFrom<ExprRepr> for ElExpr {
    type Error = Error;
    fn try_from(r: ExprRepr) -> Result<Self> {
        match r {
            ExprRepr::Linear { c } => ElExpr::linear(c),
            ExprRepr::Sum { left, right } => ElExpr::sum((*left).try_into()?, (*right).try_into()?),
            ExprRepr::Scale { lambda, inner } => ElExpr::scale(lambda, (*inner).try_into()?),
            ExprRepr::TruncateMin { m, inner } => ElExpr::truncate(m, (*inner).try_into()?),
            ExprRepr::Clamp { a, inner } => ElExpr::clamp(a, (*inner).try_into()?),
            ExprRepr::ConvexPlateau { curve } => ElExpr::convex_plateau(curve),
            ExprRepr::ConvexDiag { curve } => ElExpr::convex_diag(curve),
            ExprRepr::ConcaveStep { curve } => ElExpr::concave_step(curve),
        }
    }
}

impl From<ElExpr> for ExprRepr {
    fn from(e: ElExpr) -> Self {
        match e {
            ElExpr::Linear { c } => ExprRepr::Linear { c },
            ElExpr::Sum { left, right } => ExprRepr::Sum {
                left: Box::new((*left).into()),
                right: Box::new((*right).into()),
            },
            ElExpr::Scale { lambda, inner } => ExprRepr::Scale {
                lambda,
                inner: Box::new((*inner).into()),
            },
            ElExpr::TruncateMin { m, inner } => ExprRepr::TruncateMin {
                m,
                inner: Box::new((*inner).into()),
            },
            ElExpr::Clamp { a, inner } => ExprRepr::Clamp {
                a,
                inner: Box::new((*inner).into()),
            },
            ElExpr::ConvexPlateau(s) => ExprRepr::ConvexPlateau { curve: s.curve },
            ElExpr::ConvexDiag(s) => ExprRepr::ConvexDiag { curve: s.curve },
            ElExpr::ConcaveStep(s) => ExprRepr::ConcaveStep { curve: s.curve },
        }
    }
}

#[cfg(test)]
mod tests;
