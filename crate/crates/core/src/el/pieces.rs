//! Branch formulas of the three planar constructions.
//!
//! Every branch has the form `base(x, y) + min(u(x, y), 0)` with smooth
//! `base` and `u`, which is all the one-sided derivative rules need: away
//! from `u = 0` the kink is inactive or fully active, and on `u = 0` the
//! right derivative takes `min(du, 0)` while the left one takes
//! `max(du, 0)`.

use serde::{Deserialize, Serialize};

use crate::surface::{Curve2D, TPoint};

/// Absolute tie tolerance for branch classification, scaled by the
/// surface size.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Which construction a [`Seamed`] curve feeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    ConvexPlateau,
    ConvexDiag,
    ConcaveStep,
}

/// A curve together with the seam point the branches are split at.
///
/// The seam is the T-point when it exists; the single-branch fallbacks use
/// an endpoint of the curve instead, which makes one of the side branches
/// empty.
#[derive(Clone, Debug, PartialEq)]
pub struct Seamed {
    pub(crate) curve: Curve2D,
    pub(crate) seam: TPoint,
    pub(crate) fallback: bool,
}

struct Kink {
    u: f64,
    du: [f64; 2],
}

struct Piece {
    value: f64,
    grad: [f64; 2],
    kink: Option<Kink>,
}

impl Piece {
    fn flat(value: f64) -> Self {
        Piece {
            value,
            grad: [0.0, 0.0],
            kink: None,
        }
    }
}

impl Seamed {
    pub fn curve(&self) -> &Curve2D {
        &self.curve
    }

    pub fn seam(&self) -> TPoint {
        self.seam
    }

    /// True when the seam is an endpoint of the curve rather than a T-point.
    pub fn is_fallback(&self) -> bool {
        self.fallback
    }

    fn tol(&self) -> f64 {
        TIE_TOL * self.curve.a().max(self.curve.b()).max(1.0)
    }

    /// `coord >= thresh` for the point moved infinitesimally along `probe`.
    fn ge(&self, coord: f64, thresh: f64, axis: usize, probe: Option<(usize, Side)>) -> bool {
        if (coord - thresh).abs() <= self.tol() {
            match probe {
                Some((d, side)) if d == axis => side == Side::Right,
                _ => true,
            }
        } else {
            coord > thresh
        }
    }

    fn alpha_ext(&self, x: f64) -> (f64, f64) {
        if x >= self.curve.a() {
            (0.0, 0.0)
        } else {
            (self.curve.alpha(x), self.curve.alpha_prime(x))
        }
    }

    fn beta_ext(&self, y: f64) -> (f64, f64) {
        if y >= self.curve.b() {
            (0.0, 0.0)
        } else {
            (self.curve.beta_unchecked(y), self.curve.beta_prime_unchecked(y))
        }
    }

    /// Height of the plateau region.
    pub fn plateau(&self, kind: ConstructionKind) -> f64 {
        let TPoint { t_x, t_y } = self.seam;
        match kind {
            ConstructionKind::ConvexPlateau => self.curve.a() - t_x + self.curve.b() - t_y,
            ConstructionKind::ConvexDiag | ConstructionKind::ConcaveStep => t_x + t_y,
        }
    }

    fn piece(&self, kind: ConstructionKind, x: f64, y: f64, probe: Option<(usize, Side)>) -> Piece {
        let TPoint { t_x, t_y } = self.seam;
        let right_of = self.ge(x, t_x, 0, probe);
        let above = self.ge(y, t_y, 1, probe);
        let c = self.plateau(kind);
        if right_of && above {
            return Piece::flat(c);
        }
        match kind {
            ConstructionKind::ConvexPlateau => {
                if right_of {
                    let (b, bp) = self.beta_ext(y);
                    let u = x - b;
                    Piece {
                        value: c + u.min(0.0),
                        grad: [0.0, 0.0],
                        kink: Some(Kink { u, du: [1.0, -bp] }),
                    }
                } else if above {
                    let (a, ap) = self.alpha_ext(x);
                    let u = y - a;
                    Piece {
                        value: c + u.min(0.0),
                        grad: [0.0, 0.0],
                        kink: Some(Kink { u, du: [-ap, 1.0] }),
                    }
                } else {
                    let (a, ap) = self.alpha_ext(x);
                    let (b, bp) = self.beta_ext(y);
                    Piece {
                        value: self.curve.a() - a + self.curve.b() - b,
                        grad: [-ap, -bp],
                        kink: None,
                    }
                }
            }
            ConstructionKind::ConvexDiag => {
                if right_of {
                    let (a, ap) = self.alpha_ext(x);
                    let u = y - a;
                    Piece {
                        value: c + u.min(0.0),
                        grad: [0.0, 0.0],
                        kink: Some(Kink { u, du: [-ap, 1.0] }),
                    }
                } else if above {
                    let (b, bp) = self.beta_ext(y);
                    let u = x - b;
                    Piece {
                        value: c + u.min(0.0),
                        grad: [0.0, 0.0],
                        kink: Some(Kink { u, du: [1.0, -bp] }),
                    }
                } else {
                    Piece {
                        value: x + y,
                        grad: [1.0, 1.0],
                        kink: None,
                    }
                }
            }
            ConstructionKind::ConcaveStep => {
                if right_of {
                    let (b, bp) = self.beta_ext(y);
                    Piece {
                        value: y + x.min(b),
                        grad: [0.0, 1.0 + bp],
                        kink: Some(Kink {
                            u: x - b,
                            du: [1.0, -bp],
                        }),
                    }
                } else if above {
                    let (a, ap) = self.alpha_ext(x);
                    Piece {
                        value: x + y.min(a),
                        grad: [1.0 + ap, 0.0],
                        kink: Some(Kink {
                            u: y - a,
                            du: [-ap, 1.0],
                        }),
                    }
                } else {
                    Piece {
                        value: x + y,
                        grad: [1.0, 1.0],
                        kink: None,
                    }
                }
            }
        }
    }

    pub(crate) fn value(&self, kind: ConstructionKind, x: f64, y: f64) -> f64 {
        self.piece(kind, x, y, None).value
    }

    /// One-sided partial along axis `d` taken from the branch the point
    /// enters when moved infinitesimally to `side`.
    pub(crate) fn partial(&self, kind: ConstructionKind, x: f64, y: f64, d: usize, side: Side) -> f64 {
        let p = self.piece(kind, x, y, Some((d, side)));
        let mut g = p.grad[d];
        if let Some(k) = p.kink {
            let du = k.du[d];
            g += if k.u.abs() <= self.tol() {
                match side {
                    Side::Right => du.min(0.0),
                    Side::Left => du.max(0.0),
                }
            } else if k.u < 0.0 {
                du
            } else {
                0.0
            };
        }
        g
    }
}
