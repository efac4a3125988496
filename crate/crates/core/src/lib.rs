//! Entropy-like (EL) functions on the non-negative orthant, the surfaces
//! they are required to jump across, optimal constructions for linear and
//! planar convex or concave surfaces, and the tools to check and bound them.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod construct;
pub mod el;
pub mod error;
pub mod lp;
pub mod point;
pub mod surface;

pub use el::{ElExpr, OrthantFunction, Side};
pub use error::{Error, Result};
pub use point::{OneSidedGrad, Point};
pub use surface::{Curve2D, CurveFamily, Hyperplane, SSurface, Shape, TPoint};
