use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point outside the non-negative orthant: coordinate {index} is {value}")]
    OutsideOrthant { index: usize, value: f64 },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("point is not on the surface (residual {residual:e})")]
    NotOnSurface { residual: f64 },

    #[error("argument {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("bisection did not converge within {0} iterations")]
    Bisection(usize),

    #[error("surface has no point with normal (1,1)")]
    NoTPoint,

    #[error("cost_total undefined for unbounded EL function")]
    Unbounded,

    #[error("construction failed verification: {0}")]
    Verification(String),

    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    #[error("LP solver: {0}")]
    Solver(String),

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
