use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("a point must have at least one entry")]
    EmptyPoint,
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },
    #[error("power iteration did not converge in {iterations} iterations (last Rayleigh quotient {last})")]
    NoConvergence { iterations: usize, last: f64 },
    #[error("function value is NaN")]
    NanValue,
    #[error("function value is +inf at the proximal point; the prox and value are inconsistent")]
    InfiniteAtProx,
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("step-size admissibility violated: {0}")]
    Inadmissible(String),
    #[error("unsupported problem shape: {0}")]
    Shape(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("singular Newton system at iteration {iteration} (condition estimate {condition:e})")]
    Singular { iteration: usize, condition: f64 },
    #[error("line search did not terminate after {halvings} halvings")]
    LineSearch { halvings: usize },
    #[error("missing conjugate: {0}")]
    MissingConjugate(String),
    #[error("iterate became non-finite at iteration {0}")]
    Diverged(usize),
    #[error("reference solve failed: residual {residual:e} after {iterations} iterations")]
    Reference { residual: f64, iterations: usize },
    #[error("rate fit: {0}")]
    RateFit(String),
    #[error("operation requires a Newton derivative that is not registered: {0}")]
    Unregistered(String),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument { name, reason: reason.into() }
}
