//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced while building algebras, states, or bases.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The deformation parameter cannot be represented or used as requested.
    #[error("invalid kappa: {0}")]
    InvalidKappa(String),

    /// A structure-function value required to be positive is not.
    #[error("positivity violated: F({n}) = {value} for kappa = {kappa} (1 + kappa(n-1) must stay positive)")]
    PositivityViolation {
        n: usize,
        kappa: String,
        value: String,
    },

    /// Sizes, dimensions, or label ranges do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Operation restricted to the finite regime was called on kappa >= 0,
    /// or an infinite-regime surrogate was requested for kappa < 0.
    #[error("regime error: {0}")]
    Regime(String),

    /// A parameter is outside its admitted range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Text input (kappa strings, potential specs) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// JSON payload could not be interpreted.
    #[error("json error: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
