use thiserror::Error;

/// Errors raised by the numerical laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "quadrature did not converge: achieved error estimate {estimate:e} above tolerance {tolerance:e} (grid {grid})"
    )]
    NonConvergence { estimate: f64, tolerance: f64, grid: usize },

    #[error("energy {energy} lies below the Lifshitz window threshold {threshold}")]
    BelowLifshitzWindow { energy: f64, threshold: f64 },

    #[error("outside the Lifshitz window: C(E*)·λ²/√E* = {ratio} ≥ 1, the truncated expansion gains nothing")]
    OutsideLifshitzWindow { ratio: f64 },

    #[error("periodization error bound {estimate:e} exceeds tolerance {tolerance:e} (grid {grid}, radius {radius}); use a larger grid")]
    PeriodizationTooLarge {
        estimate: f64,
        tolerance: f64,
        grid: usize,
        radius: usize,
    },

    #[error("refusing {what}: size {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("operator is numerically singular (pivot {pivot:e} at row {row}); retry with eta > 0, e.g. eta = {suggested_eta:e}")]
    Singular { pivot: f64, row: usize, suggested_eta: f64 },

    #[error("lattice-sum truncation error {estimate:e} exceeds tolerance {tolerance:e}; enlarge the summation region beyond radius {radius}")]
    TruncationTooLarge {
        estimate: f64,
        tolerance: f64,
        radius: usize,
    },

    #[error("non-integrable configuration: {0}")]
    NonIntegrable(String),

    #[error("linear solve residual {residual:e} above contract {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
