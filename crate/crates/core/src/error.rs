use thiserror::Error;

/// Errors raised by the packet library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("uncertainty principle violated: dx0*dp0 = {product} < hbar/2 = {bound}")]
    UncertaintyViolation { product: f64, bound: f64 },

    #[error("inconsistent variances: cosh(2r) = {cosh_2r} < 1")]
    InconsistentVariances { cosh_2r: f64 },

    #[error("state is not contractive: {0}")]
    NotContractive(&'static str),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid too narrow: boundary density is {ratio:e} of the peak at t = {t}")]
    GridTooNarrow { t: f64, ratio: f64 },

    #[error("wave field leaked to the grid boundary (density ratio {ratio:e}) at t = {t}")]
    BoundaryLeak { t: f64, ratio: f64 },

    #[error("wave field is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("wave fields live on different grids or times")]
    GridMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;
