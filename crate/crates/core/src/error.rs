use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: argument {value} outside the domain")]
    Domain { function: &'static str, value: f64 },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("singular value decomposition did not converge")]
    SvdNoConvergence,

    #[error("Schmidt spectrum sums to {0}, drift exceeds 1e-9")]
    NormalizationDrift(f64),

    #[error("no samples")]
    EmptySamples,

    #[error("unknown quantity id `{0}`")]
    UnknownQuantity(alloc::string::String),

    #[error("non-finite sample value {0}")]
    NonFinite(f64),

    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
