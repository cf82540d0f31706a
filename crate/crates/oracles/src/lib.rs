//! Slow, literal reference implementations for cross-checking
//! `typicality-core`. Each oracle takes the long way round: full density
//! matrices, explicit partial transposes, numerical quadrature and grid
//! searches. Nothing here is meant for production use.

mod density;
mod minimize;
mod quadrature;
mod stats;

pub use density::{gram_schmidt_spectrum, oracle_l1, oracle_negativity, DensityMatrix};
pub use minimize::{oracle_min_distance, Family, GridInput, GridMinimum};
pub use quadrature::{
    laguerre_connection_sum, laguerre_recurrence, oracle_quadrature_laguerre, Quadrature,
};
pub use stats::{two_pass_mean_variance, TwoPass};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("not a density matrix: {0}")]
    InvalidDensityMatrix(&'static str),
    #[error("dimension {0} exceeds the oracle's limit of {1}")]
    TooLarge(usize, usize),
    #[error("unsupported input: {0}")]
    Unsupported(&'static str),
    #[error("quadrature missed tolerance: error estimate {0:e}")]
    ToleranceNotMet(f64),
}

pub type Result<T> = std::result::Result<T, OracleError>;
