//! Error type shared by all simulation modules.

use thiserror::Error;

/// Everything that can go wrong when evaluating channels, states, or the
/// master-equation integrator.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),

    #[error("invalid channel model: {0}")]
    InvalidModel(String),

    #[error("photon number must be at least 1")]
    ZeroPhotons,

    #[error("bitstring has length {got}, expected {expected}")]
    BitstringLength { expected: usize, got: usize },

    #[error("bitstring digit at position {0} is not 0 or 1")]
    InvalidBit(usize),

    #[error("dense representation of {n} qubits exceeds the {max}-qubit capacity")]
    DenseTooLarge { n: usize, max: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("coherence block trace {block_trace:.3e} is too small to define the SLD")]
    DegenerateState { block_trace: f64 },

    #[error("no Lindblad realization is shipped for {0}")]
    UnsupportedDecomposition(&'static str),

    #[error("decay rate has a pole near t = {t}")]
    PoleAt { t: f64 },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("integration unstable at step {step} (t = {t}): trace drift {drift:.3e}")]
    IntegrationUnstable { step: usize, t: f64, drift: f64 },

    #[error("time series must be strictly increasing (violated at index {0})")]
    NonMonotonicSeries(usize),

    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
