use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("vector is not normalized: ‖·‖₂ = {norm}")]
    NotNormalized { norm: f64 },
    #[error("matrix is not Hermitian: max deviation {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not a density matrix: {0}")]
    NotDensityMatrix(String),
    #[error("basis is not orthonormal and complete: max Gram deviation {deviation:.3e}")]
    NotOrthonormal { deviation: f64 },
    #[error("basis is not maximally entangled within tolerance {tol:.3e}")]
    NotMaximallyEntangled { tol: f64 },
    #[error("state is maximally entangled; the construction requires otherwise")]
    MaximallyEntangledInput,
    #[error("basis state ψ0 violates the hypothesis: {0}")]
    HypothesisViolation(String),
    #[error("parameter {name} = {value} outside valid range {range}")]
    OutOfRange {
        name: String,
        value: f64,
        range: String,
    },
    #[error("numerically degenerate input: {0}")]
    Degenerate(String),
    #[error("trajectory has no transient signal to fit")]
    NoTransient,
    #[error("histogram binnings do not match")]
    BinningMismatch,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
