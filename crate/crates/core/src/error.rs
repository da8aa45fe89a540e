use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("dimension {dim} exceeds the supported maximum of {max}")]
    TooLarge { dim: usize, max: usize },

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit index {0} listed more than once")]
    DuplicateQubit(usize),

    #[error("invalid qubit subset: {0}")]
    InvalidSubset(String),

    #[error("trace deviates from 1 by {0:e}")]
    TraceNotUnit(f64),

    #[error("state norm deviates from 1 by {0:e}")]
    Unnormalized(f64),

    #[error("qubit count {n} outside supported range {min}..={max}")]
    QubitCount { n: usize, min: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("negative eigenvalue {0:e} beyond tolerance")]
    NegativeEigenvalue(f64),

    #[error("Jacobi iteration did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("numerical inconsistency: {0}")]
    Numerical(String),

    #[error("unknown inequality identifier `{0}`")]
    UnknownInequality(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("objective returned a non-finite value")]
    NonFiniteObjective,

    #[error("state file: {0}")]
    StateFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
