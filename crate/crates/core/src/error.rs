use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit index {0} listed more than once")]
    RepeatedQubit(usize),

    #[error("empty qubit selection")]
    EmptySelection,

    #[error("matrix is not Hermitian (max |A - A^H| = {0:e})")]
    NotHermitian(f64),

    #[error("matrix has a significantly negative eigenvalue {0:e}")]
    NegativeEigenvalue(f64),

    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("state is not normalized (norm or trace = {0})")]
    NotNormalized(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid state id: {0}")]
    InvalidState(String),

    #[error("invalid bipartition: {0}")]
    InvalidPartition(String),

    #[error("invalid measure descriptor: {0}")]
    InvalidMeasure(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("measure {0} is already zero at gamma = 0")]
    ZeroAtStart(String),

    #[error("no sign change of {lhs} - {rhs} on the kappa interval")]
    NoSignChange { lhs: String, rhs: String },

    #[error("no sudden-death threshold found for {0}")]
    NoThreshold(String),

    #[error("gamma = {gamma} lies outside the retrieval window [{lo}, {hi})")]
    OutsideWindow { gamma: f64, lo: f64, hi: f64 },
}
