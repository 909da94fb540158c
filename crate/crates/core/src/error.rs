use thiserror::Error;

/// Everything that can go wrong while building or evaluating an ensemble.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (entrywise residual {residual:.3e})")]
    NonHermitianInput { residual: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },

    #[error("function undefined at eigenvalue {eigenvalue:.6e}")]
    DomainError { eigenvalue: f64 },

    #[error("probabilities sum to {sum:.12}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("probability {value} outside [0, 1]")]
    ProbabilityOutOfRange { value: f64 },

    #[error("state is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state trace is {trace:.12}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("state vector norm is {norm:.9}, expected 1")]
    VectorNotNormalized { norm: f64 },

    #[error("ensemble has no members")]
    EmptyEnsemble,

    #[error("member {index}: {source}")]
    Member {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("member {index} is not a pure state (second eigenvalue {second_eigenvalue:.3e})")]
    MixedStateMember {
        index: usize,
        second_eigenvalue: f64,
    },

    #[error("expected {expected} members, found {found}")]
    WrongMemberCount { expected: usize, found: usize },

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("schema error at `{field}`: {message}")]
    Schema { field: String, message: String },
}

impl Error {
    pub(crate) fn member(index: usize, source: Error) -> Self {
        Error::Member {
            index,
            source: Box::new(source),
        }
    }

    /// True for malformed input documents, as opposed to well-formed input
    /// that violates a mathematical invariant.
    pub fn is_schema(&self) -> bool {
        matches!(self, Error::Schema { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
