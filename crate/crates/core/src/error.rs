use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("algebra mismatch: {left} vs {right}")]
    DescriptorMismatch { left: String, right: String },

    #[error("invalid algebra descriptor: {0}")]
    InvalidAlgebra(String),

    #[error("coefficient vector has length {got}, algebra dimension is {expected}")]
    CoeffLength { expected: usize, got: usize },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("eigenvalue {value} is outside the domain of {function}")]
    Domain { function: &'static str, value: f64 },

    #[error("not a state: {0}")]
    NotAState(String),

    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("composite layout mismatch: {0}")]
    Layout(String),

    #[error("subsystems must be pairwise disjoint: {0}")]
    OverlappingSubsystems(String),

    #[error("action set is empty")]
    EmptyActions,

    #[error("invalid no-signaling box: {0}")]
    InvalidBox(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn mismatch(left: impl ToString, right: impl ToString) -> Self {
        Error::DescriptorMismatch {
            left: left.to_string(),
            right: right.to_string(),
        }
    }
}
