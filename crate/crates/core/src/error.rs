use std::path::PathBuf;

use thiserror::Error;

use crate::problems::ProblemKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid gate {gate}: {reason}")]
    InvalidGate { gate: String, reason: String },

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("circuit still contains composite gate {0}; decompose it first")]
    NotDecomposed(String),

    #[error("{gate} needs {needed} ancilla qubits, got {given}")]
    InsufficientAncillas {
        gate: String,
        needed: usize,
        given: usize,
    },

    #[error("{n_qubits} qubits exceeds the simulator cap of {cap}")]
    TooManyQubits { n_qubits: usize, cap: usize },

    #[error("{kind} does not support size {size} (supported {min}..={max})")]
    SizeOutOfRange {
        kind: ProblemKind,
        size: usize,
        min: usize,
        max: usize,
    },

    #[error("bitstring has {got} bits, expected {expected}")]
    BitLength { expected: usize, got: usize },

    #[error("{0} has no classical bitstring cost")]
    NoClassicalCost(ProblemKind),

    #[error("instance too large for exhaustive search: {0}")]
    TooLargeForOracle(String),

    #[error("expected {expected} parameters, got {got}")]
    ParamCount { expected: usize, got: usize },

    #[error("missing {0} histogram")]
    MissingBasis(&'static str),

    #[error("objective returned {value} at {point:?}")]
    NonFiniteObjective { value: f64, point: Vec<f64> },

    #[error("{kind} size {size} cycle {cycle}: {source}")]
    Run {
        kind: ProblemKind,
        size: usize,
        cycle: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("record {index}: {message}")]
    Schema { index: usize, message: String },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("scoring: {0}")]
    Scoring(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
