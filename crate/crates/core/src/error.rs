use thiserror::Error;

use crate::histories::ConsistencyReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("tensor product of an empty factor list")]
    EmptyInput,

    #[error("tensor product mixes kets and operators")]
    MixedKinds,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {0} is not a power of two")]
    NotQubitDimension(usize),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("invalid qubit selection: {0}")]
    InvalidQubitSet(String),

    #[error("operator is not a projector (violation {violation:.3e})")]
    NotProjector { violation: f64 },

    #[error("operator is not Hermitian (violation {violation:.3e})")]
    NotHermitian { violation: f64 },

    #[error("density operator has eigenvalue {value:.3e} below -{eps:.1e}")]
    NegativeEigenvalue { value: f64, eps: f64 },

    #[error("unknown time label `{0}`")]
    UnknownTime(String),

    #[error("time `{from}` is later than `{to}`")]
    TimeOrder { from: String, to: String },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("gate parameter `{0}` is not bound")]
    UnboundParameter(String),

    #[error("invalid history family: {0}")]
    InvalidFamily(String),

    #[error("branch index out of range: {0}")]
    InvalidBranch(String),

    #[error("family is inconsistent (worst chain-ket overlap {:.3e})", .0.worst_overlap)]
    Inconsistent(Box<ConsistencyReport>),

    #[error("decompositions at time `{time}` do not commute; they belong to incompatible frameworks")]
    IncompatibleFrameworks { time: String },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("unknown {what} `{name}`")]
    UnknownName { what: &'static str, name: String },

    #[error("claim registry: {0}")]
    Registry(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
