use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("operation needs two distinct vertices, got {0} twice")]
    SameVertex(usize),

    #[error("EC3 requires a non-adjacent pair, but {0} and {1} are adjacent")]
    Ec3OnAdjacentPair(usize, usize),

    #[error("pivot requires an edge, but {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),

    #[error("step {step}: {reason}")]
    Replay { step: usize, reason: Box<Error> },

    #[error("vertex {0} was already deleted")]
    DeletedVertex(usize),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what}: size {n} exceeds guard {max}")]
    GuardExceeded { what: &'static str, n: usize, max: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid rank decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("matrix is not symplectic")]
    NonSymplectic,

    #[error("replayed trace does not reproduce the target graph")]
    ReplayMismatch,

    #[error("cost {cost} is below the lower bound {bound}")]
    LowerBoundViolation { cost: usize, bound: usize },

    #[error("malformed word: {0}")]
    MalformedWord(String),

    #[error("malformed circuit: {0}")]
    MalformedCircuit(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
