use thiserror::Error;

use crate::lp::LpError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid preference profile: {0}")]
    InvalidProfile(String),
    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unknown agent index {0}")]
    UnknownAgent(usize),
    #[error("rank {rank} out of range 1..={n}")]
    RankOutOfRange { rank: usize, n: usize },
    #[error("invalid rank order: {0}")]
    InvalidSigma(String),
    #[error("inconsistent utilities: {0}")]
    InconsistentUtilities(String),
    #[error("objects {a} and {b} are not adjacent in the ranking of agent {agent}")]
    NonAdjacentSwap { agent: usize, a: usize, b: usize },
    #[error("brute-force bound exceeded: n = {n}, limit {limit}")]
    BoundExceeded { n: usize, limit: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
