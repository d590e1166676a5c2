use thiserror::Error;

/// Errors raised while constructing or analysing games and chains.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The game description violates one or more structural invariants.
    #[error("invalid game: {}", .0.join("; "))]
    InvalidGame(Vec<String>),

    #[error("invalid network game: {}", .0.join("; "))]
    InvalidNetworkGame(Vec<String>),

    /// A size cap was exceeded; the analysis refuses rather than degrading.
    #[error("{what} exceeds cap: {actual} > {limit}")]
    CapExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),

    #[error("epsilon {epsilon} outside the admissible range (0, {bound})")]
    EpsilonOutOfRange { epsilon: String, bound: String },

    #[error("invalid dynamics configuration: {0}")]
    InvalidConfig(String),

    #[error("not a 2x2 coordination game: {0}")]
    NotCoordinationGame(String),

    #[error("degenerate linear system: {0}")]
    Degenerate(String),

    #[error("stability sweep disagrees with recurrent classes: {0}")]
    SweepDisagreement(String),

    #[error("node count mismatch: {0} vs {1}")]
    NodeCountMismatch(usize, usize),

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
