use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate pair: the two points coincide")]
    DegeneratePair,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is not connected")]
    NotConnected,

    #[error("graph is not 2-connected")]
    NotTwoConnected,

    #[error("penny hypothesis fails: vertices {0} and {1} are closer than 1 (distance {2})")]
    PennyViolation(usize, usize, f64),

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("retry budget exhausted after {0} attempts")]
    RetriesExhausted(usize),

    /// A proven identity or inequality failed. Either the input bypassed
    /// validation or there is a bug in the traversal code.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_inconsistency(&self) -> bool {
        matches!(self, Error::Inconsistent(_))
    }
}
