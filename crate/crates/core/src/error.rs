use thiserror::Error;

/// Errors raised by window construction and the analyses built on it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid rotation system: {0}")]
    InvalidRotation(String),
    #[error("vertex {0} lies on the frontier of the window; its incidence data is incomplete")]
    Frontier(u32),
    #[error("window too small: need complete radius {needed}, have {have}")]
    WindowTooSmall { needed: u32, have: u32 },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("spec exhausted: {0}")]
    SpecExhausted(String),
    #[error("empty selection")]
    EmptySelection,
    #[error("selection is not connected")]
    Disconnected,
    #[error("vertex {0} is not in the window")]
    UnknownVertex(u32),
    #[error("face next to half-edge {0} cannot be resolved inside the window")]
    UnresolvedFace(usize),
    #[error("degenerate visit at vertex {0}: front and back vertices coincide")]
    DegenerateVisit(u32),
    #[error("boundary walk is not a simple cycle at vertex {0}")]
    NotSimple(u32),
    #[error("{0} is defined on triangulations only")]
    NotTriangulation(&'static str),
    #[error("vertex {v} is not incident to face {f}")]
    NotIncident { v: u32, f: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid tiling: {0}")]
    InvalidTiling(String),
    #[error("invalid path family: {0}")]
    InvalidFamily(String),
    #[error("enumeration budget of {0} subgraphs exceeded")]
    BudgetExceeded(u64),
    #[error("iteration cap of {cap} rounds reached; VEL bracketed in [{lower}, {upper}]")]
    IterationCap { cap: usize, lower: f64, upper: f64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded(_) | Error::IterationCap { .. } => 3,
            _ => 2,
        }
    }
}
