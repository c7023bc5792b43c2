use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("half-edge {0} is out of range (graph has {1} half-edges)")]
    HalfEdgeOutOfRange(usize, usize),
    #[error("half-edge {0} appears more than once in the rotations")]
    DuplicateInRotation(usize),
    #[error("half-edge {0} paired twice")]
    PairedTwice(usize),
    #[error("half-edge {0} does not occur in any rotation")]
    MissingFromRotation(usize),
    #[error("half-edge {0} is not paired by any edge")]
    Unpaired(usize),
    #[error("edge {index} is out of range (graph has {edges} edges)")]
    EdgeOutOfRange { index: usize, edges: usize },
    #[error("graph has no edges")]
    NoEdges,
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("{edges} edges exceed the enumeration cap of {cap}; raise the cap explicitly if the 2^{edges} states are intended")]
    EnumerationCap { edges: usize, cap: usize },
    #[error("invalid lens parameters (p = {p}, q = {q}): {reason}")]
    InvalidLens {
        p: i64,
        q: i64,
        reason: &'static str,
    },
    #[error("p = {p} exceeds the configured bound {bound}")]
    BoundExceeded { p: u64, bound: u64 },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    AtLine { line: usize, source: Box<Error> },
    #[error("header declares {declared} {what}, found {found}")]
    CountMismatch {
        what: &'static str,
        declared: usize,
        found: usize,
    },
    #[error("cannot parse polynomial: {0}")]
    PolyParse(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
}
