use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph is disconnected: {} components (first: {:?})", components.len(), components.first())]
    DisconnectedGraph { components: Vec<Vec<usize>> },
    #[error("edge ({u}, {v}) has non-positive or non-finite length {length}")]
    NonPositiveLength { u: usize, v: usize, length: f64 },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("vertex id {id} out of range for {vertex_count} vertices")]
    InvalidVertexId { id: usize, vertex_count: usize },
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("graph has no edges")]
    EmptyEdgeSet,
    #[error("face {face} is invalid: {reason}")]
    InvalidFace { face: usize, reason: String },
    #[error("mesh edge ({u}, {v}) has zero length")]
    DegenerateEdge { u: usize, v: usize },

    #[error("vertices {u} and {v} are not adjacent")]
    NotAdjacent { u: usize, v: usize },
    #[error("source set is empty")]
    EmptySourceSet,
    #[error("source {0} listed more than once")]
    DuplicateSource(usize),
    #[error("k = {k} exceeds vertex count {n}")]
    KTooLarge { k: usize, n: usize },
    #[error("k must be at least 1")]
    KTooSmall,

    #[error("oracle does not belong to this graph: {0}")]
    GraphOracleMismatch(String),
    #[error("graph checksum {found:#018x} does not match oracle checksum {expected:#018x}")]
    ChecksumMismatch { expected: u64, found: u64 },
    #[error("corrupt oracle file: {0}")]
    CorruptFile(String),
    #[error("unsupported oracle format version {found:?}")]
    VersionMismatch { found: String },

    #[error("graph has {n} vertices, above the naive-evaluation cap of {cap}")]
    GraphTooLargeForNaive { n: usize, cap: usize },
    #[error("source sets differ in size ({left} vs {right})")]
    SourceSetSizeMismatch { left: usize, right: usize },
    #[error("enumeration needs {needed} subsets, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("vertex {vertex} has degree {degree}, maximum allowed is 3")]
    DegreeTooHigh { vertex: usize, degree: usize },
    #[error("malformed polyline for edge ({u}, {v}): {reason}")]
    MalformedPolyline { u: usize, v: usize, reason: String },
    #[error("polylines overlap at grid point ({x}, {y})")]
    OverlappingPolylines { x: i64, y: i64 },
    #[error("xi = {0} is below the minimum of 3")]
    XiTooSmall(f64),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
