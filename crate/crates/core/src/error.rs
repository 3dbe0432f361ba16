use thiserror::Error;

use crate::network::{LayerId, NodeId, MAX_LAYERS};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("loop edge on node {0}: source and target must differ")]
    LoopEdge(NodeId),

    #[error("duplicate edge {src} -> {dst} on layer {layer}")]
    DuplicateEdge {
        src: NodeId,
        dst: NodeId,
        layer: LayerId,
    },

    #[error("weight {0} is outside [0, 1]")]
    WeightOutOfRange(f64),

    #[error("unknown layer {0}")]
    UnknownLayer(LayerId),

    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("layer label {0:?} is already registered")]
    DuplicateLayer(String),

    #[error("at most {MAX_LAYERS} layers are supported")]
    TooManyLayers,

    #[error("a network needs at least one node")]
    EmptyNetwork,

    #[error("a network needs at least one layer")]
    NoLayers,

    #[error("source and target are the same node {0}")]
    SameNode(NodeId),

    #[error("alpha must be at least 1, got {0}")]
    InvalidAlpha(u32),

    #[error("beta must lie in [0, 1], got {0}")]
    InvalidBeta(f64),

    #[error("network has {nodes} nodes, above the limit of {limit}")]
    SizeGuardExceeded { nodes: usize, limit: usize },

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("input contains no edge records")]
    EmptyFile,

    #[error("line {line}: {source}")]
    AtLine {
        line: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn at_line(self, line: u64) -> Self {
        Error::AtLine {
            line,
            source: Box::new(self),
        }
    }

    /// The innermost error, looking through line annotations.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLine { source, .. } => source.root(),
            other => other,
        }
    }
}
