use thiserror::Error;

/// Errors shared across the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("{qubits} qubits exceeds the statevector limit of {limit}")]
    Capacity { qubits: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("site {0} has already been measured")]
    AlreadyMeasured(usize),

    #[error("forced outcome {outcome} on site {site} has probability 0")]
    ImpossibleBranch { site: usize, outcome: u8 },

    #[error("dimension mismatch: state has {state_qubits} qubits, graph has {graph_vertices} vertices")]
    DimensionMismatch {
        state_qubits: usize,
        graph_vertices: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("malformed circuit: {0}")]
    MalformedCircuit(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
