use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),

    #[error("self-loop on vertex {0}")]
    SelfLoop(String),

    #[error("edge {u}-{v} has non-positive weight {weight}")]
    NonPositiveWeight { u: String, v: String, weight: f64 },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("input mismatch: {0}")]
    Mismatch(String),

    #[error("non-finite weight or entropy at step {step} on edge {edge}")]
    NumericalAbort { step: usize, edge: usize },

    #[error("distributions have different supports at vertex {0}")]
    SupportMismatch(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
