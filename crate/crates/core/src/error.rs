use std::io;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse error class, used by callers (notably the CLI) to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad parameter values supplied by the caller.
    Usage,
    /// Malformed or inconsistent input data.
    Data,
    /// A quantity is mathematically undefined for the given input.
    Numeric,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("empty graph: {0}")]
    EmptyGraph(String),

    #[error("node id {id} out of range (graph has {n} nodes)")]
    NodeId { id: usize, n: usize },

    #[error("coverage: {0}")]
    Coverage(String),

    #[error("consistency: {0}")]
    Consistency(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("modularity undefined: the graph has no edges")]
    UndefinedModularity,

    #[error("epidemic threshold undefined: <k^2> <= <k> for this degree sequence")]
    ThresholdUndefined,

    #[error("relative outbreak difference undefined: baseline outbreak {0} is not positive")]
    UndefinedBaseline(f64),

    #[error("numeric check failed: {0}")]
    NumericCheck(String),

    #[error("parameter: {0}")]
    Parameter(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parameter(_) => ErrorKind::Usage,
            Error::Parse { .. }
            | Error::EmptyGraph(_)
            | Error::NodeId { .. }
            | Error::Coverage(_)
            | Error::Consistency(_)
            | Error::EmptyInput(_)
            | Error::Io(_) => ErrorKind::Data,
            Error::UndefinedModularity
            | Error::ThresholdUndefined
            | Error::UndefinedBaseline(_)
            | Error::NumericCheck(_) => ErrorKind::Numeric,
        }
    }
}
