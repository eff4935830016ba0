use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unknown node {0}")]
    UnknownNode(u64),
    #[error("palette exceeded: more than {0} colors needed")]
    PaletteExceeded(usize),
    /// A required inequality between constants does not hold at the active
    /// parameters. The message names the inequality.
    #[error("constants infeasible: {0}")]
    Infeasible(String),
    #[error("malformed advice: {0}")]
    Decode(String),
    #[error("node {node}: {msg}")]
    NodeFailure { node: u64, msg: String },
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Infeasible(_) => 2,
            Error::Decode(_)
            | Error::NodeFailure { .. }
            | Error::SearchFailed(_)
            | Error::Precondition(_)
            | Error::Verification(_)
            | Error::PaletteExceeded(_) => 3,
            Error::Parse(_) | Error::Io(_) => 4,
            Error::InvalidParams(_) | Error::UnknownNode(_) => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
