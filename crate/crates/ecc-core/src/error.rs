use thiserror::Error;

/// Errors surfaced by the library.
///
/// The CLI maps these onto process exit codes: `Domain` and `Precondition`
/// are argument/validation failures (exit 2), `Sizing` covers schedule and
/// clique-budget refusals (exit 3), and `Parse` covers malformed input files
/// (exit 4).
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its mathematical domain (e.g. a probability
    /// outside `[0, 1]`).
    #[error("domain error: {0}")]
    Domain(String),

    /// A call violated an operation's stated precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An instance is too large for the requested operation, or a predicted
    /// enumeration exceeds the configured clique budget.
    #[error("sizing error: {0}")]
    Sizing(String),

    /// A graph, cover, or config file failed to parse. `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
