use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("parameter out of range: {0}")]
    Range(String),

    #[error("exact enumeration refused: {0}; use the Monte-Carlo locality mode instead")]
    ScaleCap(String),

    #[error("set expression side mismatch: {0}")]
    SideMismatch(String),

    #[error("oracle {0} has no rectangle in the family")]
    MissingOracle(usize),

    #[error("malformed circuit: {0}")]
    Circuit(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// An I/O error that names the file it came from.
    pub(crate) fn io_at(path: &std::path::Path, e: std::io::Error) -> Self {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }
}
