use thiserror::Error;

/// Errors shared by every module of the workbench.
///
/// The CLI maps these onto its exit codes: `Input`/`Parse`/`Io` are exit 3,
/// `NoHost` is exit 2, `ResourceGuard` is exit 4.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input (signature mismatch, out-of-range
    /// element, invalid parameter).
    #[error("input error: {0}")]
    Input(String),

    /// The ambient structure admits no copy/embedding of the requested
    /// pattern, so the statement has no host. Distinct from a false verdict.
    #[error("no host: {0}")]
    NoHost(String),

    /// A search ran into one of the configured combinatorial guards.
    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn no_host(msg: impl Into<String>) -> Self {
        Error::NoHost(msg.into())
    }

    pub fn guard(msg: impl Into<String>) -> Self {
        Error::ResourceGuard(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
