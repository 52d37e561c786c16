use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("sampling failed for {region}: {accepted} of {attempts} proposals accepted")]
    Sampling {
        region: String,
        attempts: u64,
        accepted: usize,
    },

    #[error("{what} did not converge (last {last}, previous {previous})")]
    Convergence {
        what: &'static str,
        last: f64,
        previous: f64,
    },

    #[error("degenerate jacobian at {0:?}")]
    DegeneratePoint(Vec<f64>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
