use std::path::PathBuf;

/// Errors produced by the layout library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument is outside the domain where the quantity is defined.
    #[error("{what} out of domain: {detail}")]
    Domain { what: &'static str, detail: String },

    /// A bracketing solver was handed an interval without a sign change.
    #[error("root of {what} not bracketed on [{lo}, {hi}] (f(lo) = {f_lo:e}, f(hi) = {f_hi:e})")]
    NoBracket {
        what: &'static str,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// An exact routine was asked to handle an instance beyond its cap.
    #[error("instance too large for {what}: {detail}")]
    TooLarge { what: &'static str, detail: String },

    /// A candidate solution violates one of the model constraints.
    #[error("invalid solution ({constraint}): {detail}")]
    InvalidStructure { constraint: &'static str, detail: String },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed {what}: {detail}")]
    Parse { what: &'static str, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn structure(constraint: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidStructure {
            constraint,
            detail: detail.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
