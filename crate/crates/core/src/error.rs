use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The integrand or the sampled function left the f64 range.
    #[error("overflow at {point}")]
    Overflow { point: String },

    /// Resampling asked for nodes that lie outside the source grid.
    #[error("{count} requested node(s) outside the source grid, first at {first}")]
    OutOfDomain { count: usize, first: String },

    #[error("ball cover construction failed on sphere (k={k}, l={l}): {reason}")]
    Construction { k: usize, l: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Numerical failures (overflow, out-of-domain, failed construction)
    /// as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Overflow { .. } | Error::OutOfDomain { .. } | Error::Construction { .. }
        )
    }
}
