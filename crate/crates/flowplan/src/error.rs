//! Crate-wide error type.

/// Errors produced by planning, validation, and learning operations.
///
/// Infeasibility of an optimization problem is not an error: it is reported
/// through [`crate::optimizer::QpStatus`] and [`crate::engine::PlanStatus`].
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violated an operation's preconditions.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Vector or matrix dimensions do not agree.
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A geometric construction has no solution (e.g. a ray missing an
    /// ellipsoid boundary).
    #[error("geometry error: {0}")]
    Geometry(String),

    /// A numerical routine left its domain or failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Safety-constraint synthesis failed (e.g. degenerate covariance).
    #[error("constraint synthesis error: {0}")]
    Synthesis(String),

    /// Model training diverged.
    #[error("training failed at epoch {epoch}: {reason}")]
    Training { epoch: usize, reason: String },

    /// File or serialization failure.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(context: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch {
            context,
            expected,
            actual,
        });
    }
    Ok(())
}
