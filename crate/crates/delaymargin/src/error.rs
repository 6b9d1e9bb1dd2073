use thiserror::Error;

/// Errors produced by this crate.
///
/// The two variants separate "the question does not make sense for these
/// inputs" from "the question makes sense but the computation failed":
/// callers that map errors to process exit codes or retry policies only need
/// this distinction, while the payload string carries the specifics
/// (including, where known, the admissible parameter range).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iteration failed to converge, or the result is numerically
    /// unreliable (for example a root too close to an integration contour).
    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Convenience constructor for [`Error::Domain`].
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Convenience constructor for [`Error::Numerical`].
    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
