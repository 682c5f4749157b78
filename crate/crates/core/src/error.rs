use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Argument outside the mathematical domain of a function.
    #[error("domain error in {function}: {detail}")]
    Domain { function: &'static str, detail: String },

    /// An infinite series did not reach its tolerance within the term budget.
    #[error("{function} did not converge after {terms} terms (partial value {partial})")]
    NonConvergence {
        function: &'static str,
        terms: usize,
        partial: f64,
    },

    #[error("numerical overflow in {0}")]
    Overflow(&'static str),

    /// A model parameter violates one of its invariants.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config error in {path}: {detail}")]
    Config { path: PathBuf, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }

    pub(crate) fn invalid(detail: impl Into<String>) -> Self {
        Error::InvalidParameter(detail.into())
    }
}
