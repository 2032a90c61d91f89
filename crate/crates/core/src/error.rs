use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// The CLI maps `Domain`, `NotIntegrable` and `IllConditioned` to exit code 2
/// and `NonConvergence` / `StrictCheck` to exit code 3.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BornError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("potential is not integrable: {0}")]
    NotIntegrable(String),

    #[error("ill-conditioned extrapolation: {0}")]
    IllConditioned(String),

    #[error("no convergence in {context}: {detail}")]
    NonConvergence { context: &'static str, detail: String },

    #[error("strict-mode check failed: {0}")]
    StrictCheck(String),
}

impl BornError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        BornError::Domain(msg.into())
    }

    pub(crate) fn no_convergence(context: &'static str, detail: impl Into<String>) -> Self {
        BornError::NonConvergence {
            context,
            detail: detail.into(),
        }
    }

    /// True for errors caused by invalid inputs rather than numerical failure.
    pub fn is_domain_like(&self) -> bool {
        matches!(
            self,
            BornError::Domain(_) | BornError::NotIntegrable(_) | BornError::IllConditioned(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, BornError>;
