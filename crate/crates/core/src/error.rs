use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("oracle budget exceeded: {vertices} vertices > budget {budget}")]
    BudgetExceeded { vertices: usize, budget: usize },

    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
