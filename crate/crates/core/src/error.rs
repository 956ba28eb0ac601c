use thiserror::Error;

use crate::model::Violation;

#[derive(Debug, Error)]
pub enum SolveError {
    /// A size guard tripped; the caller should pick another solver.
    #[error("{solver}: instance needs {needed}, limit is {limit}")]
    TooLarge {
        solver: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("invalid instance: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),

    #[error("accumulated profit exceeds the safe 64-bit range")]
    Overflow,

    /// Internal inconsistency, e.g. backtracking could not reproduce a DP value.
    #[error("internal inconsistency: {0}")]
    Corrupt(String),
}

impl SolveError {
    pub fn is_guard(&self) -> bool {
        matches!(self, SolveError::TooLarge { .. })
    }
}

pub type Result<T> = std::result::Result<T, SolveError>;
