use thiserror::Error;

use crate::highprec::Ball;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The enclosure is too wide for the requested operation; re-evaluate
    /// at a higher working precision.
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),

    /// Adaptive refinement hit the precision cap without resolving the value.
    #[error("undecided at precision cap of {cap_bits} bits: {detail}")]
    Undecided {
        cap_bits: u32,
        detail: String,
        last: Option<Box<Ball>>,
    },

    #[error("infeasible parameters: {reason}")]
    Infeasible { reason: String, n_min: Option<u64> },

    #[error("budget exceeded: estimated {estimated} tuples, budget {budget}")]
    BudgetExceeded { estimated: u128, budget: u128 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
