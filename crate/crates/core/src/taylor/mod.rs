//! Exact Laurent expansions of `((M + u)^d + v)^(1/d)` and the finite
//! cancellation system whose solutions give radical sums within
//! `O(M^(-(dk-1)))` of an integer.

mod cancel;
mod nullspace;
mod search;
mod series;
mod verify;

pub use cancel::{
    cancellation_matrix, solve_cancellation, solve_cancellation_with, CancellationOptions,
    CancellationSolution, LinearPart,
};
pub use nullspace::nullspace;
pub use search::{search_params, SearchLimits, SearchOutcome};
pub use series::{binomial, combine, expand_radical, ExpansionParams, RationalSeries};
pub use verify::{admissible_residues, verify_order, VerifyEntry, VerifyOutcome, VerifyReport};
