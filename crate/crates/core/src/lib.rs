//! Sums of `k` d-th roots of integers modulo one.
//!
//! The crate evaluates radical sums with certified enclosures, searches for
//! sums close to a prescribed residue via lattice transference, derives exact
//! Taylor-cancellation identities, and provides brute-force oracles for
//! small parameters.

pub mod construct;
pub mod decimal;
pub mod error;
pub mod fit;
pub mod highprec;
pub mod lattice;
pub mod oracle;
pub mod primes;
pub mod taylor;

pub use construct::{construct, plan, ConstructOptions, ConstructionPlan, ConstructionResult};
pub use decimal::{enclose, parse_rational, DecimalEnclosure};
pub use error::{Error, Result};
pub use fit::{fit_exponent, reference_exponents, ExponentFit};
pub use highprec::{
    certified_sum_dist, frac_dist, is_sum_integer, kernel_decompose, root_ball, Ball,
    CertifiedDistance, EvalConfig, RadicandTuple, Target,
};
pub use lattice::{dual_scan, solve_inhom, DualScanReport, InhomOptions, ThetaVector};
pub use oracle::{g_min, inhom_min, OracleConfig, OracleResult};
pub use taylor::{
    combine, expand_radical, search_params, solve_cancellation, verify_order,
    CancellationSolution, ExpansionParams, RationalSeries,
};
