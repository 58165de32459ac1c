//! Command-line surface for `radsum`: single runs, TOML-described sweeps with
//! CSV/JSON output, and exponent fits.

pub mod record;
pub mod runs;
pub mod sweep;

pub use record::{ExperimentRecord, FitSummary, SweepDocument, SweepMetadata, SCHEMA_VERSION};
pub use sweep::{run_sweep, write_outputs, Method, SweepSpec};

/// Process exit code for an error chain.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<radsum_core::Error>() {
        Some(radsum_core::Error::Infeasible { .. }) => 2,
        Some(radsum_core::Error::Undecided { .. }) => 3,
        _ => 1,
    }
}

/// Sizes the global worker pool from `RADSUM_WORKERS` when set.
pub fn init_workers() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| anyhow::anyhow!("{WORKERS_ENV} must be a positive integer, got {v:?}"))?;
        anyhow::ensure!(n > 0, "{WORKERS_ENV} must be positive");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

pub const WORKERS_ENV: &str = "RADSUM_WORKERS";
