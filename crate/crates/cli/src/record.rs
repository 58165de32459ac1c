use std::io::Write;

use serde::{Deserialize, Serialize};

use radsum_core::decimal::{enclose, format_rational};
use radsum_core::{Ball, ExponentFit};

pub const SCHEMA_VERSION: &str = "1";

/// One row of experiment output. Unused parameters are left empty.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub method: String,
    pub d: u32,
    pub k: Option<usize>,
    pub n: Option<u64>,
    pub m: Option<i64>,
    pub h: Option<u64>,
    pub beta: Option<String>,
    pub sigma: Option<String>,
    /// Certified value as decimal midpoint and radius.
    pub value_mid: Option<String>,
    pub value_rad: Option<String>,
    pub exact: Option<bool>,
    pub witness: Option<String>,
    pub max_radicand: Option<u64>,
    pub ratio: Option<f64>,
    pub error: Option<String>,
}

impl ExperimentRecord {
    pub fn new(method: &str, d: u32) -> Self {
        ExperimentRecord {
            method: method.to_string(),
            d,
            ..Default::default()
        }
    }

    pub fn set_value(&mut self, ball: &Ball) {
        let e = enclose(ball);
        self.value_mid = Some(e.mid);
        self.value_rad = Some(e.rad);
    }

    pub fn set_beta(&mut self, beta: &num_rational::BigRational) {
        self.beta = Some(format_rational(beta));
    }

    /// Midpoint as `f64`, for fitting and display.
    pub fn value_f64(&self) -> Option<f64> {
        self.value_mid.as_deref()?.parse().ok()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub x: String,
    pub slope: f64,
    pub slope_num: i64,
    pub slope_den: i64,
    pub intercept: f64,
    pub residual_norm: f64,
    pub points: Vec<(f64, f64)>,
}

impl FitSummary {
    pub fn new(x: &str, f: &ExponentFit) -> Self {
        FitSummary {
            x: x.to_string(),
            slope: f.slope,
            slope_num: f.slope_rational.0,
            slope_den: f.slope_rational.1,
            intercept: f.intercept,
            residual_norm: f.residual_norm,
            points: f.points.clone(),
        }
    }
}

/// The JSON document for a sweep. Timing lives in [`SweepMetadata`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub schema_version: String,
    pub name: String,
    pub method: String,
    pub records: Vec<ExperimentRecord>,
    pub fit: Option<FitSummary>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub schema_version: String,
    pub name: String,
    pub started_unix_ms: u128,
    pub workers: usize,
    pub wall_ms: Vec<f64>,
}

pub fn write_csv<W: Write>(out: W, records: &[ExperimentRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> csv::Result<Vec<ExperimentRecord>> {
    csv::Reader::from_reader(input).deserialize().collect()
}
