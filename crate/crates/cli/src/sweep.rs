use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Deserialize;

use radsum_core::decimal::parse_rational;
use radsum_core::oracle::OracleConfig;
use radsum_core::{fit_exponent, EvalConfig};

use crate::record::{
    write_csv, ExperimentRecord, FitSummary, SweepDocument, SweepMetadata, SCHEMA_VERSION,
};
use crate::runs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Construct,
    OracleG,
    OracleInhom,
    DualScan,
    TaylorVerify,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Construct => "construct",
            Method::OracleG => "oracle-g",
            Method::OracleInhom => "oracle-inhom",
            Method::DualScan => "dual-scan",
            Method::TaylorVerify => "taylor-verify",
        }
    }
}

/// Sweep description, read from TOML.
///
/// ```toml
/// name = "construct-k2"
/// method = "construct"
/// d = 2
/// k = [2]
/// N = [10000, 100000, 1000000]
/// beta = ["1/3"]
/// fit = true
/// ```
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub name: String,
    pub method: Method,
    pub d: u32,
    #[serde(default)]
    pub k: Vec<usize>,
    #[serde(default, rename = "N")]
    pub n: Vec<u64>,
    #[serde(default)]
    pub beta: Vec<String>,
    #[serde(default)]
    pub primes: Vec<u64>,
    #[serde(default, rename = "H")]
    pub h: Vec<u64>,
    pub sigma: Option<String>,
    /// Taylor parameters as `"u,v"` strings.
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default, rename = "M")]
    pub m: Vec<i64>,
    #[serde(default)]
    pub fit: bool,
    pub precision_cap: Option<u32>,
    pub budget: Option<u64>,
}

impl SweepSpec {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> anyhow::Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

pub struct SweepRun {
    pub document: SweepDocument,
    pub metadata: SweepMetadata,
}

#[derive(Clone, Debug)]
enum Cell {
    Construct { k: usize, n: u64, beta: BigRational },
    Oracle { k: usize, n: u64, beta: Option<BigRational> },
    DualScan { h: u64 },
    TaylorVerify { m: i64 },
}

fn require<T>(v: &[T], field: &str) -> anyhow::Result<()> {
    anyhow::ensure!(!v.is_empty(), "sweep needs a nonempty `{field}` list");
    Ok(())
}

fn cells(spec: &SweepSpec) -> anyhow::Result<Vec<Cell>> {
    let betas = || -> anyhow::Result<Vec<BigRational>> {
        require(&spec.beta, "beta")?;
        Ok(spec.beta.iter().map(|b| parse_rational(b)).collect::<Result<_, _>>()?)
    };
    let mut out = Vec::new();
    match spec.method {
        Method::Construct | Method::OracleInhom => {
            require(&spec.k, "k")?;
            require(&spec.n, "N")?;
            let betas = betas()?;
            for &k in &spec.k {
                for &n in &spec.n {
                    for b in &betas {
                        out.push(if spec.method == Method::Construct {
                            Cell::Construct { k, n, beta: b.clone() }
                        } else {
                            Cell::Oracle { k, n, beta: Some(b.clone()) }
                        });
                    }
                }
            }
        }
        Method::OracleG => {
            require(&spec.k, "k")?;
            require(&spec.n, "N")?;
            for &k in &spec.k {
                for &n in &spec.n {
                    out.push(Cell::Oracle { k, n, beta: None });
                }
            }
        }
        Method::DualScan => {
            require(&spec.h, "H")?;
            require(&spec.primes, "primes")?;
            anyhow::ensure!(spec.sigma.is_some(), "dual-scan sweep needs `sigma`");
            out.extend(spec.h.iter().map(|&h| Cell::DualScan { h }));
        }
        Method::TaylorVerify => {
            require(&spec.m, "M")?;
            require(&spec.params, "params")?;
            out.extend(spec.m.iter().map(|&m| Cell::TaylorVerify { m }));
        }
    }
    Ok(out)
}

fn failed(method: Method, d: u32, cell: &Cell, err: String) -> ExperimentRecord {
    let mut rec = ExperimentRecord::new(method.tag(), d);
    match cell {
        Cell::Construct { k, n, beta } => {
            rec.k = Some(*k);
            rec.n = Some(*n);
            rec.set_beta(beta);
        }
        Cell::Oracle { k, n, beta } => {
            rec.k = Some(*k);
            rec.n = Some(*n);
            if let Some(b) = beta {
                rec.set_beta(b);
            }
        }
        Cell::DualScan { h } => rec.h = Some(*h),
        Cell::TaylorVerify { m } => rec.m = Some(*m),
    }
    rec.error = Some(err);
    rec
}

/// Runs every cell of the grid. Cells run in parallel; records come back in grid order.
/// Per-cell failures are recorded in the `error` column.
pub fn run_sweep(spec: &SweepSpec) -> anyhow::Result<SweepRun> {
    let started = SystemTime::now().duration_since(UNIX_EPOCH)?.as_millis();
    let mut eval = EvalConfig::default();
    if let Some(cap) = spec.precision_cap {
        eval.cap_bits = cap;
    }
    let mut oracle = OracleConfig {
        eval: eval.clone(),
        ..Default::default()
    };
    if let Some(b) = spec.budget {
        oracle.budget = u128::from(b);
    }
    let grid = cells(spec)?;
    let sigma = spec.sigma.as_deref().map(parse_rational).transpose()?;
    let solution = if spec.method == Method::TaylorVerify {
        let params = spec
            .params
            .iter()
            .map(|p| runs::parse_pair(spec.d, p))
            .collect::<Result<Vec<_>, _>>()?;
        Some(runs::taylor_solution(spec.d, &params))
    } else {
        None
    };

    let d = spec.d;
    let results: Vec<(ExperimentRecord, f64)> = grid
        .par_iter()
        .map(|cell| {
            let t = Instant::now();
            let rec = match cell {
                Cell::Construct { k, n, beta } => {
                    runs::construct_record(d, *k, *n, beta, None, &eval).map_err(|e| e.to_string())
                }
                Cell::Oracle { k, n, beta } => {
                    runs::oracle_record(d, *k, *n, beta.as_ref(), &oracle).map_err(|e| e.to_string())
                }
                Cell::DualScan { h } => runs::dual_scan_record(
                    d,
                    &spec.primes,
                    *h,
                    sigma.as_ref().expect("checked in cells"),
                    &eval,
                )
                .map_err(|e| e.to_string()),
                Cell::TaylorVerify { m } => match solution.as_ref().expect("taylor sweep") {
                    Ok(s) => runs::taylor_verify_records(s, &[*m], &eval)
                        .map(|mut v| v.remove(0))
                        .map_err(|e| e.to_string()),
                    Err(e) => Err(e.to_string()),
                },
            };
            let rec = rec.unwrap_or_else(|e| failed(spec.method, d, cell, e));
            (rec, t.elapsed().as_secs_f64() * 1e3)
        })
        .collect();
    let (records, wall_ms): (Vec<_>, Vec<_>) = results.into_iter().unzip();

    let fit = if spec.fit { fit_records(spec.method, &records) } else { None };
    Ok(SweepRun {
        document: SweepDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            name: spec.name.clone(),
            method: spec.method.tag().to_string(),
            records,
            fit,
        },
        metadata: SweepMetadata {
            schema_version: SCHEMA_VERSION.to_string(),
            name: spec.name.clone(),
            started_unix_ms: started,
            workers: rayon::current_num_threads(),
            wall_ms,
        },
    })
}

/// Name of the column used as the size parameter when fitting `method`'s output.
pub fn fit_axis(method: Method) -> &'static str {
    match method {
        Method::Construct | Method::OracleG | Method::OracleInhom => "n",
        Method::DualScan => "h",
        Method::TaylorVerify => "max_radicand",
    }
}

fn axis_value(rec: &ExperimentRecord, axis: &str) -> Option<f64> {
    match axis {
        "n" => rec.n.map(|v| v as f64),
        "h" => rec.h.map(|v| v as f64),
        "m" => rec.m.map(|v| v as f64),
        "max_radicand" => rec.max_radicand.map(|v| v as f64),
        _ => None,
    }
}

/// `(x, value)` points from successful records, sorted by `x`.
pub fn fit_points(records: &[ExperimentRecord], axis: &str) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.error.is_none())
        .filter_map(|r| Some((axis_value(r, axis)?, r.value_f64()?)))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts
}

fn fit_records(method: Method, records: &[ExperimentRecord]) -> Option<FitSummary> {
    let axis = fit_axis(method);
    let pts = fit_points(records, axis);
    fit_exponent(&pts).ok().map(|f| FitSummary::new(axis, &f))
}

/// Writes `<name>.csv`, `<name>.json` and `<name>.meta.json` into `dir`.
pub fn write_outputs(run: &SweepRun, dir: &Path) -> anyhow::Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let name = &run.document.name;
    let csv_path = dir.join(format!("{name}.csv"));
    let json_path = dir.join(format!("{name}.json"));
    let meta_path = dir.join(format!("{name}.meta.json"));
    write_csv(std::fs::File::create(&csv_path)?, &run.document.records)?;
    std::fs::write(&json_path, serde_json::to_string_pretty(&run.document)? + "\n")?;
    std::fs::write(&meta_path, serde_json::to_string_pretty(&run.metadata)? + "\n")?;
    Ok(vec![csv_path, json_path, meta_path])
}
