//! One function per method, shared by the subcommands and the sweep driver.

use num_rational::BigRational;

use radsum_core::decimal::{format_rational, parse_rational};
use radsum_core::lattice::ThetaVector;
use radsum_core::oracle::OracleConfig;
use radsum_core::taylor::{
    solve_cancellation, verify_order, CancellationSolution, ExpansionParams, VerifyOutcome,
};
use radsum_core::{construct, dual_scan, g_min, inhom_min, ConstructOptions, EvalConfig, Error, Result};

use crate::record::ExperimentRecord;

pub fn construct_record(
    d: u32,
    k: usize,
    n: u64,
    beta: &BigRational,
    primes: Option<Vec<u64>>,
    eval: &EvalConfig,
) -> Result<ExperimentRecord> {
    let mut opts = ConstructOptions {
        primes,
        ..Default::default()
    };
    opts.inhom.eval = eval.clone();
    let r = construct(d, k, n, beta, &opts)?;
    let mut rec = ExperimentRecord::new("construct", d);
    rec.k = Some(k);
    rec.n = Some(n);
    rec.set_beta(beta);
    rec.set_value(&r.distance.value);
    rec.exact = Some(r.distance.is_exact_integer_case);
    rec.witness = Some(r.tuple.to_string());
    rec.max_radicand = Some(r.tuple.max_radicand());
    Ok(rec)
}

pub fn oracle_record(
    d: u32,
    k: usize,
    n: u64,
    beta: Option<&BigRational>,
    cfg: &OracleConfig,
) -> Result<ExperimentRecord> {
    let (method, r) = match beta {
        None => ("oracle-g", g_min(k, d, n, cfg)?),
        Some(b) => ("oracle-inhom", inhom_min(k, d, n, b, cfg)?),
    };
    let mut rec = ExperimentRecord::new(method, d);
    rec.k = Some(k);
    rec.n = Some(n);
    if let Some(b) = beta {
        rec.set_beta(b);
    }
    rec.set_value(&r.minimum.value);
    rec.exact = Some(r.exact_hit);
    rec.witness = Some(r.witness.to_string());
    rec.max_radicand = Some(r.witness.max_radicand());
    Ok(rec)
}

pub fn dual_scan_record(
    d: u32,
    primes: &[u64],
    h: u64,
    sigma: &BigRational,
    eval: &EvalConfig,
) -> Result<ExperimentRecord> {
    let theta = ThetaVector::from_primes(d, primes, 128)?;
    let r = dual_scan(&theta, h, sigma, eval)?;
    let mut rec = ExperimentRecord::new("dual-scan", d);
    rec.k = Some(primes.len());
    rec.h = Some(h);
    rec.sigma = Some(format_rational(sigma));
    rec.set_value(&r.worst_quality_ball);
    rec.witness = Some(r.witness_h.to_string());
    Ok(rec)
}

/// Parses `"u,v;u,v;..."`.
pub fn parse_params(d: u32, s: &str) -> Result<Vec<ExpansionParams>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse_pair(d, p))
        .collect()
}

pub fn parse_pair(d: u32, p: &str) -> Result<ExpansionParams> {
    let (u, v) = p
        .split_once(',')
        .ok_or_else(|| Error::InvalidInput(format!("expected u,v but got {p:?}")))?;
    ExpansionParams::new(d, parse_rational(u)?, parse_rational(v)?)
}

/// The first positive solution for `params`.
pub fn taylor_solution(d: u32, params: &[ExpansionParams]) -> Result<CancellationSolution> {
    solve_cancellation(d, params)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::InvalidInput("parameters admit no positive cancellation".into()))
}

/// Verification needs a tighter relative goal than the default so the ratio is meaningful.
pub fn verify_eval(eval: &EvalConfig) -> EvalConfig {
    EvalConfig {
        accuracy_goal: eval.accuracy_goal.min(1e-6),
        ..eval.clone()
    }
}

pub fn taylor_verify_records(
    s: &CancellationSolution,
    m_values: &[i64],
    eval: &EvalConfig,
) -> Result<Vec<ExperimentRecord>> {
    let report = verify_order(s, m_values, &verify_eval(eval))?;
    Ok(report
        .entries
        .iter()
        .map(|e| {
            let mut rec = ExperimentRecord::new("taylor-verify", s.d);
            rec.k = Some(s.k());
            rec.m = Some(e.m);
            match &e.outcome {
                VerifyOutcome::Measured {
                    radicands,
                    distance,
                    ratio,
                    ..
                } => {
                    rec.set_value(&distance.value);
                    rec.exact = Some(false);
                    rec.witness = Some(join(radicands));
                    rec.max_radicand = radicands.iter().max().copied();
                    rec.ratio = Some(*ratio);
                }
                VerifyOutcome::ExactInteger { radicands } => {
                    rec.exact = Some(true);
                    rec.witness = Some(join(radicands));
                    rec.max_radicand = radicands.iter().max().copied();
                }
                VerifyOutcome::Rejected { reason } => rec.error = Some(reason.clone()),
            }
            rec
        })
        .collect())
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}
