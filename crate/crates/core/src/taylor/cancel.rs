use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::nullspace::{nullspace, positive_representative, primitive};
use super::series::{combine, expand_radical, ExpansionParams, RationalSeries};
use crate::error::{Error, Result};

/// Integer-valued linear polynomial `slope * M + constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearPart {
    pub slope: BigRational,
    pub constant: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancellationSolution {
    pub d: u32,
    pub params: Vec<ExpansionParams>,
    pub weights: Vec<BigRational>,
    pub integer_weights: Vec<BigInt>,
    /// `dk - 1`: the combined series starts at `M^(-leading_order)`.
    pub leading_order: i64,
    /// Coefficient `lambda` of `M^(-leading_order)`.
    pub leading_coefficient: BigRational,
    pub linear_part: LinearPart,
    /// False only for results produced with signed weights allowed.
    pub positive: bool,
}

impl CancellationSolution {
    pub fn k(&self) -> usize {
        self.params.len()
    }

    /// Combined series through `M^(-leading_order)`.
    pub fn series(&self) -> Result<RationalSeries> {
        combined_series(&self.params, &self.weights, self.leading_order as u32)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CancellationOptions {
    /// Accept nullspace directions with mixed signs. Exploratory only.
    pub allow_signed: bool,
}

fn combined_series(
    params: &[ExpansionParams],
    weights: &[BigRational],
    order: u32,
) -> Result<RationalSeries> {
    let series = params
        .iter()
        .map(|p| expand_radical(p, order))
        .collect::<Result<Vec<_>>>()?;
    combine(weights, &series)
}

/// Rows `B_n(u_i, v_i)` for `n = d-1, ..., dk-2`, i.e. coefficients of `M^(-n)`.
pub fn cancellation_matrix(d: u32, params: &[ExpansionParams]) -> Result<Vec<Vec<BigRational>>> {
    let k = params.len() as u32;
    let top = d * k - 2;
    let series = params
        .iter()
        .map(|p| expand_radical(p, top.max(d - 1)))
        .collect::<Result<Vec<_>>>()?;
    Ok((d - 1..=top)
        .map(|n| series.iter().map(|s| s.coefficient(-(n as i64))).collect())
        .collect())
}

fn validate(d: u32, params: &[ExpansionParams]) -> Result<()> {
    if d < 2 {
        return Err(Error::invalid("degree must be >= 2"));
    }
    if params.len() < 2 {
        return Err(Error::invalid("k must be >= 2"));
    }
    if let Some(p) = params.iter().find(|p| p.d != d) {
        return Err(Error::invalid(format!("parameter {p} has degree {} != {d}", p.d)));
    }
    for (i, a) in params.iter().enumerate() {
        if params[i + 1..].contains(a) {
            return Err(Error::invalid(format!("parameter {a} repeated")));
        }
    }
    Ok(())
}

/// Weights making the coefficients of `M^(-n)`, `d-1 <= n <= dk-2`, vanish
/// while the coefficient of `M^(-(dk-1))` survives.
pub fn solve_cancellation(d: u32, params: &[ExpansionParams]) -> Result<Vec<CancellationSolution>> {
    solve_cancellation_with(d, params, CancellationOptions::default())
}

pub fn solve_cancellation_with(
    d: u32,
    params: &[ExpansionParams],
    opts: CancellationOptions,
) -> Result<Vec<CancellationSolution>> {
    validate(d, params)?;
    let k = params.len();
    let matrix = cancellation_matrix(d, params)?;
    let leading = (d * k as u32 - 1) as i64;
    let mut out = Vec::new();
    for dir in nullspace(&matrix, k) {
        let (ints, positive) = match positive_representative(&dir) {
            Some(v) => (v, true),
            None if opts.allow_signed => (canonical_sign(dir), false),
            None => continue,
        };
        let weights: Vec<BigRational> = ints.iter().cloned().map(BigRational::from_integer).collect();
        let series = combined_series(params, &weights, leading as u32)?;
        let lambda = series.coefficient(-leading);
        if lambda.is_zero() {
            continue;
        }
        out.push(CancellationSolution {
            d,
            params: params.to_vec(),
            integer_weights: primitive(&weights),
            weights,
            leading_order: leading,
            leading_coefficient: lambda,
            linear_part: LinearPart {
                slope: series.coefficient(1),
                constant: series.coefficient(0),
            },
            positive,
        });
    }
    out.sort_by(|a, b| a.integer_weights.cmp(&b.integer_weights));
    Ok(out)
}

fn canonical_sign(v: Vec<BigInt>) -> Vec<BigInt> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x < &BigInt::zero() => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}
