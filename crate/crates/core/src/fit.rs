//! Least-squares power-law fits `distance ~ C * N^slope`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest denominator used for the rational slope.
pub const SLOPE_DENOMINATOR_LIMIT: i64 = 64;

#[derive(Clone, Debug, Serialize)]
pub struct ExponentFit {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    /// Closest fraction to `slope` with denominator at most [`SLOPE_DENOMINATOR_LIMIT`].
    pub slope_rational: (i64, i64),
    pub intercept: f64,
    /// Euclidean norm of the residuals in `ln(distance)`.
    pub residual_norm: f64,
}

impl ExponentFit {
    pub fn slope_fraction(&self) -> BigRational {
        BigRational::new(BigInt::from(self.slope_rational.0), BigInt::from(self.slope_rational.1))
    }
}

/// `(-k/d, -(k - 1/d))`: the exponents of the lattice construction and of the
/// Taylor-cancellation examples.
pub fn reference_exponents(k: u32, d: u32) -> (BigRational, BigRational) {
    let k = BigInt::from(k);
    let d = BigInt::from(d);
    (
        -BigRational::new(k.clone(), d.clone()),
        -BigRational::new(&k * &d - 1, d),
    )
}

/// Fits `ln(distance) = intercept + slope * ln(N)`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<ExponentFit> {
    if points.len() < 3 {
        return Err(Error::invalid(format!("need at least 3 points, got {}", points.len())));
    }
    for w in points.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(Error::invalid("N must be strictly increasing"));
        }
    }
    if let Some(p) = points.iter().find(|p| !(p.0 > 0.0) || !p.0.is_finite()) {
        return Err(Error::invalid(format!("N = {} is not positive", p.0)));
    }
    if let Some(p) = points.iter().find(|p| !(p.1 > 0.0) || !p.1.is_finite()) {
        return Err(Error::invalid(format!("distance {} at N = {} carries no exponent information", p.1, p.0)));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual_norm = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(ExponentFit {
        points: points.to_vec(),
        slope,
        slope_rational: best_fraction(slope, SLOPE_DENOMINATOR_LIMIT),
        intercept,
        residual_norm,
    })
}

/// Closest `p/q` to `x` with `1 <= q <= max_den`, via continued-fraction semiconvergents.
pub fn best_fraction(x: f64, max_den: i64) -> (i64, i64) {
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    loop {
        let a = r.floor();
        let ai = a as i64;
        let q2 = q0 + ai * q1;
        if q2 > max_den {
            let t = (max_den - q0) / q1;
            let (ps, qs) = (p0 + t * p1, q0 + t * q1);
            let e1 = (x - p1 as f64 / q1 as f64).abs();
            let es = (x - ps as f64 / qs as f64).abs();
            return if es < e1 { (ps, qs) } else { (p1, q1) };
        }
        let p2 = p0 + ai * p1;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a;
        if frac.abs() < 1e-12 {
            return (p1, q1);
        }
        r = 1.0 / frac;
    }
}
