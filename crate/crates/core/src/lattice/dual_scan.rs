use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::basis::ThetaVector;
use crate::error::{Error, Result};
use crate::highprec::{frac_dist, is_perfect_power, root_ball_big, Ball, EvalConfig};

/// Minimum of the dual quality over one decade of `h`.
#[derive(Clone, Debug, Serialize)]
pub struct DecadeMinimum {
    pub start: u64,
    pub end: u64,
    pub witness_h: u64,
    #[serde(skip)]
    pub quality: Ball,
    pub quality_f64: f64,
}

#[derive(Clone, Debug)]
pub struct DualScanReport {
    pub h_bound: u64,
    pub sigma: BigRational,
    /// Certified lower bound on `min_h h^sigma * max_i ||h theta_i||`.
    pub worst_quality: BigRational,
    pub worst_quality_ball: Ball,
    pub witness_h: u64,
    pub per_decade: Vec<DecadeMinimum>,
}

impl DualScanReport {
    pub fn worst_quality_f64(&self) -> f64 {
        self.worst_quality_ball.to_f64()
    }
}

struct FastTheta {
    hi: Vec<f64>,
    lo: Vec<f64>,
    sigma: f64,
}

impl FastTheta {
    fn new(theta: &ThetaVector, sigma: &BigRational) -> Self {
        let mut hi = Vec::new();
        let mut lo = Vec::new();
        for v in theta.values() {
            let h = v.to_f64();
            let rest = v.midpoint() - BigRational::from_float(h).expect("finite");
            hi.push(h);
            lo.push(rest.to_f64().unwrap_or(0.0));
        }
        FastTheta {
            hi,
            lo,
            sigma: sigma.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// `h^sigma * max_i ||h theta_i||` in floating point, using an fma split so
    /// that the fractional part keeps full absolute accuracy for large `h`.
    fn quality(&self, h: u64) -> f64 {
        let hf = h as f64;
        let mut worst = 0f64;
        for (&a, &b) in self.hi.iter().zip(&self.lo) {
            let r = hf * a;
            let e = hf.mul_add(a, -r);
            let t = (r - r.round()) + e + hf * b;
            let d = (t - t.round()).abs();
            worst = worst.max(d);
        }
        hf.powf(self.sigma) * worst
    }

    fn error_bound(&self, h: u64, q: f64) -> f64 {
        (h as f64).powf(self.sigma) * 1e-14 + q * 1e-12
    }
}

/// Ball enclosure of `h^sigma * max_i ||h theta_i||` at `prec` bits.
fn quality_ball(theta: &ThetaVector, h: u64, sigma: &BigRational, prec: u32) -> Result<Ball> {
    let hb = BigInt::from(h);
    let mut worst: Option<Ball> = None;
    for v in theta.values() {
        let d = frac_dist(&v.mul_int(&hb))?;
        worst = Some(match worst {
            None => d,
            Some(w) => w.max(&d),
        });
    }
    let a = sigma.numer().to_u32().ok_or_else(|| Error::invalid("sigma numerator too large"))?;
    let b = sigma.denom().to_u32().ok_or_else(|| Error::invalid("sigma denominator too large"))?;
    let power = BigUint::from(h).pow(a);
    let scale = if b == 1 {
        Ball::from_int(&BigInt::from(power), prec)
    } else {
        root_ball_big(&power, b, prec)?
    };
    Ok(&scale * &worst.expect("theta is nonempty"))
}

/// Certified minimum over `candidates` (ascending `h`), ties toward smaller `h`.
fn certified_min(
    theta: &ThetaVector,
    candidates: &[u64],
    sigma: &BigRational,
    cfg: &EvalConfig,
) -> Result<(u64, Ball)> {
    let mut prec = cfg.start_bits.max(96);
    loop {
        let th = theta.at_prec(prec + 16)?;
        let balls = candidates
            .iter()
            .map(|&h| quality_ball(&th, h, sigma, prec).map(|b| (h, b)))
            .collect::<Result<Vec<_>>>()?;
        let mut win = 0;
        for (i, (_, b)) in balls.iter().enumerate() {
            if b.midpoint() < balls[win].1.midpoint() {
                win = i;
            }
        }
        let (bh, bb) = balls[win].clone();
        let unresolved: Vec<u64> = balls
            .iter()
            .filter(|(h, b)| {
                *h != bh && !bb.definitely_lt(b) && !(*h > bh && bb.is_exact() && bb == *b)
            })
            .map(|(h, _)| *h)
            .collect();
        if unresolved.is_empty() {
            return Ok((bh, bb));
        }
        if prec.saturating_mul(2) > cfg.cap_bits {
            return Err(Error::Undecided {
                cap_bits: cfg.cap_bits,
                detail: format!("dual scan could not separate h = {bh} from {unresolved:?}"),
                last: Some(Box::new(bb)),
            });
        }
        prec *= 2;
    }
}

/// `[1, 10], [11, 100], [101, 1000], ...` truncated at `h_bound`.
fn decade_ranges(h_bound: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut start = 1u64;
    let mut end = 10u64;
    while start <= h_bound {
        out.push((start, end.min(h_bound)));
        start = end + 1;
        end = end.saturating_mul(10);
    }
    out
}

fn scan_range(fast: &FastTheta, start: u64, end: u64) -> Vec<u64> {
    let upper = (start..=end)
        .into_par_iter()
        .map(|h| {
            let q = fast.quality(h);
            q + fast.error_bound(h, q)
        })
        .reduce(|| f64::INFINITY, f64::min);
    let mut cands: Vec<u64> = (start..=end)
        .into_par_iter()
        .filter(|&h| {
            let q = fast.quality(h);
            q - fast.error_bound(h, q) <= upper
        })
        .collect();
    cands.sort_unstable();
    cands
}

/// Empirical dual lower-bound scan: `min_{1<=h<=H} h^sigma * max_i ||h theta_i||`,
/// also reported per decade of `h`.
pub fn dual_scan(
    theta: &ThetaVector,
    h_bound: u64,
    sigma: &BigRational,
    cfg: &EvalConfig,
) -> Result<DualScanReport> {
    if h_bound == 0 {
        return Err(Error::invalid("H must be >= 1"));
    }
    if sigma.is_negative() {
        return Err(Error::invalid("sigma must be nonnegative"));
    }
    if let Some(p) = theta.radicands().iter().find(|&&p| is_perfect_power(p, theta.degree())) {
        return Err(Error::invalid(format!(
            "theta entry {p}^(1/{}) is rational; the dual quality vanishes",
            theta.degree()
        )));
    }
    let fast = FastTheta::new(theta, sigma);
    let mut per_decade = Vec::new();
    for (start, end) in decade_ranges(h_bound) {
        let cands = scan_range(&fast, start, end);
        let (h, ball) = certified_min(theta, &cands, sigma, cfg)?;
        per_decade.push(DecadeMinimum {
            start,
            end,
            witness_h: h,
            quality_f64: ball.to_f64(),
            quality: ball,
        });
    }
    let winners: Vec<u64> = per_decade.iter().map(|d| d.witness_h).collect();
    let (witness_h, ball) = certified_min(theta, &winners, sigma, cfg)?;
    let worst_quality = ball.lower().max(BigRational::zero());
    Ok(DualScanReport {
        h_bound,
        sigma: sigma.clone(),
        worst_quality,
        worst_quality_ball: ball,
        witness_h,
        per_decade,
    })
}

/// Denominators of the continued-fraction convergents of `sqrt(n)` up to `limit`.
/// Independent oracle for witness checks.
pub fn sqrt_convergent_denominators(n: u64, limit: u64) -> Vec<u64> {
    let a0 = crate::highprec::integer_root(n, 2);
    if a0 * a0 == n {
        return vec![1];
    }
    // periodic expansion via (m, d, a) recurrence
    let (mut m, mut d, mut a) = (0u64, 1u64, a0);
    let (mut q_prev, mut q) = (0u64, 1u64);
    let mut out = vec![1];
    loop {
        m = d * a - m;
        d = (n - m * m) / d;
        a = (a0 + m) / d;
        let next = a * q + q_prev;
        if next > limit {
            return out;
        }
        q_prev = q;
        q = next;
        out.push(q);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn convergents_of_sqrt2() {
        assert_eq!(
            sqrt_convergent_denominators(2, 100),
            vec![1, 2, 5, 12, 29, 70]
        );
        assert_eq!(sqrt_convergent_denominators(3, 50), vec![1, 1, 3, 4, 11, 15, 41]);
    }

    #[test]
    fn single_h_is_max_fractional_distance() {
        let theta = ThetaVector::from_primes(2, &[2, 3], 128).unwrap();
        let r = dual_scan(&theta, 1, &rat(1, 2), &EvalConfig::default()).unwrap();
        assert_eq!(r.witness_h, 1);
        let expected = (2f64.sqrt() - 1.0).max(2.0 - 3f64.sqrt());
        assert!((r.worst_quality_f64() - expected).abs() < 1e-15);
    }

    #[test]
    fn sqrt2_floor_and_pell_witnesses() {
        let theta = ThetaVector::from_primes(2, &[2], 128).unwrap();
        let r = dual_scan(&theta, 10_000, &rat(1, 1), &EvalConfig::default()).unwrap();
        let conv = sqrt_convergent_denominators(2, 10_000);
        for d in &r.per_decade {
            assert!(conv.contains(&d.witness_h), "{}", d.witness_h);
        }
        // h = 2 gives 2 * (3 - 2 sqrt 2) = 6 - 4 sqrt 2
        assert_eq!(r.witness_h, 2);
        assert!((r.worst_quality_f64() - (6.0 - 4.0 * 2f64.sqrt())).abs() < 1e-14);
        let last = r.per_decade.last().unwrap();
        assert!((last.quality_f64 - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-6);
    }

    #[test]
    fn rejects_rational_theta() {
        let theta = ThetaVector::from_radicands(2, &[4], 128).unwrap();
        assert!(dual_scan(&theta, 10, &rat(1, 1), &EvalConfig::default()).is_err());
    }

    #[test]
    fn decades() {
        assert_eq!(decade_ranges(1), vec![(1, 1)]);
        assert_eq!(decade_ranges(250), vec![(1, 10), (11, 100), (101, 250)]);
    }
}
