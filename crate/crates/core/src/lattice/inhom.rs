use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::babai::babai_nearest;
use super::basis::{build_primal_basis, ThetaVector};
use super::lll::{default_reduction_parameter, lll_reduce};
use crate::error::{Error, Result};
use crate::highprec::{frac_dist, kernel_decompose, Ball, CertifiedDistance, EvalConfig, Target};

/// Search knobs for [`solve_inhom`].
#[derive(Clone, Debug)]
pub struct InhomOptions {
    /// Coefficient perturbation radius around each Babai point.
    pub enum_radius: i64,
    /// Fixed-point scale; `None` picks `max(64, ceil(log2 Q) * (k + 2) + 32)`.
    pub scale_bits: Option<u32>,
    pub eval: EvalConfig,
}

impl Default for InhomOptions {
    fn default() -> Self {
        InhomOptions {
            enum_radius: 2,
            scale_bits: None,
            eval: EvalConfig::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct InhomSolution {
    pub q: Vec<i64>,
    pub distance: CertifiedDistance,
    pub candidates_examined: usize,
}

fn bit_length(x: u64) -> u32 {
    u64::BITS - x.leading_zeros()
}

pub fn default_scale_bits(q: u64, k: usize) -> u32 {
    let log_q = bit_length(q.saturating_sub(1)).max(1);
    (log_q * (k as u32 + 2) + 32).max(64)
}

/// Enclosure of `|| q . theta - xi ||` using the stored precision of `theta`.
fn distance_ball(theta: &ThetaVector, q: &[i64], xi: &Ball) -> Result<Ball> {
    frac_dist(&(&theta.dot(q) - xi))
}

/// Finds `q` with `|q|_inf <= Q` making `|| q . theta - xi ||` small.
///
/// Runs Babai's nearest plane on the LLL-reduced primal lattice for the box
/// `[-Q,Q]^k x [-delta,delta]` with `delta = 1/2, 1/4, ...`, enumerates
/// coefficient perturbations within `enum_radius` of each Babai point, and
/// returns the best feasible candidate. `q = 0` is always a candidate.
pub fn solve_inhom(
    theta: &ThetaVector,
    xi: &Target,
    q_bound: u64,
    opts: &InhomOptions,
) -> Result<InhomSolution> {
    if q_bound == 0 {
        return Err(Error::invalid("Q must be >= 1"));
    }
    if i64::try_from(q_bound).is_err() {
        return Err(Error::invalid("Q too large"));
    }
    let k = theta.len();
    let scale = opts.scale_bits.unwrap_or_else(|| default_scale_bits(q_bound, k));
    let work_prec = scale + 32;
    let theta_w = theta.at_prec(work_prec)?;
    let xi_ball = xi.ball(work_prec);
    let xi_mid = xi_ball.with_prec(scale);
    let xi_fixed = xi_mid.mid_scaled().clone();

    let mut candidates: BTreeSet<Vec<i64>> = BTreeSet::new();
    candidates.insert(vec![0; k]);

    let steps = k as u32 * bit_length(q_bound) + 8;
    let radius = opts.enum_radius.max(0);
    let param = default_reduction_parameter();
    let qb = q_bound as i64;
    for j in 1..=steps {
        let delta = BigRational::new(BigInt::one(), BigInt::one() << j);
        let lattice = build_primal_basis(&theta_w, q_bound, &delta, scale)?;
        let reduced = lll_reduce(&lattice, &param)?;
        let mut target = vec![BigInt::zero(); k + 1];
        target[k] = &lattice.row_multipliers[k] * &xi_fixed;
        let babai = babai_nearest(&reduced, &target)?;
        for offset in Offsets::new(k + 1, radius) {
            let coeffs: Vec<BigInt> = babai
                .coefficients
                .iter()
                .zip(&offset)
                .map(|(c, e)| c + BigInt::from(*e))
                .collect();
            let orig = reduced.original_coefficients(&coeffs);
            let q: Option<Vec<i64>> = orig[..k]
                .iter()
                .map(|c| c.to_i64().filter(|v| v.abs() <= qb))
                .collect();
            if let Some(q) = q {
                candidates.insert(q);
            }
        }
    }

    let examined = candidates.len();
    let mut best: Option<(Vec<i64>, Ball)> = None;
    for q in candidates {
        let d = distance_ball(&theta_w, &q, &xi_ball)?;
        let better = match &best {
            None => true,
            Some((bq, b)) => d.definitely_lt(b) || (d.overlaps(b) && tie_key(&q) < tie_key(bq)),
        };
        if better {
            best = Some((q, d));
        }
    }
    let (q, _) = best.expect("q = 0 is always a candidate");
    let distance = certify(theta, &q, xi, &opts.eval, work_prec)?;
    Ok(InhomSolution {
        q,
        distance,
        candidates_examined: examined,
    })
}

fn certify(
    theta: &ThetaVector,
    q: &[i64],
    xi: &Target,
    cfg: &EvalConfig,
    work_prec: u32,
) -> Result<CertifiedDistance> {
    match xi {
        Target::Rational(r) => {
            if let Some(exact) = rational_value(theta, q)? {
                let d = crate::highprec::rational_frac_dist(&(exact - r));
                if d.is_zero() {
                    return Ok(CertifiedDistance::exact_zero(xi.clone()));
                }
                return Ok(CertifiedDistance {
                    value: Ball::from_rational(&d, work_prec),
                    target: xi.clone(),
                    is_exact_integer_case: false,
                    achieved_precision: work_prec,
                });
            }
            let (value, prec) = cfg.refine(|p| {
                let th = theta.at_prec(p)?;
                distance_ball(&th, q, &Ball::from_rational(r, p + 8))
            })?;
            Ok(CertifiedDistance {
                value,
                target: xi.clone(),
                is_exact_integer_case: false,
                achieved_precision: prec,
            })
        }
        Target::Ball(b) => {
            let th = theta.at_prec(work_prec.max(b.prec()))?;
            let value = distance_ball(&th, q, b)?;
            Ok(CertifiedDistance {
                value,
                target: xi.clone(),
                is_exact_integer_case: false,
                achieved_precision: b.prec(),
            })
        }
    }
}

/// Among indistinguishable candidates prefer small magnitudes, then positive signs.
fn tie_key(q: &[i64]) -> Vec<(u64, bool)> {
    q.iter().map(|&c| (c.unsigned_abs(), c < 0)).collect()
}

/// `q . theta` as an exact integer when its irrational part cancels.
fn rational_value(theta: &ThetaVector, q: &[i64]) -> Result<Option<BigRational>> {
    let mut rational = BigInt::zero();
    let mut irrational: BTreeMap<u64, BigInt> = BTreeMap::new();
    for (&c, &b) in q.iter().zip(theta.radicands()) {
        if c == 0 {
            continue;
        }
        let (m, s) = kernel_decompose(b, theta.degree())?;
        let term = BigInt::from(c) * BigInt::from(m);
        if s == 1 {
            rational += term;
        } else {
            *irrational.entry(s).or_insert_with(BigInt::zero) += term;
        }
    }
    if irrational.values().all(|v| v.is_zero()) {
        Ok(Some(BigRational::from_integer(rational)))
    } else {
        Ok(None)
    }
}

/// Iterates `[-r, r]^n` in lexicographic order.
struct Offsets {
    current: Vec<i64>,
    radius: i64,
    done: bool,
}

impl Offsets {
    fn new(n: usize, radius: i64) -> Self {
        Offsets {
            current: vec![-radius; n],
            radius,
            done: false,
        }
    }
}

impl Iterator for Offsets {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut i = self.current.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.radius {
                self.current[i] += 1;
                break;
            }
            self.current[i] = -self.radius;
        }
        Some(out)
    }
}

/// Exhaustive minimum of `|| q . theta - xi ||` over `[-Q, Q]^k`, in `f64`.
/// Independent of the lattice path; used as a test oracle.
pub fn exhaustive_inhom_f64(theta: &[f64], xi: f64, q_bound: i64) -> (Vec<i64>, f64) {
    let k = theta.len();
    let mut q = vec![-q_bound; k];
    let mut best = (vec![0; k], f64::INFINITY);
    loop {
        let x: f64 = q.iter().zip(theta).map(|(&c, t)| c as f64 * t).sum::<f64>() - xi;
        let d = (x - x.round()).abs();
        if d < best.1 {
            best = (q.clone(), d);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if q[i] < q_bound {
                q[i] += 1;
                break;
            }
            q[i] = -q_bound;
        }
    }
}
