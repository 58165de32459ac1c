//! Certified evaluation of d-th roots, radical sums and distances to the
//! nearest integer.
//!
//! Every numeric value here is carried as a [`Ball`]. Integrality of a radical
//! sum is decided symbolically through d-th-power-free kernels and never
//! inferred from a numeric near-zero.

mod ball;
mod kernel;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub use ball::Ball;
pub use kernel::{integer_root, is_perfect_power, kernel_decompose};

/// Default relative accuracy for certified distances.
pub const DEFAULT_ACCURACY_GOAL: f64 = 1e-3;
pub const DEFAULT_START_BITS: u32 = 64;
pub const DEFAULT_PRECISION_CAP: u32 = 1 << 20;

/// Precision schedule for adaptive evaluation.
#[derive(Clone, Debug)]
pub struct EvalConfig {
    pub accuracy_goal: f64,
    pub start_bits: u32,
    pub cap_bits: u32,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            accuracy_goal: DEFAULT_ACCURACY_GOAL,
            start_bits: DEFAULT_START_BITS,
            cap_bits: DEFAULT_PRECISION_CAP,
        }
    }
}

impl EvalConfig {
    pub fn with_cap(cap_bits: u32) -> Self {
        EvalConfig {
            cap_bits,
            ..Default::default()
        }
    }

    fn goal(&self) -> Result<BigRational> {
        if !(self.accuracy_goal > 0.0 && self.accuracy_goal < 1.0) {
            return Err(Error::invalid("accuracy goal must lie in (0, 1)"));
        }
        Ok(BigRational::from_float(self.accuracy_goal).expect("finite goal"))
    }

    /// Doubles precision from `start_bits` until `eval` yields a strictly
    /// positive ball meeting the relative accuracy goal.
    pub fn refine<F>(&self, mut eval: F) -> Result<(Ball, u32)>
    where
        F: FnMut(u32) -> Result<Ball>,
    {
        let goal = self.goal()?;
        let mut prec = self.start_bits.max(16);
        let mut last = None;
        while prec <= self.cap_bits {
            match eval(prec) {
                Ok(b) => {
                    if !b.contains_zero() && b.meets_relative(&goal) {
                        return Ok((b, prec));
                    }
                    last = Some(b);
                }
                Err(Error::PrecisionInsufficient(_)) => {}
                Err(e) => return Err(e),
            }
            prec = prec.saturating_mul(2);
        }
        Err(Error::Undecided {
            cap_bits: self.cap_bits,
            detail: "value not resolved to the requested relative accuracy".into(),
            last: last.map(Box::new),
        })
    }
}

/// `k` radicands sharing a root degree, optionally capped by `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RadicandTuple {
    degree: u32,
    radicands: Vec<u64>,
    bound: Option<u64>,
}

impl RadicandTuple {
    pub fn new(degree: u32, radicands: Vec<u64>) -> Result<Self> {
        if degree < 2 {
            return Err(Error::invalid("degree must be >= 2"));
        }
        if radicands.is_empty() {
            return Err(Error::invalid("need at least one radicand"));
        }
        if radicands.contains(&0) {
            return Err(Error::invalid("radicands must be >= 1"));
        }
        Ok(RadicandTuple {
            degree,
            radicands,
            bound: None,
        })
    }

    pub fn with_bound(degree: u32, radicands: Vec<u64>, bound: u64) -> Result<Self> {
        let mut t = RadicandTuple::new(degree, radicands)?;
        if let Some(b) = t.radicands.iter().find(|&&b| b > bound) {
            return Err(Error::invalid(format!("radicand {b} exceeds bound {bound}")));
        }
        t.bound = Some(bound);
        Ok(t)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn radicands(&self) -> &[u64] {
        &self.radicands
    }

    pub fn bound(&self) -> Option<u64> {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.radicands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radicands.is_empty()
    }

    pub fn max_radicand(&self) -> u64 {
        self.radicands.iter().copied().max().unwrap_or(0)
    }

    /// Enclosure of `sum_j b_j^(1/d)` with absolute radius below `2^-prec`.
    pub fn sum_ball(&self, prec: u32) -> Result<Ball> {
        let guard = 4 + (usize::BITS - self.radicands.len().leading_zeros());
        let p = prec + guard;
        let mut acc = Ball::zero(p);
        for &b in &self.radicands {
            acc = &acc + &root_ball(b, self.degree, p)?;
        }
        Ok(acc)
    }
}

impl std::fmt::Display for RadicandTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.radicands.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// What a certified distance is measured against.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    Rational(BigRational),
    Ball(Ball),
}

impl Target {
    pub fn ball(&self, prec: u32) -> Ball {
        match self {
            Target::Rational(r) => Ball::from_rational(r, prec),
            Target::Ball(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Target::Rational(r) if r.is_zero())
    }
}

/// A certified enclosure of `|| x - target ||`.
#[derive(Clone, Debug)]
pub struct CertifiedDistance {
    pub value: Ball,
    pub target: Target,
    /// Set only when the distance is zero by symbolic proof.
    pub is_exact_integer_case: bool,
    pub achieved_precision: u32,
}

impl CertifiedDistance {
    pub fn exact_zero(target: Target) -> Self {
        CertifiedDistance {
            value: Ball::zero(0),
            target,
            is_exact_integer_case: true,
            achieved_precision: 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// Enclosure of `b^(1/d)` with radius at most `2^-prec`; exact for perfect powers.
pub fn root_ball(b: u64, d: u32, prec: u32) -> Result<Ball> {
    root_ball_big(&BigUint::from(b), d, prec)
}

pub fn root_ball_big(b: &BigUint, d: u32, prec: u32) -> Result<Ball> {
    if b.is_zero() {
        return Err(Error::invalid("radicand must be >= 1"));
    }
    if d < 2 {
        return Err(Error::invalid("degree must be >= 2"));
    }
    let scaled = b << (d as usize * prec as usize);
    let r = scaled.nth_root(d);
    let rad = if r.pow(d) == scaled {
        BigUint::zero()
    } else {
        BigUint::one()
    };
    // floor root r: the exact value lies in [r, r + 1), inside r +/- 1.
    Ok(Ball::new(BigInt::from(r), rad, prec))
}

/// `|| x ||` as an enclosure.
pub fn frac_dist(x: &Ball) -> Result<Ball> {
    x.dist_to_nearest_int()
}

/// Whether `sum_j b_j^(1/d)` is an integer.
///
/// With all coefficients positive, terms sharing a nontrivial kernel add up
/// instead of cancelling, and distinct kernels are linearly independent over
/// the rationals, so the sum is rational (hence integral) iff every kernel is 1.
pub fn is_sum_integer(t: &RadicandTuple) -> bool {
    t.radicands().iter().all(|&b| is_perfect_power(b, t.degree()))
}

/// Canonical form `rational + sum_s coeff_s * s^(1/d)` over d-th-power-free kernels `s > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalForm {
    pub rational: u64,
    pub irrational: BTreeMap<u64, u64>,
}

pub fn radical_form(t: &RadicandTuple) -> Result<RadicalForm> {
    let mut rational = 0u64;
    let mut irrational = BTreeMap::new();
    for &b in t.radicands() {
        let (m, s) = kernel_decompose(b, t.degree())?;
        if s == 1 {
            rational += m;
        } else {
            *irrational.entry(s).or_insert(0) += m;
        }
    }
    Ok(RadicalForm {
        rational,
        irrational,
    })
}

/// Certified `|| sum_j b_j^(1/d) - beta ||`.
pub fn certified_sum_dist(
    t: &RadicandTuple,
    beta: &BigRational,
    cfg: &EvalConfig,
) -> Result<CertifiedDistance> {
    if beta.is_integer() && is_sum_integer(t) {
        return Ok(CertifiedDistance::exact_zero(Target::Rational(beta.clone())));
    }
    let (value, prec) = cfg.refine(|prec| {
        let x = &t.sum_ball(prec)? - &Ball::from_rational(beta, prec + 8);
        frac_dist(&x)
    })?;
    Ok(CertifiedDistance {
        value,
        target: Target::Rational(beta.clone()),
        is_exact_integer_case: false,
        achieved_precision: prec,
    })
}

/// Exact `|| r ||` for a rational.
pub fn rational_frac_dist(r: &BigRational) -> BigRational {
    let f = r - r.floor();
    let g = BigRational::one() - &f;
    if f < g {
        f
    } else {
        g
    }
    .abs()
}
