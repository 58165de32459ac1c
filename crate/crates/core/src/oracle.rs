//! Exhaustive minima over all radicand tuples `1 <= b_1 <= ... <= b_k <= N`.
//!
//! A floating-point pass keeps every tuple whose distance could be within a
//! safety margin of the best one; the survivors are then ranked with
//! certified balls, and tuples with identical irrational parts are treated as
//! exact ties.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::highprec::{
    certified_sum_dist, frac_dist, is_perfect_power, radical_form,
    rational_frac_dist, Ball, CertifiedDistance, EvalConfig, RadicandTuple,
};

/// Default refusal threshold on the number of tuples scanned.
pub const DEFAULT_BUDGET: u128 = 5_000_000_000;

const FILTER_RELATIVE: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub budget: u128,
    pub eval: EvalConfig,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            budget: DEFAULT_BUDGET,
            eval: EvalConfig::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub minimum: CertifiedDistance,
    pub witness: RadicandTuple,
    pub tuples_scanned: u64,
    /// Tuples skipped because their sum is an integer.
    pub exclusions: u64,
    /// The minimum is attained exactly (only possible for the inhomogeneous oracle).
    pub exact_hit: bool,
}

/// Number of nondecreasing `k`-tuples from `1..=n`, i.e. `C(n + k - 1, k)`.
pub fn tuple_count(k: usize, n: u64) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = match acc.checked_mul(u128::from(n) + i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Minimum nonzero `|| sum b_j^(1/d) ||`, excluding tuples whose sum is an integer.
pub fn g_min(k: usize, d: u32, n: u64, cfg: &OracleConfig) -> Result<OracleResult> {
    scan(k, d, n, &BigRational::zero(), true, cfg)
}

/// Minimum `|| sum b_j^(1/d) - beta ||` over all tuples.
pub fn inhom_min(k: usize, d: u32, n: u64, beta: &BigRational, cfg: &OracleConfig) -> Result<OracleResult> {
    scan(k, d, n, beta, false, cfg)
}

struct Table {
    roots: Vec<f64>,
    perfect: Vec<bool>,
}

#[derive(Default)]
struct Local {
    best: f64,
    cands: Vec<(Vec<u64>, f64)>,
    scanned: u64,
    excluded: u64,
    prune_at: usize,
}

impl Local {
    fn new() -> Self {
        Local {
            best: f64::INFINITY,
            prune_at: 64,
            ..Default::default()
        }
    }

    fn offer(&mut self, tuple: &[u64], dist: f64, slack: f64) {
        if dist > threshold(self.best, slack) {
            return;
        }
        if dist < self.best {
            self.best = dist;
        }
        self.cands.push((tuple.to_vec(), dist));
        if self.cands.len() >= self.prune_at {
            let t = threshold(self.best, slack);
            self.cands.retain(|(_, d)| *d <= t);
            self.prune_at = (2 * self.cands.len()).max(64);
        }
    }

    fn merge(mut self, other: Local, slack: f64) -> Local {
        self.best = self.best.min(other.best);
        self.scanned += other.scanned;
        self.excluded += other.excluded;
        self.cands.extend(other.cands);
        let t = threshold(self.best, slack);
        self.cands.retain(|(_, d)| *d <= t);
        self.prune_at = (2 * self.cands.len()).max(64);
        self
    }
}

fn threshold(best: f64, slack: f64) -> f64 {
    best * (1.0 + FILTER_RELATIVE) + slack
}

fn scan(
    k: usize,
    d: u32,
    n: u64,
    beta: &BigRational,
    exclude_integers: bool,
    cfg: &OracleConfig,
) -> Result<OracleResult> {
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    if d < 2 {
        return Err(Error::invalid("degree must be >= 2"));
    }
    if n == 0 {
        return Err(Error::invalid("N must be >= 1"));
    }
    let estimated = tuple_count(k, n);
    if estimated > cfg.budget {
        return Err(Error::BudgetExceeded {
            estimated,
            budget: cfg.budget,
        });
    }
    if exclude_integers && (1..=n).all(|b| is_perfect_power(b, d)) {
        return Err(Error::invalid(format!("every radicand <= {n} is a perfect power")));
    }
    let n_usize = usize::try_from(n).map_err(|_| Error::invalid("N too large"))?;
    let table = Table {
        roots: (0..=n).map(|b| (b as f64).powf(1.0 / f64::from(d))).collect(),
        perfect: (0..=n).map(|b| is_perfect_power(b, d)).collect(),
    };
    let beta_f = beta.to_f64().unwrap_or(0.0);
    let beta_frac = beta_f - beta_f.floor();
    // powf is within a few ulps; each term and the running sum add rounding error.
    let top = table.roots[n_usize] * k as f64 + beta_frac.abs() + 1.0;
    let slack = 2.0 * (8.0 * k as f64 * top * f64::EPSILON);

    let local = (1..=n)
        .into_par_iter()
        .fold(Local::new, |mut acc, b1| {
            scan_leading(&table, k, n, b1, beta_frac, exclude_integers, slack, &mut acc);
            acc
        })
        .reduce(Local::new, |a, b| a.merge(b, slack));

    let mut cands = local.cands;
    cands.sort_by(|a, b| a.0.cmp(&b.0));
    let witness = certified_winner(d, &cands, beta, &cfg.eval)?;
    let tuple = RadicandTuple::with_bound(d, witness, n)?;
    let minimum = certified_sum_dist(&tuple, beta, &cfg.eval)?;
    let exact_hit = minimum.is_exact_integer_case || minimum.value.is_exact() && minimum.value.midpoint().is_zero();
    Ok(OracleResult {
        minimum,
        witness: tuple,
        tuples_scanned: local.scanned,
        exclusions: local.excluded,
        exact_hit,
    })
}

#[allow(clippy::too_many_arguments)]
fn scan_leading(
    table: &Table,
    k: usize,
    n: u64,
    b1: u64,
    beta: f64,
    exclude_integers: bool,
    slack: f64,
    acc: &mut Local,
) {
    let mut tuple = vec![b1; k];
    let mut partial = vec![0f64; k + 1];
    let mut pp = vec![true; k + 1];
    // partial[i] and pp[i] describe tuple[..i]
    let set = |tuple: &[u64], partial: &mut [f64], pp: &mut [bool], from: usize| {
        for i in from..k {
            partial[i + 1] = partial[i] + table.roots[tuple[i] as usize];
            pp[i + 1] = pp[i] && table.perfect[tuple[i] as usize];
        }
    };
    set(&tuple, &mut partial, &mut pp, 0);
    loop {
        if exclude_integers && pp[k] {
            acc.excluded += 1;
        } else {
            acc.scanned += 1;
            let s = partial[k] - beta;
            let dist = (s - s.round()).abs();
            if dist <= threshold(acc.best, slack) {
                acc.offer(&tuple, dist, slack);
            }
        }
        // advance positions 1..k in nondecreasing order, leading entry fixed
        let mut i = k;
        loop {
            if i <= 1 {
                return;
            }
            i -= 1;
            if tuple[i] < n {
                tuple[i] += 1;
                let v = tuple[i];
                for t in tuple.iter_mut().skip(i + 1) {
                    *t = v;
                }
                set(&tuple, &mut partial, &mut pp, i);
                break;
            }
        }
    }
}

/// Certified `||S - beta||` at `prec` bits, exact when the sum is an integer.
fn distance_ball(t: &RadicandTuple, beta: &BigRational, prec: u32) -> Result<Ball> {
    let form = radical_form(t)?;
    if form.irrational.is_empty() {
        let exact = BigRational::from_integer(BigInt::from(form.rational)) - beta;
        return Ok(Ball::from_rational(&rational_frac_dist(&exact), prec));
    }
    frac_dist(&(&t.sum_ball(prec)? - &Ball::from_rational(beta, prec + 8)))
}

/// Lexicographically smallest tuple attaining the certified minimum among `cands`
/// (sorted lexicographically).
fn certified_winner(
    d: u32,
    cands: &[(Vec<u64>, f64)],
    beta: &BigRational,
    cfg: &EvalConfig,
) -> Result<Vec<u64>> {
    // tuples with the same irrational part differ by an integer: exact ties
    let mut groups: BTreeMap<Vec<(u64, u64)>, Vec<u64>> = BTreeMap::new();
    for (t, _) in cands {
        let tuple = RadicandTuple::new(d, t.clone())?;
        let key: Vec<(u64, u64)> = radical_form(&tuple)?.irrational.into_iter().collect();
        groups.entry(key).or_insert_with(|| t.clone());
    }
    let reps: Vec<RadicandTuple> = groups
        .into_values()
        .map(|t| RadicandTuple::new(d, t))
        .collect::<Result<_>>()?;
    if reps.len() == 1 {
        return Ok(reps[0].radicands().to_vec());
    }
    let mut prec = cfg.start_bits.max(64);
    loop {
        let balls = reps
            .iter()
            .map(|t| distance_ball(t, beta, prec))
            .collect::<Result<Vec<_>>>()?;
        let mut win = 0;
        for (i, b) in balls.iter().enumerate() {
            let (bm, wm) = (b.midpoint(), balls[win].midpoint());
            if bm < wm || (bm == wm && reps[i].radicands() < reps[win].radicands()) {
                win = i;
            }
        }
        let separated = balls
            .iter()
            .enumerate()
            .all(|(i, b)| i == win || balls[win].definitely_lt(b));
        if separated {
            return Ok(reps[win].radicands().to_vec());
        }
        if prec.saturating_mul(2) > cfg.cap_bits {
            return Err(Error::Undecided {
                cap_bits: cfg.cap_bits,
                detail: format!("oracle could not separate {} from the other candidates", reps[win]),
                last: Some(Box::new(balls[win].clone())),
            });
        }
        prec *= 2;
    }
}

/// Largest `N` whose `k`-tuple count fits `budget`.
pub fn max_n_within_budget(k: usize, budget: u128) -> u64 {
    let (mut lo, mut hi) = (0u64, 1u64 << 40);
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if tuple_count(k, mid) <= budget {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn counts() {
        assert_eq!(tuple_count(1, 50), 50);
        assert_eq!(tuple_count(2, 2), 3);
        assert_eq!(tuple_count(2, 100), 5050);
        assert_eq!(tuple_count(3, 3000), 4_504_501_000);
        assert_eq!(max_n_within_budget(2, 5050), 100);
    }

    #[test]
    fn single_root() {
        let r = g_min(1, 2, 3, &cfg()).unwrap();
        assert_eq!(r.witness.radicands(), &[3]);
        assert_eq!(r.exclusions, 1);
        assert_eq!(r.tuples_scanned, 2);
        assert!((r.minimum.to_f64() - (2.0 - 3f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn pair_of_twos() {
        let r = g_min(2, 2, 2, &cfg()).unwrap();
        assert_eq!(r.witness.radicands(), &[2, 2]);
        assert!((r.minimum.to_f64() - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn half_target() {
        let r = inhom_min(1, 2, 50, &rat(1, 2), &cfg()).unwrap();
        assert_eq!(r.witness.radicands(), &[42]);
        assert!((r.minimum.to_f64() - (42f64.sqrt() - 6.5).abs()).abs() < 1e-12);
    }

    #[test]
    fn zero_target_exact_hit() {
        let r = inhom_min(1, 2, 50, &BigRational::zero(), &cfg()).unwrap();
        assert!(r.exact_hit);
        assert_eq!(r.witness.radicands(), &[1]);
    }

    #[test]
    fn tie_goes_to_smallest_tuple() {
        // (1, 8) ties with (2, 2) and (1, 2) ties with (2, 4)
        let r = inhom_min(2, 2, 8, &rat(1, 3), &cfg()).unwrap();
        let brute = brute(2, 2, 8, 1.0 / 3.0);
        assert!((r.minimum.to_f64() - brute.1).abs() < 1e-12);
        let same: Vec<_> = all_tuples(2, 8)
            .into_iter()
            .filter(|t| (dist_f64(t, 2, 1.0 / 3.0) - brute.1).abs() < 1e-12)
            .collect();
        assert_eq!(r.witness.radicands(), same[0].as_slice());
    }

    #[test]
    fn budget_refusal() {
        let tight = OracleConfig {
            budget: 100,
            ..cfg()
        };
        match g_min(2, 2, 101, &tight) {
            Err(Error::BudgetExceeded { estimated, budget }) => {
                assert_eq!((estimated, budget), (5151, 100));
            }
            other => panic!("{other:?}"),
        }
    }

    fn all_tuples(k: usize, n: u64) -> Vec<Vec<u64>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for rest in all_tuples(k - 1, n) {
            let lo = rest.last().copied().unwrap_or(1);
            for b in lo..=n {
                let mut t = rest.clone();
                t.push(b);
                out.push(t);
            }
        }
        out
    }

    fn dist_f64(t: &[u64], d: u32, beta: f64) -> f64 {
        let s: f64 = t.iter().map(|&b| (b as f64).powf(1.0 / d as f64)).sum::<f64>() - beta;
        (s - s.round()).abs()
    }

    fn brute(k: usize, d: u32, n: u64, beta: f64) -> (Vec<u64>, f64) {
        all_tuples(k, n)
            .into_iter()
            .map(|t| {
                let v = dist_f64(&t, d, beta);
                (t, v)
            })
            .fold((vec![], f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
    }

    #[test]
    fn matches_brute_force() {
        for (k, n, beta) in [(2, 60, 0.25), (3, 20, 0.7), (2, 40, 0.0)] {
            let r = inhom_min(k, 2, n, &BigRational::from_float(beta).unwrap(), &cfg()).unwrap();
            let b = brute(k, 2, n, beta);
            assert!((r.minimum.to_f64() - b.1).abs() < 1e-12, "{k} {n} {beta}");
        }
    }

    #[test]
    fn g_pair_up_to_101() {
        let r = g_min(2, 2, 101, &cfg()).unwrap();
        assert!(r.minimum.to_f64() <= 2.5001e-4);
        assert!(r.minimum.to_f64() > 0.0);
    }
}
