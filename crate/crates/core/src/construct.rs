//! The explicit recipe turning an inhomogeneous approximation `q . theta ~ xi`
//! into radicands `b_i = p_i c_i^d` with `c_i = T + q_i`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::highprec::{
    certified_sum_dist, integer_root, Ball, CertifiedDistance, RadicandTuple, Target,
};
use crate::lattice::{default_scale_bits, solve_inhom, InhomOptions, ThetaVector};
use crate::primes::first_primes;

#[derive(Clone, Debug)]
pub struct ConstructionPlan {
    pub d: u32,
    pub k: usize,
    pub primes: Vec<u64>,
    pub p_max: u64,
    pub n_cap: u64,
    /// `floor(N^(1/d) / (4 P^(1/d)))`
    pub q: u64,
    /// `Q + 1`
    pub t: u64,
    pub beta: BigRational,
    /// `beta - T * sum_i theta_i`
    pub xi: Ball,
    pub prec: u32,
}

#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub plan: ConstructionPlan,
    pub q: Vec<i64>,
    pub c: Vec<u64>,
    pub tuple: RadicandTuple,
    pub distance: CertifiedDistance,
}

#[derive(Clone, Debug, Default)]
pub struct ConstructOptions {
    /// Distinct primes replacing the first `k` primes.
    pub primes: Option<Vec<u64>>,
    pub inhom: InhomOptions,
}

/// Smallest `N` with `floor(N^(1/d) / (4 P^(1/d))) >= 1`, i.e. `4^d * P`.
pub fn n_min(d: u32, p_max: u64) -> Option<u64> {
    4u64.checked_pow(d)?.checked_mul(p_max)
}

pub fn plan(d: u32, k: usize, n_cap: u64, beta: &BigRational) -> Result<ConstructionPlan> {
    plan_with_primes(d, &first_primes(k), n_cap, beta)
}

pub fn plan_with_primes(
    d: u32,
    primes: &[u64],
    n_cap: u64,
    beta: &BigRational,
) -> Result<ConstructionPlan> {
    if d < 2 {
        return Err(Error::invalid("degree must be >= 2"));
    }
    let k = primes.len();
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    let p_max = *primes.iter().max().expect("nonempty");
    let floor = n_min(d, p_max).ok_or_else(|| Error::invalid("4^d * P overflows"))?;
    // floor((N / (4^d P))^(1/d)) equals floor of the real quotient's root
    let q = integer_root(n_cap / floor, d);
    if q == 0 {
        return Err(Error::Infeasible {
            reason: format!("N = {n_cap} gives Q = 0; need N >= {floor}"),
            n_min: Some(floor),
        });
    }
    let top = (2 * q as u128 + 1).pow(d);
    if (p_max as u128).checked_mul(top).map_or(true, |v| v > n_cap as u128) {
        return Err(Error::Infeasible {
            reason: format!("P * (2Q + 1)^d exceeds N = {n_cap}"),
            n_min: Some(floor),
        });
    }
    let t = q + 1;
    let prec = default_scale_bits(q, k) + 64;
    let theta = ThetaVector::from_primes(d, primes, prec)?;
    let sum = theta
        .values()
        .iter()
        .fold(Ball::zero(prec), |acc, v| &acc + v);
    let xi = &Ball::from_rational(beta, prec) - &sum.mul_int(&BigInt::from(t));
    Ok(ConstructionPlan {
        d,
        k,
        primes: primes.to_vec(),
        p_max,
        n_cap,
        q,
        t,
        beta: beta.clone(),
        xi,
        prec,
    })
}

/// Runs the transference search for the plan and certifies the resulting sum.
pub fn construct(
    d: u32,
    k: usize,
    n_cap: u64,
    beta: &BigRational,
    opts: &ConstructOptions,
) -> Result<ConstructionResult> {
    let plan = match &opts.primes {
        Some(p) => {
            if p.len() != k {
                return Err(Error::LengthMismatch {
                    expected: k,
                    got: p.len(),
                });
            }
            plan_with_primes(d, p, n_cap, beta)?
        }
        None => plan(d, k, n_cap, beta)?,
    };
    construct_from_plan(plan, &opts.inhom)
}

pub fn construct_from_plan(plan: ConstructionPlan, inhom: &InhomOptions) -> Result<ConstructionResult> {
    let theta = ThetaVector::from_primes(plan.d, &plan.primes, plan.prec)?;
    let sol = solve_inhom(&theta, &Target::Ball(plan.xi.clone()), plan.q, inhom)?;
    let mut c = Vec::with_capacity(plan.k);
    let mut radicands = Vec::with_capacity(plan.k);
    for (&qi, &p) in sol.q.iter().zip(&plan.primes) {
        let ci = plan.t as i64 + qi;
        if ci < 1 || ci as u64 > 2 * plan.q + 1 {
            return Err(Error::invalid(format!("shifted coefficient {ci} outside [1, 2Q+1]")));
        }
        let ci = ci as u64;
        let b = ci
            .checked_pow(plan.d)
            .and_then(|v| v.checked_mul(p))
            .ok_or_else(|| Error::invalid("radicand overflows u64"))?;
        c.push(ci);
        radicands.push(b);
    }
    let tuple = RadicandTuple::with_bound(plan.d, radicands, plan.n_cap)?;
    let distance = certified_sum_dist(&tuple, &plan.beta, &inhom.eval)?;
    Ok(ConstructionResult {
        plan,
        q: sol.q,
        c,
        tuple,
        distance,
    })
}

impl ConstructionResult {
    /// `T * sum theta_i + sum q_i theta_i` at `prec` bits.
    pub fn identity_rhs(&self, prec: u32) -> Result<Ball> {
        let theta = ThetaVector::from_primes(self.plan.d, &self.plan.primes, prec)?;
        let t = BigInt::from(self.plan.t);
        let mut acc = Ball::zero(prec);
        for (v, &qi) in theta.values().iter().zip(&self.q) {
            acc = &acc + &v.mul_int(&(&t + BigInt::from(qi)));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::exhaustive_inhom_f64;
    use num_traits::{ToPrimitive, Zero};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn plan_examples() {
        let p = plan(2, 2, 1_000_000, &BigRational::zero()).unwrap();
        assert_eq!((p.primes.clone(), p.p_max, p.q, p.t), (vec![2, 3], 3, 144, 145));
        let p = plan(2, 1, 10_000, &BigRational::zero()).unwrap();
        assert_eq!((p.q, p.t), (17, 18));
        match plan(2, 1, 31, &BigRational::zero()) {
            Err(Error::Infeasible { n_min, .. }) => assert_eq!(n_min, Some(32)),
            other => panic!("{other:?}"),
        }
        assert!(plan(2, 1, 32, &BigRational::zero()).is_ok());
    }

    /// f64 scan over the construction family `c in [1, 2Q+1]^k`.
    fn family_optimum(d: u32, primes: &[u64], q: u64, beta: f64) -> f64 {
        let theta: Vec<f64> = primes.iter().map(|&p| (p as f64).powf(1.0 / d as f64)).collect();
        let t = (q + 1) as f64;
        let xi = beta - t * theta.iter().sum::<f64>();
        exhaustive_inhom_f64(&theta, xi, q as i64).1
    }

    #[test]
    fn k1_half_target() {
        let r = construct(2, 1, 10_000, &rat(1, 2), &ConstructOptions::default()).unwrap();
        assert_eq!(r.c, vec![35]);
        assert_eq!(r.tuple.radicands(), &[2450]);
        assert!((r.distance.to_f64() - 0.002_525).abs() < 1e-5, "{}", r.distance.to_f64());
    }

    #[test]
    fn k1_zero_target_matches_family() {
        let r = construct(2, 1, 10_000, &BigRational::zero(), &ConstructOptions::default()).unwrap();
        assert!(!r.distance.is_exact_integer_case);
        let best = family_optimum(2, &[2], 17, 0.0);
        assert!(r.distance.to_f64() <= 4.0 * best);
    }

    #[test]
    fn k2_decimal_target() {
        let beta = rat(1234, 10_000);
        let r = construct(2, 2, 1_000_000, &beta, &ConstructOptions::default()).unwrap();
        assert!(r.tuple.radicands().iter().all(|&b| b <= 250_563));
        let best = family_optimum(2, &[2, 3], 144, beta.to_f64().unwrap());
        assert!(r.distance.to_f64() <= 4.0 * best, "{} vs {best}", r.distance.to_f64());
        // sum b_i^(1/d) = T sum theta + sum q theta
        let lhs = r.tuple.sum_ball(200).unwrap();
        let rhs = r.identity_rhs(200).unwrap();
        assert!(lhs.overlaps(&rhs));
    }

    #[test]
    fn user_primes() {
        let opts = ConstructOptions {
            primes: Some(vec![5, 7]),
            ..Default::default()
        };
        let r = construct(2, 2, 100_000, &rat(1, 3), &opts).unwrap();
        assert_eq!(r.plan.primes, vec![5, 7]);
        let opts = ConstructOptions {
            primes: Some(vec![4, 7]),
            ..Default::default()
        };
        assert!(construct(2, 2, 100_000, &rat(1, 3), &opts).is_err());
    }
}
