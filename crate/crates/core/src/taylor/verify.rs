use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cancel::CancellationSolution;
use super::series::binomial;
use crate::error::{Error, Result};
use crate::highprec::{certified_sum_dist, is_sum_integer, CertifiedDistance, EvalConfig, RadicandTuple};

const MAX_MODULUS: u64 = 1 << 20;

#[derive(Clone, Debug)]
pub enum VerifyOutcome {
    Measured {
        radicands: Vec<u64>,
        distance: CertifiedDistance,
        /// `|lambda| M^(-(dk-1))`
        predicted: BigRational,
        ratio: f64,
    },
    /// Every radicand is a perfect power; the sum is an integer and carries no order information.
    ExactInteger { radicands: Vec<u64> },
    Rejected { reason: String },
}

#[derive(Clone, Debug)]
pub struct VerifyEntry {
    pub m: i64,
    pub outcome: VerifyOutcome,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub leading_order: i64,
    pub leading_coefficient: BigRational,
    /// `M` must lie in one of `residues` modulo `modulus` for integral radicands.
    pub modulus: u64,
    pub residues: Vec<u64>,
    pub entries: Vec<VerifyEntry>,
}

impl VerifyReport {
    /// `(M, max radicand, distance, ratio)` for measured entries.
    pub fn measured(&self) -> Vec<(i64, u64, f64, f64)> {
        self.entries
            .iter()
            .filter_map(|e| match &e.outcome {
                VerifyOutcome::Measured {
                    radicands,
                    distance,
                    ratio,
                    ..
                } => Some((e.m, *radicands.iter().max()?, distance.to_f64(), *ratio)),
                _ => None,
            })
            .collect()
    }
}

/// Coefficients of `A^d ((M + u)^d + v)` as a polynomial in `M`, lowest degree first.
fn radicand_poly(a: &BigInt, d: u32, u: &BigRational, v: &BigRational) -> Vec<BigRational> {
    let ad = BigRational::from_integer(num_traits::pow(a.clone(), d as usize));
    let mut c: Vec<BigRational> = (0..=d)
        .map(|j| {
            let b = binomial(&BigRational::from_integer(d.into()), u64::from(j));
            b * num_traits::pow(u.clone(), (d - j) as usize)
        })
        .collect();
    c[0] += v;
    c.iter().map(|x| x * &ad).collect()
}

fn eval_poly(c: &[BigRational], m: &BigRational) -> BigRational {
    c.iter().rev().fold(BigRational::zero(), |acc, x| acc * m + x)
}

fn polys(s: &CancellationSolution) -> Vec<Vec<BigRational>> {
    s.params
        .iter()
        .zip(&s.integer_weights)
        .map(|(p, a)| radicand_poly(a, s.d, &p.u, &p.v))
        .collect()
}

/// Residues of `M` modulo the common denominator for which every radicand is an integer.
pub fn admissible_residues(s: &CancellationSolution) -> Result<(u64, Vec<u64>)> {
    let ps = polys(s);
    let modulus = ps
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let modulus = modulus
        .to_u64()
        .filter(|&m| m <= MAX_MODULUS)
        .ok_or_else(|| Error::invalid(format!("denominator {modulus} too large")))?;
    let residues = (0..modulus)
        .filter(|&r| {
            let m = BigRational::from_integer(r.into());
            ps.iter().all(|p| eval_poly(p, &m).is_integer())
        })
        .collect();
    Ok((modulus, residues))
}

/// Measures `|| sum_i A_i ((M + u_i)^d + v_i)^(1/d) ||` against `|lambda| M^(-(dk-1))`.
pub fn verify_order(s: &CancellationSolution, m_values: &[i64], cfg: &EvalConfig) -> Result<VerifyReport> {
    if s.integer_weights.iter().any(|a| !a.is_positive()) {
        return Err(Error::invalid("verification needs positive weights"));
    }
    let (modulus, residues) = admissible_residues(s)?;
    let ps = polys(s);
    let lambda = s.leading_coefficient.abs();
    let entries = m_values
        .iter()
        .map(|&m| VerifyEntry {
            m,
            outcome: measure(s.d, &ps, m, modulus, &residues, &lambda, s.leading_order, cfg),
        })
        .collect();
    Ok(VerifyReport {
        leading_order: s.leading_order,
        leading_coefficient: s.leading_coefficient.clone(),
        modulus,
        residues,
        entries,
    })
}

#[allow(clippy::too_many_arguments)]
fn measure(
    d: u32,
    ps: &[Vec<BigRational>],
    m: i64,
    modulus: u64,
    residues: &[u64],
    lambda: &BigRational,
    order: i64,
    cfg: &EvalConfig,
) -> VerifyOutcome {
    let reject = |reason: String| VerifyOutcome::Rejected { reason };
    if m <= 0 {
        return reject(format!("M = {m} must be positive"));
    }
    if !residues.contains(&(m.rem_euclid(modulus as i64) as u64)) {
        return reject(format!("M = {m} gives non-integral radicands (mod {modulus})"));
    }
    let mr = BigRational::from_integer(m.into());
    let mut radicands = Vec::with_capacity(ps.len());
    for p in ps {
        let r = eval_poly(p, &mr);
        if !r.is_positive() {
            return reject(format!("M = {m} gives radicand {r} <= 0"));
        }
        match r.to_integer().to_u64() {
            Some(b) => radicands.push(b),
            None => return reject(format!("M = {m} gives radicand {r} beyond u64")),
        }
    }
    let tuple = match RadicandTuple::new(d, radicands.clone()) {
        Ok(t) => t,
        Err(e) => return reject(e.to_string()),
    };
    if is_sum_integer(&tuple) {
        return VerifyOutcome::ExactInteger { radicands };
    }
    let distance = match certified_sum_dist(&tuple, &BigRational::zero(), cfg) {
        Ok(v) => v,
        Err(e) => return reject(e.to_string()),
    };
    let predicted = lambda / num_traits::pow(mr, order as usize);
    let ratio = (distance.value.midpoint() / &predicted).to_f64().unwrap_or(f64::NAN);
    VerifyOutcome::Measured {
        radicands,
        distance,
        predicted,
        ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taylor::{solve_cancellation, ExpansionParams};

    fn solution(d: u32, p: &[(i64, i64)]) -> CancellationSolution {
        let params: Vec<_> = p.iter().map(|&(u, v)| ExpansionParams::integer(d, u, v).unwrap()).collect();
        solve_cancellation(d, &params).unwrap().remove(0)
    }

    fn tight() -> EvalConfig {
        EvalConfig {
            accuracy_goal: 1e-9,
            ..EvalConfig::default()
        }
    }

    #[test]
    fn two_terms_at_ten() {
        let s = solution(2, &[(0, -1), (0, 1)]);
        let r = verify_order(&s, &[10], &tight()).unwrap();
        match &r.entries[0].outcome {
            VerifyOutcome::Measured { radicands, distance, ratio, .. } => {
                assert_eq!(radicands, &vec![99, 101]);
                assert!((distance.to_f64() - 2.500_08e-4).abs() < 1e-9);
                assert!((ratio - 1.0).abs() < 1e-4);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn four_terms_at_hundred() {
        let s = solution(2, &[(1, 1), (-1, 1), (0, -2), (0, 9)]);
        let r = verify_order(&s, &[100], &tight()).unwrap();
        let (_, _, _, ratio) = r.measured()[0];
        assert!((ratio - 1.0).abs() < 1e-3, "{ratio}");
    }

    #[test]
    fn small_m_rejected_per_entry() {
        let s = solution(2, &[(1, 1), (-1, 1), (0, -3)]);
        let r = verify_order(&s, &[1, 50], &EvalConfig::default()).unwrap();
        assert!(matches!(r.entries[0].outcome, VerifyOutcome::Rejected { .. }));
        assert!(matches!(r.entries[1].outcome, VerifyOutcome::Measured { .. }));
    }

    #[test]
    fn perfect_power_family_is_flagged() {
        let s = CancellationSolution {
            d: 2,
            params: vec![ExpansionParams::integer(2, 0, 0).unwrap(), ExpansionParams::integer(2, 1, 0).unwrap()],
            weights: vec![BigRational::one(), BigRational::one()],
            integer_weights: vec![BigInt::one(), BigInt::one()],
            leading_order: 3,
            leading_coefficient: BigRational::zero(),
            linear_part: crate::taylor::LinearPart {
                slope: BigRational::from_integer(2.into()),
                constant: BigRational::one(),
            },
            positive: true,
        };
        let r = verify_order(&s, &[20], &EvalConfig::default()).unwrap();
        assert!(matches!(r.entries[0].outcome, VerifyOutcome::ExactInteger { .. }));
    }

    #[test]
    fn rational_shift_needs_progression() {
        let half = BigRational::new(1.into(), 2.into());
        let p = vec![
            ExpansionParams::new(2, half.clone(), BigRational::from_integer((-1).into())).unwrap(),
            ExpansionParams::new(2, half, BigRational::from_integer(1.into())).unwrap(),
        ];
        let s = solve_cancellation(2, &p).unwrap().remove(0);
        let (modulus, residues) = admissible_residues(&s).unwrap();
        // (M + 1/2)^2 +- 1 = M^2 + M + 1/4 +- 1 is never integral with weight 1
        assert_eq!(modulus, 4);
        assert!(residues.is_empty());
    }
}
