use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Parameters of one radical `((M + u)^d + v)^(1/d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpansionParams {
    pub d: u32,
    pub u: BigRational,
    pub v: BigRational,
}

impl ExpansionParams {
    pub fn new(d: u32, u: BigRational, v: BigRational) -> Result<Self> {
        if d < 2 {
            return Err(Error::invalid("degree must be >= 2"));
        }
        Ok(ExpansionParams { d, u, v })
    }

    pub fn integer(d: u32, u: i64, v: i64) -> Result<Self> {
        Self::new(d, BigRational::from_integer(u.into()), BigRational::from_integer(v.into()))
    }

    pub fn is_integral(&self) -> bool {
        self.u.is_integer() && self.v.is_integer()
    }
}

impl fmt::Display for ExpansionParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// Truncated Laurent series in `M`: `sum_n a_n M^n` for `truncation_order <= n <= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeries {
    coefficients: BTreeMap<i64, BigRational>,
    truncation_order: i64,
}

impl RationalSeries {
    pub fn zero(truncation_order: i64) -> Self {
        RationalSeries {
            coefficients: BTreeMap::new(),
            truncation_order,
        }
    }

    /// Minimum exponent retained; the remainder is `O(M^(truncation_order - 1))`.
    pub fn truncation_order(&self) -> i64 {
        self.truncation_order
    }

    pub fn coefficient(&self, exponent: i64) -> BigRational {
        self.coefficients
            .get(&exponent)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Nonzero coefficients, highest exponent first.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coefficients.iter().rev().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub(crate) fn add_term(&mut self, exponent: i64, c: BigRational) {
        if exponent < self.truncation_order || c.is_zero() {
            return;
        }
        let slot = self.coefficients.entry(exponent).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coefficients.remove(&exponent);
        }
    }

    /// Exact value of the truncated sum at `m`.
    pub fn evaluate(&self, m: &BigRational) -> Result<BigRational> {
        if m.is_zero() && self.coefficients.keys().any(|&e| e < 0) {
            return Err(Error::invalid("cannot evaluate negative powers at M = 0"));
        }
        let mut acc = BigRational::zero();
        for (&e, c) in &self.coefficients {
            acc += c * pow_rational(m, e);
        }
        Ok(acc)
    }

    /// Largest `|a_n|` over the retained coefficients.
    pub fn max_abs_coefficient(&self) -> BigRational {
        self.coefficients
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*M^{e}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(M^{})", self.truncation_order - 1)
    }
}

fn pow_rational(x: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// Generalized binomial coefficient `r choose n`.
pub fn binomial(r: &BigRational, n: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..n {
        acc *= r - BigRational::from_integer(i.into());
        acc /= BigRational::from_integer((i + 1).into());
    }
    acc
}

/// Expansion of `((M + u)^d + v)^(1/d)` in powers of `M`, keeping exponents `>= -order`.
pub fn expand_radical(p: &ExpansionParams, order: u32) -> Result<RationalSeries> {
    if p.d < 2 {
        return Err(Error::invalid("degree must be >= 2"));
    }
    if order < p.d - 1 {
        return Err(Error::invalid(format!("order must be >= d - 1 = {}", p.d - 1)));
    }
    let d = i64::from(p.d);
    let low = -i64::from(order);
    let mut out = RationalSeries::zero(low);
    out.add_term(1, BigRational::one());
    out.add_term(0, p.u.clone());
    let root = BigRational::new(BigInt::one(), BigInt::from(d));
    let mut n = 1u64;
    loop {
        let e = 1 - d * n as i64;
        if e < low {
            break;
        }
        let outer = binomial(&root, n) * num_traits::pow(p.v.clone(), n as usize);
        if !outer.is_zero() {
            let e_rat = BigRational::from_integer(e.into());
            let mut u_pow = BigRational::one();
            for j in 0..=(e - low) as u64 {
                out.add_term(e - j as i64, &outer * binomial(&e_rat, j) * &u_pow);
                u_pow *= &p.u;
            }
        }
        n += 1;
    }
    Ok(out)
}

/// Exact weighted sum; the result keeps the loosest truncation order.
pub fn combine(weights: &[BigRational], series: &[RationalSeries]) -> Result<RationalSeries> {
    if weights.len() != series.len() {
        return Err(Error::LengthMismatch {
            expected: weights.len(),
            got: series.len(),
        });
    }
    let order = series.iter().map(|s| s.truncation_order).max().unwrap_or(0);
    let mut out = RationalSeries::zero(order);
    for (w, s) in weights.iter().zip(series) {
        if w.is_zero() {
            continue;
        }
        for (&e, c) in &s.coefficients {
            out.add_term(e, w * c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| r(x, 1)).collect()
    }

    #[test]
    fn square_root_shift_free() {
        let s = expand_radical(&ExpansionParams::integer(2, 0, 3).unwrap(), 7).unwrap();
        assert_eq!(s.coefficient(1), r(1, 1));
        assert_eq!(s.coefficient(0), r(0, 1));
        assert_eq!(s.coefficient(-1), r(3, 2));
        assert_eq!(s.coefficient(-3), r(-9, 8));
        assert_eq!(s.coefficient(-5), r(27, 16));
        assert_eq!(s.coefficient(-7), r(-5 * 81, 128));
        for e in [-2, -4, -6] {
            assert!(s.coefficient(e).is_zero());
        }
        assert_eq!(s.truncation_order(), -7);
    }

    #[test]
    fn cube_root() {
        let s = expand_radical(&ExpansionParams::integer(3, 0, 1).unwrap(), 5).unwrap();
        let got: Vec<_> = s.terms().map(|(e, c)| (e, c.clone())).collect();
        assert_eq!(got, vec![(1, r(1, 1)), (-2, r(1, 3)), (-5, r(-1, 9))]);
    }

    #[test]
    fn symmetric_pair() {
        let a = expand_radical(&ExpansionParams::integer(2, 1, 1).unwrap(), 7).unwrap();
        let b = expand_radical(&ExpansionParams::integer(2, -1, 1).unwrap(), 7).unwrap();
        let s = combine(&ints(&[1, 1]), &[a, b]).unwrap();
        let got: Vec<_> = s.terms().map(|(e, c)| (e, c.clone())).collect();
        assert_eq!(
            got,
            vec![(1, r(2, 1)), (-1, r(1, 1)), (-3, r(3, 4)), (-5, r(-3, 8)), (-7, r(-61, 64))]
        );
    }

    #[test]
    fn order_below_degree_rejected() {
        assert!(expand_radical(&ExpansionParams::integer(3, 0, 1).unwrap(), 1).is_err());
        assert!(ExpansionParams::integer(1, 0, 1).is_err());
    }

    #[test]
    fn combine_checks_lengths_and_zero_weights() {
        let a = expand_radical(&ExpansionParams::integer(2, 1, 1).unwrap(), 5).unwrap();
        assert!(combine(&ints(&[1, 1]), &[a.clone()]).is_err());
        assert!(combine(&ints(&[0]), &[a.clone()]).unwrap().is_zero());
        let b = expand_radical(&ExpansionParams::integer(2, 1, 1).unwrap(), 3).unwrap();
        assert_eq!(combine(&ints(&[1, 1]), &[a, b]).unwrap().truncation_order(), -3);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(&r(1, 2), 2), r(-1, 8));
        assert_eq!(binomial(&r(-3, 1), 2), r(6, 1));
        assert_eq!(binomial(&r(5, 1), 0), r(1, 1));
    }
}
