//! Exact decimal I/O: parsing rationals from the command line and printing
//! certified enclosures without uncertified digits.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::highprec::Ball;

/// Parses `"a/b"`, an integer, or a decimal such as `"-0.125"` or `"2.5e-3"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| Error::invalid(format!("bad numerator in {s:?}")))?;
        let b: BigInt = b.trim().parse().map_err(|_| Error::invalid(format!("bad denominator in {s:?}")))?;
        if b.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        return Ok(BigRational::new(a, b));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::invalid(format!("not a number: {s:?}"));
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// `mid ± rad` in plain decimal notation; the printed interval contains the ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecimalEnclosure {
    pub mid: String,
    pub rad: String,
}

impl std::fmt::Display for DecimalEnclosure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ± {}", self.mid, self.rad)
    }
}

impl DecimalEnclosure {
    pub fn parse(mid: &str, rad: &str) -> Result<(BigRational, BigRational)> {
        Ok((parse_rational(mid)?, parse_rational(rad)?))
    }
}

/// Number of decimal places that resolves the radius to about two significant digits.
fn places_for(ball: &Ball) -> usize {
    let rad = ball.rad_scaled();
    if rad.is_zero() {
        // dyadic midpoint: prec places print it exactly
        return ball.prec() as usize;
    }
    let log10_2 = std::f64::consts::LOG10_2;
    let exp2 = rad.bits() as f64 - f64::from(ball.prec());
    ((-exp2 * log10_2).floor() + 2.0).max(0.0) as usize
}

pub fn enclose(ball: &Ball) -> DecimalEnclosure {
    let places = places_for(ball);
    let scale = BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    let mid = ball.midpoint();
    let scaled = &mid * &scale;
    let m = scaled.round();
    let err = (&scaled - &m).abs();
    let r = (ball.radius() * &scale + err).ceil();
    DecimalEnclosure {
        mid: format_fixed(&m.to_integer(), places),
        rad: format_fixed(&r.to_integer(), places),
    }
}

/// `value / 10^places` as a plain decimal with trailing zeros trimmed.
fn format_fixed(value: &BigInt, places: usize) -> String {
    let neg = value.is_negative();
    let digits = value.magnitude().to_str_radix(10);
    let digits = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int, frac) = digits.split_at(digits.len() - places);
    let frac = frac.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Exact decimal rendering of a rational with a terminating expansion, or `a/b` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        return r.to_integer().to_string();
    }
    let mut den = r.denom().magnitude().clone();
    let mut count = [0usize; 2];
    for (slot, p) in [2u32, 5].into_iter().enumerate() {
        while (&den % p).is_zero() {
            den /= p;
            count[slot] += 1;
        }
    }
    if !den.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let places = count[0].max(count[1]);
    let scaled = r * BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    format_fixed(&scaled.to_integer(), places)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses() {
        assert_eq!(parse_rational("1/3").unwrap(), r(1, 3));
        assert_eq!(parse_rational(" -2/4 ").unwrap(), r(-1, 2));
        assert_eq!(parse_rational("0.1234").unwrap(), r(1234, 10_000));
        assert_eq!(parse_rational("-.5").unwrap(), r(-1, 2));
        assert_eq!(parse_rational("2.5e-3").unwrap(), r(1, 400));
        assert_eq!(parse_rational("7").unwrap(), r(7, 1));
        assert_eq!(parse_rational("1e2").unwrap(), r(100, 1));
        for bad in ["", "1/0", "abc", "1.2.3", ".", "--1"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn enclosure_contains_ball() {
        let b = crate::highprec::root_ball(2, 2, 80).unwrap();
        let e = enclose(&b);
        let (m, rad) = DecimalEnclosure::parse(&e.mid, &e.rad).unwrap();
        assert!(m.clone() - &rad <= b.lower() && b.upper() <= m + rad);
        assert!(e.mid.starts_with("1.41421356237309504880"));
    }

    #[test]
    fn exact_balls() {
        let b = Ball::from_rational(&r(3, 8), 16);
        assert_eq!(enclose(&b), DecimalEnclosure { mid: "0.375".into(), rad: "0".into() });
        assert_eq!(enclose(&Ball::zero(64)).mid, "0");
    }

    #[test]
    fn rationals() {
        assert_eq!(format_rational(&r(-10791, 16)), "-674.4375");
        assert_eq!(format_rational(&r(1, 3)), "1/3");
        assert_eq!(format_rational(&r(7, 1)), "7");
        assert_eq!(format_rational(&r(3, 50)), "0.06");
    }
}
