use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Floor of `b^(1/d)`.
pub fn integer_root(b: u64, d: u32) -> u64 {
    if d == 1 || b < 2 {
        return b;
    }
    BigUint::from(b)
        .nth_root(d)
        .to_u64()
        .expect("root of a u64 fits in u64")
}

pub fn is_perfect_power(b: u64, d: u32) -> bool {
    let r = integer_root(b, d);
    checked_pow(r, d) == Some(b)
}

pub(crate) fn checked_pow(base: u64, e: u32) -> Option<u64> {
    base.checked_pow(e)
}

/// Splits `b = m^d * s` with `s` free of d-th powers.
///
/// Trial division stops once `p^d` exceeds the unfactored remainder, since a
/// prime with multiplicity at least `d` must satisfy that bound.
pub fn kernel_decompose(b: u64, d: u32) -> Result<(u64, u64)> {
    if b == 0 {
        return Err(Error::invalid("radicand must be >= 1"));
    }
    if d < 2 {
        return Err(Error::invalid("degree must be >= 2"));
    }
    if is_perfect_power(b, d) {
        return Ok((integer_root(b, d), 1));
    }
    let mut rest = b;
    let mut m: u64 = 1;
    let mut s: u64 = 1;
    let mut p: u64 = 2;
    while let Some(pd) = checked_pow(p, d) {
        if pd > rest {
            break;
        }
        if rest % p == 0 {
            let mut e = 0u32;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            m *= p.pow(e / d);
            s *= p.pow(e % d);
            if is_perfect_power(rest, d) {
                m *= integer_root(rest, d);
                rest = 1;
                break;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Ok((m, s * rest))
}
