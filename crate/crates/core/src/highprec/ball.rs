use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A dyadic midpoint-radius enclosure.
///
/// The represented set is `[(mid - rad) / 2^prec, (mid + rad) / 2^prec]`.
/// All arithmetic is containment-monotone: the output encloses every exact
/// result obtainable from points of the inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigUint,
    prec: u32,
}

impl Ball {
    pub fn new(mid: BigInt, rad: BigUint, prec: u32) -> Self {
        Ball { mid, rad, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Ball::new(BigInt::zero(), BigUint::zero(), prec)
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        Ball::new(n << prec, BigUint::zero(), prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Ball::from_int(&BigInt::from(n), prec)
    }

    /// Nearest dyadic at `prec`, radius one unit unless the rational is exact.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let num = r.numer() << prec;
        let den = r.denom();
        let (q, rem) = num.div_mod_floor(den);
        if rem.is_zero() {
            return Ball::new(q, BigUint::zero(), prec);
        }
        let q = if (&rem << 1u32) >= *den { q + 1 } else { q };
        Ball::new(q, BigUint::one(), prec)
    }

    /// Enclosure of `[lo, hi] / 2^prec`, returned at `prec + 1`.
    pub(crate) fn from_bounds(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        let mid = &lo + &hi;
        let rad = (hi - lo).into_parts().1;
        Ball::new(mid, rad, prec + 1)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid_scaled(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad_scaled(&self) -> &BigUint {
        &self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    fn denom(&self) -> BigInt {
        BigInt::one() << self.prec
    }

    pub fn midpoint(&self) -> BigRational {
        BigRational::new(self.mid.clone(), self.denom())
    }

    pub fn radius(&self) -> BigRational {
        BigRational::new(BigInt::from(self.rad.clone()), self.denom())
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo_scaled(), self.denom())
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi_scaled(), self.denom())
    }

    pub(crate) fn lo_scaled(&self) -> BigInt {
        &self.mid - BigInt::from(self.rad.clone())
    }

    pub(crate) fn hi_scaled(&self) -> BigInt {
        &self.mid + BigInt::from(self.rad.clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    pub fn radius_f64(&self) -> f64 {
        self.radius().to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        *x >= self.lower() && *x <= self.upper()
    }

    pub fn contains_ball(&self, other: &Ball) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.magnitude() <= &self.rad
    }

    /// `radius <= goal * |midpoint|`.
    pub fn meets_relative(&self, goal: &BigRational) -> bool {
        let lhs = BigInt::from(self.rad.clone()) * goal.denom();
        let rhs = goal.numer() * self.mid.abs();
        lhs <= rhs
    }

    /// Re-express at precision `prec`, widening the radius for any rounding.
    pub fn with_prec(&self, prec: u32) -> Ball {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = prec - self.prec;
                Ball::new(&self.mid << s, &self.rad << s, prec)
            }
            Ordering::Less => {
                let s = self.prec - prec;
                let unit = BigInt::one() << s;
                let q = (&self.mid + (&unit >> 1u32)).div_floor(&unit);
                let exact = (&q << s) == self.mid;
                let mut rad = (&self.rad + ((BigUint::one() << s) - 1u32)) >> s;
                if !exact {
                    rad += 1u32;
                }
                Ball::new(q, rad, prec)
            }
        }
    }

    fn aligned(a: &Ball, b: &Ball) -> (Ball, Ball) {
        let p = a.prec.max(b.prec);
        (a.with_prec(p), b.with_prec(p))
    }

    pub fn mul_int(&self, n: &BigInt) -> Ball {
        Ball::new(&self.mid * n, &self.rad * n.magnitude(), self.prec)
    }

    pub fn abs(&self) -> Ball {
        if self.mid.sign() == Sign::Minus {
            -self
        } else {
            self.clone()
        }
    }

    /// `true` when every point of `self` is strictly below every point of `other`.
    pub fn definitely_lt(&self, other: &Ball) -> bool {
        let (a, b) = Ball::aligned(self, other);
        a.hi_scaled() < b.lo_scaled()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        !self.definitely_lt(other) && !other.definitely_lt(self)
    }

    /// Interval maximum.
    pub fn max(&self, other: &Ball) -> Ball {
        let (a, b) = Ball::aligned(self, other);
        let lo = a.lo_scaled().max(b.lo_scaled());
        let hi = a.hi_scaled().max(b.hi_scaled());
        Ball::from_bounds(lo, hi, a.prec)
    }

    /// Interval minimum.
    pub fn min(&self, other: &Ball) -> Ball {
        let (a, b) = Ball::aligned(self, other);
        let lo = a.lo_scaled().min(b.lo_scaled());
        let hi = a.hi_scaled().min(b.hi_scaled());
        Ball::from_bounds(lo, hi, a.prec)
    }

    pub fn pow(&self, e: u32) -> Ball {
        let mut acc = Ball::from_i64(1, self.prec);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Enclosure of `{ ||y|| : y in self }`, the distance to the nearest integer.
    ///
    /// Requires radius < 1/4 so the set cannot contain both an integer and a
    /// half-integer; the result lies in `[0, 1/2]`.
    pub fn dist_to_nearest_int(&self) -> Result<Ball> {
        let p = self.prec;
        let one = BigInt::one() << p;
        if (BigInt::from(self.rad.clone()) << 2u32) >= one {
            return Err(Error::PrecisionInsufficient(format!(
                "ball radius {} is not below 1/4",
                self.radius_f64()
            )));
        }
        let lo = self.lo_scaled();
        let hi = self.hi_scaled();
        let dist = |y: &BigInt| {
            let r = y.mod_floor(&one);
            let s = &one - &r;
            r.min(s)
        };
        let half = BigInt::one() << p.saturating_sub(1);
        // Smallest integer multiple >= lo, and smallest half-odd point >= lo.
        let next_int = -((-&lo).div_floor(&one)) * &one;
        let next_half = -((-(&lo - &half)).div_floor(&one)) * &one + &half;
        let d_lo = dist(&lo);
        let d_hi = dist(&hi);
        let (min, max) = if next_int <= hi {
            (BigInt::zero(), d_lo.max(d_hi))
        } else if p > 0 && next_half <= hi {
            (d_lo.min(d_hi), half)
        } else {
            (d_lo.clone().min(d_hi.clone()), d_lo.max(d_hi))
        };
        Ok(Ball::from_bounds(min, max, p))
    }
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball::new(-&self.mid, self.rad.clone(), self.prec)
    }
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        -&self
    }
}

impl Add for &Ball {
    type Output = Ball;
    fn add(self, rhs: &Ball) -> Ball {
        let (a, b) = Ball::aligned(self, rhs);
        Ball::new(a.mid + b.mid, a.rad + b.rad, a.prec)
    }
}

impl Sub for &Ball {
    type Output = Ball;
    fn sub(self, rhs: &Ball) -> Ball {
        let (a, b) = Ball::aligned(self, rhs);
        Ball::new(a.mid - b.mid, a.rad + b.rad, a.prec)
    }
}

impl Mul for &Ball {
    type Output = Ball;
    fn mul(self, rhs: &Ball) -> Ball {
        let (a, b) = Ball::aligned(self, rhs);
        let p = a.prec;
        let mid = &a.mid * &b.mid;
        let rad = a.mid.magnitude() * &b.rad + b.mid.magnitude() * &a.rad + &a.rad * &b.rad;
        Ball::new(mid, rad, 2 * p).with_prec(p)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Ball {
            type Output = Ball;
            fn $m(self, rhs: Ball) -> Ball {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Ball> for Ball {
            type Output = Ball;
            fn $m(self, rhs: &Ball) -> Ball {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} +/- {:.2e}", self.to_f64(), self.radius_f64())
    }
}
