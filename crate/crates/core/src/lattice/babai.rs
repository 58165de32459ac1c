use num_bigint::BigInt;
use num_rational::BigRational;

use super::basis::IntegerLattice;
use super::lll::gram_schmidt;
use crate::error::{Error, Result};

/// A lattice vector with its coefficients in the current and construction bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePoint {
    pub point: Vec<BigInt>,
    pub coefficients: Vec<BigInt>,
    pub original_coefficients: Vec<BigInt>,
}

fn round_half_up(x: &BigRational) -> BigInt {
    (x + BigRational::new(1.into(), 2.into())).floor().to_integer()
}

/// Babai's nearest-plane rounding against the current basis of `lattice`,
/// which should be LLL-reduced for the `2^(n/2)` guarantee.
pub fn babai_nearest(lattice: &IntegerLattice, target: &[BigInt]) -> Result<LatticePoint> {
    let n = lattice.dim();
    if target.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: target.len(),
        });
    }
    let gs = gram_schmidt(&lattice.basis);
    let mut residual: Vec<BigRational> = target.iter().cloned().map(BigRational::from_integer).collect();
    let mut coefficients = vec![BigInt::from(0); n];
    for i in (0..n).rev() {
        let dot: BigRational = residual.iter().zip(&gs.orthogonal[i]).map(|(a, b)| a * b).sum();
        let c = round_half_up(&(dot / &gs.norms[i]));
        for (r, x) in residual.iter_mut().zip(&lattice.basis[i]) {
            *r -= BigRational::from_integer(&c * x);
        }
        coefficients[i] = c;
    }
    let point = lattice.combine(&coefficients);
    let original_coefficients = lattice.original_coefficients(&coefficients);
    Ok(LatticePoint {
        point,
        coefficients,
        original_coefficients,
    })
}
