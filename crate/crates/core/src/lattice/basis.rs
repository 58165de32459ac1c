use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::highprec::{root_ball, Ball};
use crate::primes::is_prime;

/// The vector `theta_i = p_i^(1/d)` together with enclosures of its entries.
#[derive(Clone, Debug)]
pub struct ThetaVector {
    degree: u32,
    radicands: Vec<u64>,
    values: Vec<Ball>,
    prec: u32,
}

impl ThetaVector {
    /// `theta_i = p_i^(1/d)` for pairwise distinct primes.
    pub fn from_primes(degree: u32, primes: &[u64], prec: u32) -> Result<Self> {
        if let Some(p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        ThetaVector::from_radicands(degree, primes, prec)
    }

    /// Like [`ThetaVector::from_primes`] without the primality check, for
    /// degenerate and experimental inputs.
    pub fn from_radicands(degree: u32, radicands: &[u64], prec: u32) -> Result<Self> {
        if radicands.is_empty() {
            return Err(Error::invalid("theta needs at least one entry"));
        }
        let mut sorted = radicands.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != radicands.len() {
            return Err(Error::invalid("theta radicands must be pairwise distinct"));
        }
        let values = radicands
            .iter()
            .map(|&p| root_ball(p, degree, prec))
            .collect::<Result<Vec<_>>>()?;
        Ok(ThetaVector {
            degree,
            radicands: radicands.to_vec(),
            values,
            prec,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn radicands(&self) -> &[u64] {
        &self.radicands
    }

    pub fn values(&self) -> &[Ball] {
        &self.values
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn len(&self) -> usize {
        self.radicands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radicands.is_empty()
    }

    /// Same vector re-evaluated at another precision.
    pub fn at_prec(&self, prec: u32) -> Result<Self> {
        ThetaVector::from_radicands(self.degree, &self.radicands, prec)
    }

    /// Enclosure of `q . theta`.
    pub fn dot(&self, q: &[i64]) -> Ball {
        let mut acc = Ball::zero(self.prec);
        for (c, v) in q.iter().zip(&self.values) {
            acc = &acc + &v.mul_int(&BigInt::from(*c));
        }
        acc
    }

    /// `round(2^scale_bits * theta_i)` for each coordinate, with the rounding
    /// error bound in units of `2^-scale_bits`.
    pub(crate) fn fixed_point(&self, scale_bits: u32) -> Result<(Vec<BigInt>, Vec<BigRational>)> {
        if self.prec < scale_bits + 16 {
            return Err(Error::PrecisionInsufficient(format!(
                "theta held at {} bits, need {} for scale {scale_bits}",
                self.prec,
                scale_bits + 16
            )));
        }
        let shift = self.prec - scale_bits;
        let unit = BigInt::one() << shift;
        let mut rounded = Vec::with_capacity(self.len());
        let mut slack = Vec::with_capacity(self.len());
        for v in &self.values {
            let r = (v.mid_scaled() + (&unit >> 1u32)).div_floor(&unit);
            let err = (v.mid_scaled() - (&r << shift)).abs() + BigInt::from(v.rad_scaled().clone());
            let err = BigRational::new(err, unit.clone());
            debug_assert!(err <= BigRational::one());
            rounded.push(r);
            slack.push(err);
        }
        Ok((rounded, slack))
    }
}

/// Which side of the transference pair a lattice encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeKind {
    Generic,
    Primal,
    Dual,
}

/// A full-rank integer lattice given by basis columns.
///
/// For transference lattices the integer coordinates are the real lattice
/// coordinates scaled by `2^scale_bits` and by `row_multipliers`, which carry
/// the box normalization `(Q, .., Q, delta)`.
#[derive(Clone, Debug)]
pub struct IntegerLattice {
    pub kind: LatticeKind,
    pub basis: Vec<Vec<BigInt>>,
    pub scale_bits: u32,
    pub box_weights: Vec<BigRational>,
    pub row_multipliers: Vec<BigInt>,
    /// Columns of the change of basis from the lattice as constructed.
    pub transform: Vec<Vec<BigInt>>,
    /// Per-coordinate bound on `|2^scale_bits * theta_i - round(..)|`.
    pub rounding_slack: Vec<BigRational>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|j| {
            (0..n)
                .map(|i| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

impl IntegerLattice {
    pub fn from_columns(columns: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = columns.len();
        if n == 0 || columns.iter().any(|c| c.len() != n) {
            return Err(Error::invalid("basis must be a nonempty square matrix"));
        }
        let lat = IntegerLattice {
            kind: LatticeKind::Generic,
            basis: columns,
            scale_bits: 0,
            box_weights: vec![BigRational::one(); n],
            row_multipliers: vec![BigInt::one(); n],
            transform: identity(n),
            rounding_slack: Vec::new(),
        };
        if lat.determinant().is_zero() {
            return Err(Error::invalid("basis is singular"));
        }
        Ok(lat)
    }

    pub fn from_i64_columns(columns: &[Vec<i64>]) -> Result<Self> {
        IntegerLattice::from_columns(
            columns
                .iter()
                .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn column(&self, j: usize) -> &[BigInt] {
        &self.basis[j]
    }

    /// Row `i` of the basis matrix.
    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.basis.iter().map(|c| c[i].clone()).collect()
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.basis)
    }

    /// `sum_j coeffs[j] * column_j`.
    pub fn combine(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.dim()];
        for (c, col) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(col) {
                *o += c * x;
            }
        }
        out
    }

    /// Coefficients, with respect to the construction basis, of the vector
    /// with coefficients `coeffs` in the current basis.
    pub fn original_coefficients(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.dim()];
        for (c, col) in coeffs.iter().zip(&self.transform) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(col) {
                *o += c * x;
            }
        }
        out
    }
}

/// Determinant by fraction-free (Bareiss) elimination on columns.
pub fn determinant(columns: &[Vec<BigInt>]) -> BigInt {
    let n = columns.len();
    // a[i][j] = row i, column j
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| columns[j][i].clone()).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Box `[-Q, Q]^k x [-delta, delta]` with `delta = a / b` in lowest terms.
fn box_parts(q: u64, delta: &BigRational) -> Result<(BigInt, BigInt, BigInt)> {
    if q == 0 {
        return Err(Error::invalid("Q must be >= 1"));
    }
    if !delta.is_positive() {
        return Err(Error::invalid("delta must be positive"));
    }
    Ok((BigInt::from(q), delta.numer().clone(), delta.denom().clone()))
}

fn check_scale(scale_bits: u32) -> Result<()> {
    if scale_bits == 0 {
        return Err(Error::invalid("scale_bits must be positive"));
    }
    Ok(())
}

/// Integer basis of the primal lattice `{(q, q.theta - p)}` normalized by the
/// box `[-Q,Q]^k x [-delta,delta]`.
///
/// Columns are `v_1..v_k` (one per `q_i`) followed by `v_0` (the `p`
/// direction). Multiplying the normalized coordinates `(q_i / Q, y / delta)`
/// through by `Q * a * 2^scale_bits` gives rows scaled by `a` and `Q * b`.
pub fn build_primal_basis(
    theta: &ThetaVector,
    q: u64,
    delta: &BigRational,
    scale_bits: u32,
) -> Result<IntegerLattice> {
    check_scale(scale_bits)?;
    let (qq, a, b) = box_parts(q, delta)?;
    let (rounded, slack) = theta.fixed_point(scale_bits)?;
    let k = theta.len();
    let n = k + 1;
    let unit = BigInt::one() << scale_bits;
    let last_mult = &qq * &b;
    let mut basis = Vec::with_capacity(n);
    for (i, r) in rounded.iter().enumerate() {
        let mut col = vec![BigInt::zero(); n];
        col[i] = &a * &unit;
        col[k] = &last_mult * r;
        basis.push(col);
    }
    let mut v0 = vec![BigInt::zero(); n];
    v0[k] = &last_mult * &unit;
    basis.push(v0);

    let mut row_multipliers = vec![a.clone(); k];
    row_multipliers.push(last_mult);
    let mut box_weights = vec![BigRational::from_integer(qq); k];
    box_weights.push(delta.clone());
    Ok(IntegerLattice {
        kind: LatticeKind::Primal,
        basis,
        scale_bits,
        box_weights,
        row_multipliers,
        transform: identity(n),
        rounding_slack: slack,
    })
}

/// Integer basis of the dual lattice `{(m - h theta, h)}` normalized by the
/// polar weights `(Q, .., Q, delta)`.
///
/// Columns are `w_1..w_k` (one per `m_i`) followed by `w_h`. Rows are scaled
/// by `Q * b` and `a` so that primal/dual pairings are exact multiples of
/// `a * Q * b * 4^scale_bits`.
pub fn build_dual_basis(
    theta: &ThetaVector,
    q: u64,
    delta: &BigRational,
    scale_bits: u32,
) -> Result<IntegerLattice> {
    check_scale(scale_bits)?;
    let (qq, a, b) = box_parts(q, delta)?;
    let (rounded, slack) = theta.fixed_point(scale_bits)?;
    let k = theta.len();
    let n = k + 1;
    let unit = BigInt::one() << scale_bits;
    let head_mult = &qq * &b;
    let mut basis = Vec::with_capacity(n);
    for i in 0..k {
        let mut col = vec![BigInt::zero(); n];
        col[i] = &head_mult * &unit;
        basis.push(col);
    }
    let mut wh: Vec<BigInt> = rounded.iter().map(|r| -(&head_mult * r)).collect();
    wh.push(&a * &unit);
    basis.push(wh);

    let mut row_multipliers = vec![head_mult; k];
    row_multipliers.push(a);
    let mut box_weights = vec![BigRational::from_integer(qq); k];
    box_weights.push(delta.clone());
    Ok(IntegerLattice {
        kind: LatticeKind::Dual,
        basis,
        scale_bits,
        box_weights,
        row_multipliers,
        transform: identity(n),
        rounding_slack: slack,
    })
}

/// Modulus that every primal/dual inner product is a multiple of, up to the
/// fixed-point slack.
pub fn pairing_modulus(primal: &IntegerLattice, dual: &IntegerLattice) -> BigInt {
    let n = primal.dim();
    (&primal.row_multipliers[n - 1] * &dual.row_multipliers[n - 1])
        << (primal.scale_bits + dual.scale_bits)
}

pub fn inner_product(x: &[BigInt], y: &[BigInt]) -> BigInt {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Signed residue of `<x, y>` modulo `m`, in `(-m/2, m/2]`.
pub fn pairing_residue(x: &[BigInt], y: &[BigInt], m: &BigInt) -> BigInt {
    let r = inner_product(x, y).mod_floor(m);
    if (&r << 1u32) > *m {
        r - m
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn primal_sqrt2_small_scale() {
        let theta = ThetaVector::from_primes(2, &[2], 40).unwrap();
        let one = BigRational::one();
        let lat = build_primal_basis(&theta, 1, &one, 10).unwrap();
        assert_eq!(lat.row(0), ints(&[1024, 0]));
        assert_eq!(lat.row(1), ints(&[1448, 1024]));
        assert!(lat.rounding_slack[0] <= BigRational::one());
    }

    #[test]
    fn primal_degenerate_theta_one() {
        let theta = ThetaVector::from_radicands(2, &[1], 40).unwrap();
        let lat = build_primal_basis(&theta, 1, &BigRational::one(), 10).unwrap();
        assert_eq!(lat.row(1), ints(&[1024, 1024]));
        assert!(lat.rounding_slack[0].is_zero());
    }

    #[test]
    fn primal_determinant_is_product_of_scales() {
        let theta = ThetaVector::from_primes(2, &[2, 3], 96).unwrap();
        let delta = BigRational::new(1.into(), 100.into());
        let lat = build_primal_basis(&theta, 10, &delta, 64).unwrap();
        let unit = BigInt::one() << 64;
        // rows scaled by a = 1, a = 1, Q*b = 1000
        let expected = &unit * &unit * &unit * BigInt::from(1000);
        assert_eq!(lat.determinant(), expected);
    }

    #[test]
    fn dual_sqrt2_small_scale() {
        let theta = ThetaVector::from_primes(2, &[2], 40).unwrap();
        let lat = build_dual_basis(&theta, 1, &BigRational::one(), 10).unwrap();
        assert_eq!(lat.column(0), &ints(&[1024, 0])[..]);
        assert_eq!(lat.column(1), &ints(&[-1448, 1024])[..]);
    }

    #[test]
    fn pairings_vanish_modulo_scale() {
        for primes in [vec![2u64], vec![2, 3], vec![2, 3, 5]] {
            let theta = ThetaVector::from_primes(3, &primes, 120).unwrap();
            let delta = BigRational::new(3.into(), 7.into());
            let p = build_primal_basis(&theta, 13, &delta, 64).unwrap();
            let d = build_dual_basis(&theta, 13, &delta, 64).unwrap();
            let m = pairing_modulus(&p, &d);
            assert_eq!(m.clone() % (BigInt::one() << 128), BigInt::zero());
            for x in &p.basis {
                for y in &d.basis {
                    assert!(pairing_residue(x, y, &m).is_zero());
                }
            }
        }
    }

    #[test]
    fn validation() {
        let theta = ThetaVector::from_primes(2, &[2], 20).unwrap();
        assert!(matches!(
            build_primal_basis(&theta, 1, &BigRational::one(), 16),
            Err(Error::PrecisionInsufficient(_))
        ));
        let theta = ThetaVector::from_primes(2, &[2], 64).unwrap();
        assert!(build_primal_basis(&theta, 0, &BigRational::one(), 16).is_err());
        assert!(build_primal_basis(&theta, 1, &BigRational::zero(), 16).is_err());
        assert!(build_primal_basis(&theta, 1, &BigRational::one(), 0).is_err());
        assert!(ThetaVector::from_primes(2, &[4], 64).is_err());
        assert!(ThetaVector::from_primes(2, &[3, 3], 64).is_err());
        assert!(IntegerLattice::from_i64_columns(&[vec![1, 2], vec![2, 4]]).is_err());
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let cols = vec![ints(&[2, -1, 0]), ints(&[1, 3, 2]), ints(&[0, 1, 4])];
        // cofactor expansion on rows: det [[2,1,0],[-1,3,1],[0,2,4]]
        let det = 2 * (3 * 4 - 1 * 2) - 1 * (-1 * 4 - 1 * 0);
        assert_eq!(determinant(&cols), BigInt::from(det));
        let cols = vec![ints(&[0, 1]), ints(&[1, 0])];
        assert_eq!(determinant(&cols), BigInt::from(-1));
    }
}
