use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::basis::{inner_product, IntegerLattice};
use crate::error::{Error, Result};

/// Default Lovasz parameter.
pub fn default_reduction_parameter() -> BigRational {
    BigRational::new(99.into(), 100.into())
}

/// Integral LLL reduction (Cohen, Algorithm 2.6.7) with exact Lovasz test
/// `d_k d_{k-2} >= delta d_{k-1}^2 - lambda_{k,k-1}^2`.
///
/// The change-of-basis columns in `transform` are updated alongside the basis.
pub fn lll_reduce(lattice: &IntegerLattice, reduction_parameter: &BigRational) -> Result<IntegerLattice> {
    let quarter = BigRational::new(1.into(), 4.into());
    if *reduction_parameter <= quarter || *reduction_parameter >= BigRational::one() {
        return Err(Error::invalid("reduction parameter must lie in (1/4, 1)"));
    }
    let mut out = lattice.clone();
    let n = out.dim();
    if n < 2 {
        return Ok(out);
    }
    let mut state = Lll {
        b: std::mem::take(&mut out.basis),
        h: std::mem::take(&mut out.transform),
        d: vec![BigInt::zero(); n + 1],
        lambda: vec![vec![BigInt::zero(); n]; n],
        num: reduction_parameter.numer().clone(),
        den: reduction_parameter.denom().clone(),
    };
    state.run()?;
    out.basis = state.b;
    out.transform = state.h;
    Ok(out)
}

struct Lll {
    b: Vec<Vec<BigInt>>,
    h: Vec<Vec<BigInt>>,
    /// d[0] = 1, d[i] = Gram determinant of the first i vectors.
    d: Vec<BigInt>,
    /// lambda[k][j] for j < k, 0-based vector indices.
    lambda: Vec<Vec<BigInt>>,
    num: BigInt,
    den: BigInt,
}

impl Lll {
    fn run(&mut self) -> Result<()> {
        let n = self.b.len();
        self.d[0] = BigInt::one();
        self.d[1] = inner_product(&self.b[0], &self.b[0]);
        let mut k = 1usize;
        let mut k_max = 0usize;
        while k < n {
            if k > k_max {
                k_max = k;
                self.gram_schmidt_row(k)?;
            }
            loop {
                self.reduce(k, k - 1);
                let lam = &self.lambda[k][k - 1];
                let lhs = &self.den * &self.d[k + 1] * &self.d[k - 1];
                let rhs = &self.num * &self.d[k] * &self.d[k] - &self.den * lam * lam;
                if lhs < rhs {
                    self.swap(k, k_max);
                    if k > 1 {
                        k -= 1;
                    }
                } else {
                    break;
                }
            }
            for l in (0..k - 1).rev() {
                self.reduce(k, l);
            }
            k += 1;
        }
        Ok(())
    }

    fn gram_schmidt_row(&mut self, k: usize) -> Result<()> {
        for j in 0..=k {
            let mut u = inner_product(&self.b[k], &self.b[j]);
            for i in 0..j {
                u = (&self.d[i + 1] * &u - &self.lambda[k][i] * &self.lambda[j][i]) / &self.d[i];
            }
            if j < k {
                self.lambda[k][j] = u;
            } else {
                if u.is_zero() {
                    return Err(Error::invalid("basis vectors are linearly dependent"));
                }
                self.d[k + 1] = u;
            }
        }
        Ok(())
    }

    fn reduce(&mut self, k: usize, l: usize) {
        let dl = &self.d[l + 1];
        if (&self.lambda[k][l] << 1u32).abs() <= *dl {
            return;
        }
        // nearest integer to lambda / d_l
        let q = ((&self.lambda[k][l] << 1u32) + dl).div_floor(&(dl << 1u32));
        let (bl, hl) = (self.b[l].clone(), self.h[l].clone());
        for (x, y) in self.b[k].iter_mut().zip(&bl) {
            *x -= &q * y;
        }
        for (x, y) in self.h[k].iter_mut().zip(&hl) {
            *x -= &q * y;
        }
        self.lambda[k][l] -= &q * dl;
        for i in 0..l {
            let t = &q * &self.lambda[l][i];
            self.lambda[k][i] -= t;
        }
    }

    fn swap(&mut self, k: usize, k_max: usize) {
        self.b.swap(k, k - 1);
        self.h.swap(k, k - 1);
        for j in 0..k - 1 {
            let t = self.lambda[k][j].clone();
            self.lambda[k][j] = std::mem::replace(&mut self.lambda[k - 1][j], t);
        }
        let lam = self.lambda[k][k - 1].clone();
        let b_new = (&self.d[k - 1] * &self.d[k + 1] + &lam * &lam) / &self.d[k];
        for i in k + 1..=k_max {
            let t = self.lambda[i][k].clone();
            self.lambda[i][k] = (&self.d[k + 1] * &self.lambda[i][k - 1] - &lam * &t) / &self.d[k];
            self.lambda[i][k - 1] = (&b_new * &t + &lam * &self.lambda[i][k]) / &self.d[k + 1];
        }
        self.d[k] = b_new;
    }
}

/// Exact Gram-Schmidt data: orthogonal vectors `b*_i` and coefficients `mu[i][j]`.
pub struct GramSchmidt {
    pub orthogonal: Vec<Vec<BigRational>>,
    pub norms: Vec<BigRational>,
    pub mu: Vec<Vec<BigRational>>,
}

pub fn gram_schmidt(columns: &[Vec<BigInt>]) -> GramSchmidt {
    let n = columns.len();
    let mut orthogonal: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut v: Vec<BigRational> = columns[i].iter().cloned().map(BigRational::from_integer).collect();
        for j in 0..i {
            let dot: BigRational = columns[i]
                .iter()
                .zip(&orthogonal[j])
                .map(|(a, b)| b * a)
                .sum();
            let m = dot / &norms[j];
            for (x, y) in v.iter_mut().zip(&orthogonal[j]) {
                *x -= &m * y;
            }
            mu[i][j] = m;
        }
        mu[i][i] = BigRational::one();
        norms.push(v.iter().map(|x| x * x).sum());
        orthogonal.push(v);
    }
    GramSchmidt {
        orthogonal,
        norms,
        mu,
    }
}

/// Checks size reduction and the Lovasz condition with exact rationals.
pub fn is_lll_reduced(columns: &[Vec<BigInt>], reduction_parameter: &BigRational) -> bool {
    let gs = gram_schmidt(columns);
    let half = BigRational::new(1.into(), 2.into());
    for i in 0..columns.len() {
        for j in 0..i {
            if gs.mu[i][j].abs() > half {
                return false;
            }
        }
        if i > 0 {
            let m = &gs.mu[i][i - 1];
            if gs.norms[i] < (reduction_parameter - m * m) * &gs.norms[i - 1] {
                return false;
            }
        }
    }
    true
}
