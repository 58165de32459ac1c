use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Clears denominators row by row.
fn integer_rows(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * &l).to_integer()).collect()
        })
        .collect()
}

/// Basis of the right nullspace of `rows` (each `cols` wide), one vector per
/// free column, scaled to coprime integers with a positive last free entry.
/// Elimination is fraction-free (Bareiss).
pub fn nullspace(rows: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut a = integer_rows(rows);
    let m = a.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..m {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![BigRational::zero(); cols];
        x[f] = BigRational::one();
        for (row, &pc) in pivots.iter().enumerate().rev() {
            let mut s = BigRational::zero();
            for j in pc + 1..cols {
                if !x[j].is_zero() {
                    s += BigRational::from_integer(a[row][j].clone()) * &x[j];
                }
            }
            x[pc] = -s / BigRational::from_integer(a[row][pc].clone());
        }
        out.push(primitive(&x));
    }
    out
}

/// Scales a rational vector to coprime integers with the same direction.
pub fn primitive(x: &[BigRational]) -> Vec<BigInt> {
    let l = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = x.iter().map(|v| (v * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|v| v / &g).collect()
}

/// `Some(v)` or `Some(-v)` when one of them is strictly positive.
pub fn positive_representative(v: &[BigInt]) -> Option<Vec<BigInt>> {
    if v.iter().all(|x| x.is_positive()) {
        Some(v.to_vec())
    } else if v.iter().all(|x| x.is_negative()) {
        Some(v.iter().map(|x| -x).collect())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[i64]]) -> Vec<Vec<BigRational>> {
        v.iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect()
    }

    fn apply(rows: &[Vec<BigRational>], x: &[BigInt]) -> Vec<BigRational> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .zip(x)
                    .map(|(a, b)| a * BigRational::from_integer(b.clone()))
                    .fold(BigRational::zero(), |s, t| s + t)
            })
            .collect()
    }

    #[test]
    fn one_dimensional_kernel() {
        let m = rows(&[&[1, 1, -1], &[2, -1, -1]]);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        assert!(apply(&m, &ns[0]).iter().all(|v| v.is_zero()));
        assert_eq!(positive_representative(&ns[0]).unwrap(), vec![2.into(), 1.into(), 3.into()]);
    }

    #[test]
    fn full_rank_is_empty() {
        assert!(nullspace(&rows(&[&[1, 2], &[3, 4]]), 2).is_empty());
    }

    #[test]
    fn zero_matrix_gives_unit_vectors() {
        let ns = nullspace(&rows(&[&[0, 0, 0]]), 3);
        assert_eq!(ns.len(), 3);
    }

    #[test]
    fn rational_rows() {
        let half = BigRational::new(1.into(), 2.into());
        let m = vec![vec![half.clone(), -half.clone() * BigRational::from_integer(3.into())]];
        let ns = nullspace(&m, 2);
        assert_eq!(ns, vec![vec![BigInt::from(3), BigInt::from(1)]]);
    }
}
