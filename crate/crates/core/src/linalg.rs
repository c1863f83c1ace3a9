//! Small exact linear algebra over `Z` and `Q`.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det_bigint(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

pub fn inverse_rational(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(piv, c);
        let inv = a[c][c].recip();
        for v in a[c].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let factor = a[r][c].clone();
                for j in 0..2 * n {
                    let t = &a[c][j] * &factor;
                    a[r][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `m·x = b`.
pub fn solve_rational(m: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let inv = inverse_rational(m)?;
    Some(
        inv.iter()
            .map(|row| {
                row.iter()
                    .zip(b)
                    .fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cofactor() {
        let m: Vec<Vec<BigInt>> = [[0, 2, 1], [3, -1, 4], [5, 6, -2]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        // 0·(2−24) − 2·(−6−20) + 1·(18+5) = 75
        assert_eq!(det_bigint(&m), BigInt::from(75));
    }

    #[test]
    fn inverse_roundtrip() {
        let q = |x: i64| BigRational::from_integer(BigInt::from(x));
        let m = alloc::vec![
            alloc::vec![q(2), q(1)],
            alloc::vec![q(7), q(4)]
        ];
        let inv = inverse_rational(&m).unwrap();
        assert_eq!(inv[0][0], q(4));
        assert_eq!(inv[0][1], q(-1));
        assert_eq!(inv[1][0], q(-7));
        assert_eq!(inv[1][1], q(2));
    }
}
