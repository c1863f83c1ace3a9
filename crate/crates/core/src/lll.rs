//! Exact LLL reduction on Gram matrices and Fincke–Pohst enumeration.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn gso(g: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = g.len();
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut b = vec![BigRational::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut v = BigRational::from_integer(g[i][j].clone());
            for l in 0..j {
                v -= &mu[j][l] * &mu[i][l] * &b[l];
            }
            mu[i][j] = if b[j].is_zero() { BigRational::zero() } else { v / &b[j] };
        }
        let mut v = BigRational::from_integer(g[i][i].clone());
        for l in 0..i {
            v -= &mu[i][l] * &mu[i][l] * &b[l];
        }
        b[i] = v;
    }
    (mu, b)
}

fn round(x: &BigRational) -> BigInt {
    // Nearest integer, halves toward +∞.
    let two = BigInt::from(2);
    (x.numer() * &two + x.denom()).div_floor(&(x.denom() * &two))
}

/// LLL-reduces the lattice with Gram matrix `g` in place (δ = 99/100) and
/// returns the unimodular `U` with `new basis = U · old basis`.
pub fn lll_gram(g: &mut [Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = g.len();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    if n <= 1 {
        return u;
    }
    let delta = BigRational::new(BigInt::from(99), BigInt::from(100));
    let (mut mu, mut bstar) = gso(g);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let q = round(&mu[k][j]);
            if q.is_zero() {
                continue;
            }
            // b_k ← b_k − q·b_j
            let gkj = g[k][j].clone();
            let gjj = g[j][j].clone();
            for l in 0..n {
                if l != k {
                    let v = &g[k][l] - &q * &g[j][l];
                    g[k][l] = v.clone();
                    g[l][k] = v;
                }
            }
            g[k][k] = &g[k][k] - BigInt::from(2) * &q * &gkj + &q * &q * &gjj;
            for l in 0..n {
                let v = &u[k][l] - &q * &u[j][l];
                u[k][l] = v;
            }
            let qr = BigRational::from_integer(q);
            for l in 0..j {
                let v = &mu[k][l] - &qr * &mu[j][l];
                mu[k][l] = v;
            }
            mu[k][j] -= &qr;
        }
        let lhs = bstar[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bstar[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            u.swap(k, k - 1);
            let (m2, b2) = gso(g);
            mu = m2;
            bstar = b2;
            k = k.max(2) - 1;
        }
    }
    u
}

pub fn gram_of(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|a| {
            rows.iter()
                .map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum())
                .collect()
        })
        .collect()
}

/// Euclidean LLL on the row vectors; output rows span the same lattice.
pub fn lll_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut g = gram_of(rows);
    let u = lll_gram(&mut g);
    apply(&u, rows)
}

/// `U · rows`.
pub fn apply(u: &[Vec<BigInt>], rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let dim = rows.first().map_or(0, |r| r.len());
    u.iter()
        .map(|urow| {
            (0..dim)
                .map(|c| urow.iter().zip(rows).map(|(a, r)| a * &r[c]).sum())
                .collect()
        })
        .collect()
}

/// Checks the size and Lovász conditions exactly.
pub fn is_lll_reduced(g: &[Vec<BigInt>]) -> bool {
    let (mu, b) = gso(g);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let delta = BigRational::new(BigInt::from(99), BigInt::from(100));
    for i in 0..g.len() {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return false;
            }
        }
        if i > 0 && b[i] < (&delta - &mu[i][i - 1] * &mu[i][i - 1]) * &b[i - 1] {
            return false;
        }
    }
    true
}

/// Every nonzero `c ∈ Z^n` with `cᵀ G c ≤ bound`, by Fincke–Pohst. The
/// floating Cholesky factor is used with a small relative slack so callers
/// must re-check candidates exactly. Returns `None` past `limit` vectors.
pub fn short_vectors(g: &[Vec<f64>], bound: f64, limit: usize) -> Option<Vec<Vec<i64>>> {
    let n = g.len();
    // q[i][i] = squared GS length, q[i][j] (j > i) = Cholesky ratios.
    let mut q = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i..n {
            q[i][j] = g[i][j];
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for l in i + 1..n {
            for j in l..n {
                q[l][j] -= q[l][i] * q[i][j];
            }
        }
    }
    let bound = bound * (1.0 + 1e-9) + 1e-9;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    fn rec(
        i: usize,
        rem: f64,
        q: &[Vec<f64>],
        x: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
        limit: usize,
    ) -> bool {
        let n = x.len();
        let center: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
        let r = libm::sqrt((rem / q[i][i]).max(0.0));
        let lo = libm::ceil(center - r) as i64;
        let hi = libm::floor(center + r) as i64;
        for v in lo..=hi {
            x[i] = v;
            let d = v as f64 - center;
            let left = rem - q[i][i] * d * d;
            if left < 0.0 {
                continue;
            }
            if i == 0 {
                if x.iter().any(|&c| c != 0) {
                    out.push(x.clone());
                    if out.len() > limit {
                        return false;
                    }
                }
            } else if !rec(i - 1, left, q, x, out, limit) {
                return false;
            }
        }
        x[i] = 0;
        true
    }
    if n == 0 {
        return Some(out);
    }
    if rec(n - 1, bound, &q, &mut x, &mut out, limit) {
        Some(out)
    } else {
        None
    }
}

/// Gram matrix entries as `f64`, for enumeration.
pub fn gram_to_f64(g: &[Vec<BigInt>]) -> Vec<Vec<f64>> {
    g.iter()
        .map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn reduces_scrambled_basis() {
        // U·diag(1,1,1000) with a unimodular U.
        let rows = big(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1000]]);
        let u = big(&[&[1, 2, 3], &[0, 1, 4], &[0, 0, 1]]);
        let scrambled = apply(&u, &rows);
        let red = lll_rows(&scrambled);
        let mut g = gram_of(&red);
        assert!(is_lll_reduced(&g));
        let norms: Vec<BigInt> = (0..3).map(|i| g[i][i].clone()).collect();
        assert_eq!(norms[0], BigInt::one());
        assert_eq!(norms[1], BigInt::one());
        let _ = lll_gram(&mut g);
    }

    #[test]
    fn enumeration_counts_small_ball() {
        let g = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let v = short_vectors(&g, 2.0, 100).unwrap();
        // (±1,0), (0,±1), (±1,±1)
        assert_eq!(v.len(), 8);
    }
}
