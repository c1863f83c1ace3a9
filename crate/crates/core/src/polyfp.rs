//! Dense univariate polynomials over `F_p` (coefficients low degree first) and
//! their factorization: square-free split, distinct-degree split, then
//! Cantor–Zassenhaus with a seeded ChaCha stream.

use alloc::vec;
use alloc::vec::Vec;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{mul_mod, pow_mod};

pub type Poly = Vec<u64>;

fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Reduces integer coefficients into `[0, p)`.
pub fn from_ints(coeffs: &[i128], p: u64) -> Poly {
    let mut out: Poly = coeffs
        .iter()
        .map(|&c| c.rem_euclid(p as i128) as u64)
        .collect();
    trim(&mut out);
    out
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            ((x as u128 + y as u128) % p as u128) as u64
        })
        .collect();
    trim(&mut out);
    out
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            ((x as u128 + p as u128 - y as u128) % p as u128) as u64
        })
        .collect();
    trim(&mut out);
    out
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let inv = inv_mod(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = mul_mod(r[i], inv, p);
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for j in 0..=db {
            let t = mul_mod(c, b[j], p);
            r[i - db + j] = (r[i - db + j] + p - t) % p;
        }
    }
    trim(&mut q);
    trim(&mut r);
    (q, r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> Poly {
    let mut a = a.to_vec();
    trim(&mut a);
    if let Some(&lead) = a.last() {
        let inv = inv_mod(lead, p);
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    a
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

pub fn derivative(a: &[u64], p: u64) -> Poly {
    let mut out: Poly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
        .collect();
    trim(&mut out);
    out
}

/// `base^e mod modulus`.
pub fn powmod(base: &[u64], mut e: u128, modulus: &[u64], p: u64) -> Poly {
    let mut acc: Poly = vec![1];
    acc = rem(&acc, modulus, p);
    let mut b = rem(base, modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), modulus, p);
        }
        b = rem(&mul(&b, &b, p), modulus, p);
        e >>= 1;
    }
    acc
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter()
        .rev()
        .fold(0u64, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

/// Whether the polynomial has a root in `F_p`.
pub fn has_root(a: &[u64], p: u64) -> bool {
    let a = monic(a, p);
    match degree(&a) {
        None => true,
        Some(0) => false,
        Some(1) => true,
        Some(_) => {
            let xp = powmod(&[0, 1], p as u128, &a, p);
            let h = sub(&xp, &[0, 1], p);
            degree(&gcd(&a, &h, p)).is_some_and(|d| d > 0)
        }
    }
}

/// Square-free decomposition of a monic polynomial: pairs `(g, m)` with
/// `a = ∏ g^m` and every `g` square-free.
pub fn squarefree(a: &[u64], p: u64) -> Vec<(Poly, u32)> {
    let a = monic(a, p);
    let mut out = Vec::new();
    if degree(&a).unwrap_or(0) == 0 {
        return out;
    }
    let da = derivative(&a, p);
    if da.is_empty() {
        // a = b(x^p) = b(x)^p since Frobenius is the identity on F_p.
        let b: Poly = a.iter().step_by(p as usize).copied().collect();
        for (g, m) in squarefree(&b, p) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = gcd(&a, &da, p);
    let mut w = divrem(&a, &c, p).0;
    let mut i = 1u32;
    while degree(&w).unwrap_or(0) > 0 {
        let y = gcd(&w, &c, p);
        let z = divrem(&w, &y, p).0;
        if degree(&z).unwrap_or(0) > 0 {
            out.push((monic(&z, p), i));
        }
        i += 1;
        w = y;
        c = divrem(&c, &w, p).0;
    }
    if degree(&c).unwrap_or(0) > 0 {
        let b: Poly = c.iter().step_by(p as usize).copied().collect();
        for (g, m) in squarefree(&b, p) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a monic square-free polynomial.
pub fn distinct_degree(a: &[u64], p: u64) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut f = monic(a, p);
    let mut h: Poly = vec![0, 1];
    let mut d = 0;
    while degree(&f).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = powmod(&h, p as u128, &f, p);
        let g = gcd(&f, &sub(&h, &[0, 1], p), p);
        if degree(&g).unwrap_or(0) > 0 {
            f = divrem(&f, &g, p).0;
            h = rem(&h, &f, p);
            out.push((g, d));
        }
    }
    if let Some(df) = degree(&f) {
        if df > 0 {
            out.push((monic(&f, p), df));
        }
    }
    out
}

fn random_poly(rng: &mut ChaCha8Rng, deg: usize, p: u64) -> Poly {
    let mut out: Poly = (0..deg).map(|_| rng.next_u64() % p).collect();
    trim(&mut out);
    out
}

/// Splits a product of distinct irreducible factors of degree `d`.
pub fn equal_degree(a: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let a = monic(a, p);
    let n = degree(&a).unwrap_or(0);
    if n == d {
        return vec![a];
    }
    loop {
        let r = random_poly(rng, n, p);
        if degree(&r).unwrap_or(0) == 0 {
            continue;
        }
        let candidate = if p == 2 {
            // Trace map r + r^2 + … + r^(2^(d−1)).
            let mut t = r.clone();
            let mut acc = r.clone();
            for _ in 1..d {
                t = rem(&mul(&t, &t, p), &a, p);
                acc = add(&acc, &t, p);
            }
            acc
        } else {
            let e = (p as u128).pow(d as u32) / 2;
            sub(&powmod(&r, e, &a, p), &[1], p)
        };
        let g = gcd(&a, &candidate, p);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let other = divrem(&a, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&other, d, p, rng));
            return out;
        }
    }
}

/// Full factorization into monic irreducibles with multiplicities, sorted by
/// (degree, coefficients) so the output is independent of the random stream.
pub fn factor(a: &[u64], p: u64, seed: u64) -> Vec<(Poly, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
    let mut out = Vec::new();
    for (sf, m) in squarefree(a, p) {
        for (g, d) in distinct_degree(&sf, p) {
            for h in equal_degree(&g, d, p, &mut rng) {
                out.push((h, m));
            }
        }
    }
    out.sort_by(|x, y| x.0.len().cmp(&y.0.len()).then_with(|| x.0.cmp(&y.0)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(factors: &[(Poly, u32)], p: u64) -> Poly {
        let mut acc = vec![1];
        for (g, m) in factors {
            for _ in 0..*m {
                acc = mul(&acc, g, p);
            }
        }
        acc
    }

    #[test]
    fn cyclotomic_eight_mod_17_splits() {
        let f = from_ints(&[1, 0, 0, 0, 1], 17);
        let fac = factor(&f, 17, 7);
        assert_eq!(fac.len(), 4);
        assert!(fac.iter().all(|(g, m)| g.len() == 2 && *m == 1));
        assert_eq!(product(&fac, 17), f);
    }

    #[test]
    fn cyclotomic_eight_mod_3_quadratics() {
        let f = from_ints(&[1, 0, 0, 0, 1], 3);
        let fac = factor(&f, 3, 7);
        assert_eq!(fac.len(), 2);
        assert!(fac.iter().all(|(g, _)| g.len() == 3));
    }

    #[test]
    fn ramified_two() {
        let f = from_ints(&[1, 0, 0, 0, 1], 2);
        assert_eq!(factor(&f, 2, 1), vec![(vec![1, 1], 4)]);
        let cubic = from_ints(&[-1, -3, 0, 1], 3);
        assert_eq!(factor(&cubic, 3, 1), vec![(vec![2, 1], 3)]);
    }

    #[test]
    fn cubic_inert_mod_two() {
        let f = from_ints(&[-1, -3, 0, 1], 2);
        assert!(!has_root(&f, 2));
        assert_eq!(factor(&f, 2, 1).len(), 1);
    }

    #[test]
    fn root_test_against_brute_force() {
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let f = from_ints(&[-1, -3, 0, 1], p);
            let brute = (0..p).any(|x| eval(&f, x, p) == 0);
            assert_eq!(has_root(&f, p), brute, "p = {p}");
        }
    }
}
