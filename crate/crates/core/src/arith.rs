//! Machine-integer number theory: gcds, primality, factorization, binomials.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Returns `(g, s, t)` with `g = gcd(a, b) ≥ 0` and `s·a + t·b = g`.
pub fn egcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

pub fn ceil_div(a: i128, b: i128) -> i128 {
    -floor_div(-a, b)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..core::cmp::min(128, r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += 128;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

fn split_composite(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let r = libm::sqrt(n as f64) as u64;
    for s in [r.saturating_sub(1), r, r + 1] {
        if s * s == n {
            split_composite(s, out);
            split_composite(s, out);
            return;
        }
    }
    let mut c = 1;
    loop {
        if let Some(d) = pollard_brent(n, c) {
            split_composite(d, out);
            split_composite(n / d, out);
            return;
        }
        c += 1;
    }
}

/// Prime factorization as `(p, exponent)` pairs in increasing `p`.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
    }
    if n > 1 {
        let mut d = 53u64;
        while d * d <= n && d < 1000 {
            while n % d == 0 {
                primes.push(d);
                n /= d;
            }
            d += 2;
        }
        split_composite(n, &mut primes);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = core::cmp::min(k, n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflow")
}

pub fn binomial_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = core::cmp::min(k, n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `τ_k(p^α) = C(α + k − 1, k − 1)`.
pub fn tau_prime_power(alpha: u32, k: u32) -> u64 {
    binomial(alpha as u64 + k as u64 - 1, k as u64 - 1)
}

/// `τ_k(n)` from the exponents of `n`.
pub fn tau_from_exponents<I: IntoIterator<Item = u32>>(exps: I, k: u32) -> u64 {
    exps.into_iter().map(|a| tau_prime_power(a, k)).product()
}

pub fn tau(n: u64, k: u32) -> u64 {
    tau_from_exponents(factor(n).into_iter().map(|(_, e)| e), k)
}

pub fn pow_u128(base: u64, exp: u32) -> u128 {
    (base as u128).pow(exp)
}

/// `⌊n^{1/k}⌋` for nonnegative `n`.
pub fn iroot(n: u128, k: u32) -> u128 {
    if n < 2 || k == 1 {
        return n;
    }
    let mut x = libm::pow(n as f64, 1.0 / k as f64) as u128;
    while x > 0 && x.checked_pow(k).map_or(true, |v| v > n) {
        x -= 1;
    }
    while (x + 1).checked_pow(k).is_some_and(|v| v <= n) {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_matches_trial_division() {
        for n in 1..3000u64 {
            let f = factor(n);
            let back: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(back, n);
            assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }
        let big = 1_000_000_007u64 * 998_244_353;
        assert_eq!(factor(big), alloc::vec![(998_244_353, 1), (1_000_000_007, 1)]);
    }

    #[test]
    fn tau_small_values() {
        assert_eq!(tau(1, 4), 1);
        assert_eq!(tau(2, 4), 4);
        assert_eq!(tau(12, 3), 18);
        assert_eq!(tau(12, 2), 6);
    }

    #[test]
    fn egcd_identity() {
        for a in -30i128..30 {
            for b in -30i128..30 {
                let (g, s, t) = egcd_i128(a, b);
                assert_eq!(g, gcd_i128(a, b));
                assert_eq!(s * a + t * b, g);
            }
        }
    }

    #[test]
    fn roots_and_divisions() {
        assert_eq!(iroot(26, 3), 2);
        assert_eq!(iroot(27, 3), 3);
        assert_eq!(floor_div(-7, 2), -4);
        assert_eq!(ceil_div(-7, 2), -3);
        assert_eq!(ceil_div(7, 2), 4);
    }
}
