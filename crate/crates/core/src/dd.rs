//! Double-double floating point (about 106 bits of mantissa) and a complex
//! companion. Only what the embeddings, the regulator and the Euler product
//! need: the four operations, `sqrt`, `exp`, `ln` and a handful of constants.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    // Veltkamp split; no FMA so this stays usable without std.
    const SPLITTER: f64 = 134_217_729.0;
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd {
        hi: 3.141592653589793,
        lo: 1.2246467991473532e-16,
    };
    pub const LN2: Dd = Dd {
        hi: 0.6931471805599453,
        lo: 2.3190468138462996e-17,
    };

    #[inline]
    pub const fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn from_i128(x: i128) -> Dd {
        let hi = x as f64;
        let rest = x - hi as i128;
        let (s, e) = quick_two_sum(hi, rest as f64);
        Dd { hi: s, lo: e }
    }

    /// Exact ratio of two integers rounded to double-double.
    pub fn from_ratio(num: i128, den: i128) -> Dd {
        Dd::from_i128(num) / Dd::from_i128(den)
    }

    #[inline]
    /// Rounds to the nearest double-double, keeping the top 120 bits.
    pub fn from_big(x: &BigInt) -> Dd {
        match x.to_i128() {
            Some(v) => Dd::from_i128(v),
            None => {
                let shift = x.bits().saturating_sub(120);
                let top: BigInt = x >> shift;
                Dd::from_i128(top.to_i128().unwrap()).mul_pow2(shift as i32)
            }
        }
    }

    pub fn from_rational(x: &BigRational) -> Dd {
        Dd::from_big(x.numer()) / Dd::from_big(x.denom())
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    pub fn sqr(self) -> Dd {
        self * self
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let x = 1.0 / libm::sqrt(self.hi);
        let ax = Dd::from_f64(self.hi * x);
        let (p, e) = two_prod(ax.hi, ax.hi);
        let diff = (self - Dd { hi: p, lo: e }).hi * (x * 0.5);
        let (s, t) = two_sum(ax.hi, diff);
        Dd { hi: s, lo: t }
    }

    pub fn powi(self, mut n: i32) -> Dd {
        let mut base = if n < 0 { Dd::ONE / self } else { self };
        n = n.abs();
        let mut acc = Dd::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    pub fn mul_pow2(self, e: i32) -> Dd {
        let s = libm::scalbn(1.0, e);
        Dd {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let m = libm::floor(self.hi / Dd::LN2.hi + 0.5);
        let r = (self - Dd::LN2 * Dd::from_f64(m)).mul_pow2(-10);
        // Taylor series of exp(r) − 1 for |r| < 2^-10.
        let mut term = r;
        let mut sum = r;
        let mut i = 2.0;
        while term.hi.abs() > 1e-36 {
            term = term * r / Dd::from_f64(i);
            sum += term;
            i += 1.0;
        }
        // (1 + s)^2 − 1 = s(2 + s), repeated to undo the 2^-10 scaling.
        for _ in 0..10 {
            sum = sum * (sum + Dd::from_f64(2.0));
        }
        (sum + Dd::ONE).mul_pow2(m as i32)
    }

    pub fn ln(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from_f64(f64::NAN);
        }
        let y = Dd::from_f64(libm::log(self.hi));
        // One Newton step on exp(y) = x doubles the accurate digits.
        y + self * (-y).exp() - Dd::ONE
    }

    pub fn max(self, other: Dd) -> Dd {
        if self < other {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Dd) -> Dd {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd::from_f64(x)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::from_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::from_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

impl AddAssign for Dd {
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}

impl SubAssign for Dd {
    fn sub_assign(&mut self, b: Dd) {
        *self = *self - b;
    }
}

impl MulAssign for Dd {
    fn mul_assign(&mut self, b: Dd) {
        *self = *self * b;
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

/// Complex number with double-double parts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub const ONE: CDd = CDd {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    pub fn new(re: Dd, im: Dd) -> CDd {
        CDd { re, im }
    }

    pub fn real(re: Dd) -> CDd {
        CDd { re, im: Dd::ZERO }
    }

    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> Dd {
        self.norm_sqr().sqrt()
    }

    pub fn conj(self) -> CDd {
        CDd {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn scale(self, s: Dd) -> CDd {
        CDd {
            re: self.re * s,
            im: self.im * s,
        }
    }

    pub fn to_f64(self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for CDd {
    type Output = CDd;
    fn add(self, b: CDd) -> CDd {
        CDd::new(self.re + b.re, self.im + b.im)
    }
}

impl Sub for CDd {
    type Output = CDd;
    fn sub(self, b: CDd) -> CDd {
        CDd::new(self.re - b.re, self.im - b.im)
    }
}

impl Neg for CDd {
    type Output = CDd;
    fn neg(self) -> CDd {
        CDd::new(-self.re, -self.im)
    }
}

impl Mul for CDd {
    type Output = CDd;
    fn mul(self, b: CDd) -> CDd {
        CDd::new(
            self.re * b.re - self.im * b.im,
            self.re * b.im + self.im * b.re,
        )
    }
}

impl Div for CDd {
    type Output = CDd;
    fn div(self, b: CDd) -> CDd {
        let d = b.norm_sqr();
        let n = self * b.conj();
        CDd::new(n.re / d, n.im / d)
    }
}

impl AddAssign for CDd {
    fn add_assign(&mut self, b: CDd) {
        *self = *self + b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Dd, b: Dd, tol: f64) -> bool {
        (a - b).abs().to_f64() <= tol * b.abs().to_f64().max(1.0)
    }

    #[test]
    fn sqrt_two_squared() {
        let r = Dd::from_f64(2.0).sqrt();
        assert!(close(r * r, Dd::from_f64(2.0), 1e-30));
    }

    #[test]
    fn exp_ln_roundtrip() {
        for x in [0.001, 0.5, 1.0, 3.7, 100.0, 12345.678] {
            let d = Dd::from_f64(x);
            assert!(close(d.ln().exp(), d, 1e-29), "x = {x}");
        }
        assert!(close(Dd::ONE.exp().ln(), Dd::ONE, 1e-30));
    }

    #[test]
    fn ln2_constant() {
        assert!(close(Dd::from_f64(2.0).ln(), Dd::LN2, 1e-31));
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = Dd::from_ratio(1, 3);
        assert!(close(a * Dd::from_f64(3.0), Dd::ONE, 1e-31));
        let big = Dd::from_i128(1i128 << 100) + Dd::ONE;
        assert_eq!(big.hi, (1u128 << 100) as f64);
        assert_eq!(big.lo, 1.0);
    }
}
