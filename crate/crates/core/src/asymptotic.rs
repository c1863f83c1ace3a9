//! The Euler product constant `C`, the predicted main term and the residue
//! coefficients of the hyperbola terms.
//!
//! `C = ∏_p (Σ_ν ϱ(p^ν)τ_{k−1}(p^ν)p^{−ν})(1 − 1/p)^{k−1}` converges only
//! conditionally in the natural order, so the product is evaluated as
//! `Res_{s=1}ζ_K(s)^{k−1} · ∏_p S_p(1 − p^{−f})^{r(k−1)}`, whose factors are
//! `1 + O(p^{−σ})` with `σ = min(2 − 2/k, 3/2)`.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{binomial_big, is_prime, tau_prime_power};
use crate::dd::Dd;
use crate::field::Field;
use crate::hnf::MODULUS_LIMIT;
use crate::region::rat_to_f64;
use crate::{Error, Result};

/// Target for the `ν`-truncation error of a single local series.
pub const DEPTH_TARGET: f64 = 1e-20;

/// Number of explicit terms summed when bounding a series tail.
const TAIL_TERMS: u32 = 400;

/// One local factor with its truncation data.
#[derive(Clone, Debug)]
pub struct EulerFactor {
    pub p: u64,
    pub k: u32,
    pub e: u32,
    pub f: u32,
    pub r: u32,
    /// Terms `ϱ(p^ν)τ_{k−1}(p^ν)/p^ν` for `ν = 0..=depth`.
    pub terms: Vec<BigRational>,
    pub depth: u32,
    /// The truncation error exceeds [`DEPTH_TARGET`] because deeper ideals
    /// leave the fixed-width HNF range.
    pub depth_limited: bool,
    /// Measured `max ϱ(p^ν)/p^{⌊ν/k⌋}`, doubled, used in the tail bound.
    pub term_const: f64,
    /// Bound for the omitted part of the series.
    pub truncation: f64,
    /// `S_p`, the truncated series.
    pub series: Dd,
    /// `S_p(1 − 1/p)^{k−1}`.
    pub factor: Dd,
    /// `S_p(1 − p^{−f})^{r(k−1)}`.
    pub normalized: Dd,
}

/// `Σ_{ν>n} c·p^{⌊ν/k⌋−ν}τ_{k−1}(p^ν)`.
fn series_tail(p: u64, k: u32, c: f64, n: u32) -> f64 {
    let pf = p as f64;
    let mut sum = 0.0;
    for nu in n + 1..=n + TAIL_TERMS {
        let t = c * libm::pow(pf, (nu / k) as f64 - nu as f64) * tau_prime_power(nu, k - 1) as f64;
        sum += t;
    }
    // Beyond that, the terms are below c·p^{−ν(k−1)/k}τ_{k−1}(p^ν), whose
    // successive ratios decrease to p^{−(k−1)/k}.
    let m = n + TAIL_TERMS + 1;
    let q = libm::pow(pf, -((k - 1) as f64) / k as f64) * (m + k - 1) as f64 / (m + 1) as f64;
    let first = c * libm::pow(pf, -(m as f64) * (k - 1) as f64 / k as f64) * tau_prime_power(m, k - 1) as f64;
    if q < 1.0 {
        sum + first / (1.0 - q)
    } else {
        f64::INFINITY
    }
}

fn one_minus_inv(q: Dd) -> Dd {
    Dd::ONE - Dd::ONE / q
}

/// Assembles a factor from `ϱ(p^ν)` for `ν = 0..=depth`.
pub fn euler_factor_from_varrho(p: u64, k: u32, (e, f, r): (u32, u32, u32), varrho: &[BigRational], safe_depth_reached: bool) -> EulerFactor {
    let pb = BigInt::from(p);
    let depth = varrho.len() as u32 - 1;
    let mut terms = Vec::with_capacity(varrho.len());
    let mut term_const: f64 = 0.5;
    let mut series = Dd::ZERO;
    for (nu, v) in varrho.iter().enumerate() {
        let nu = nu as u32;
        let t = v * BigInt::from(tau_prime_power(nu, k - 1)) / BigRational::from_integer(pb.pow(nu));
        series += Dd::from_rational(&t);
        terms.push(t);
        term_const = term_const.max(rat_to_f64(v) / libm::pow(p as f64, (nu / k) as f64));
    }
    term_const *= 2.0;
    let truncation = series_tail(p, k, term_const, depth);
    let pd = Dd::from_f64(p as f64);
    let factor = series * one_minus_inv(pd).powi(k as i32 - 1);
    let normalized = series * one_minus_inv(pd.powi(f as i32)).powi((r * (k - 1)) as i32);
    EulerFactor {
        p,
        k,
        e,
        f,
        r,
        terms,
        depth,
        depth_limited: safe_depth_reached && truncation > DEPTH_TARGET,
        term_const,
        truncation,
        series,
        factor,
        normalized,
    }
}

/// Largest `ν` whose prime-power ideals stay inside the HNF modulus range.
fn safe_depth(p: u64, e: u32, f: u32) -> u32 {
    let mut c = 0u32;
    loop {
        let next = c + 1;
        let exp = next.div_ceil(e) + 1;
        match (p as u128).checked_pow(exp) {
            Some(v) if v < MODULUS_LIMIT as u128 => c = next,
            _ => return c * f,
        }
        if c > 4096 {
            return c * f;
        }
    }
}

impl Field {
    /// The local factor at `p`, deep enough that the omitted terms are below
    /// [`DEPTH_TARGET`] or as deep as the HNF range allows.
    pub fn euler_factor(&self, p: u64) -> Result<EulerFactor> {
        if !is_prime(p) {
            return Err(Error::Usage(alloc::format!("{p} is not prime")));
        }
        let k = self.degree() as u32;
        let s = self.split_prime(p)?;
        let safe = safe_depth(p, s.e, s.f).max(1);
        let mut depth = (2 * k).min(safe);
        let mut series = self.local_varrho_series(p, depth)?;
        let probe = euler_factor_from_varrho(p, k, (s.e, s.f, s.r), &series, false);
        let mut want = depth;
        while series_tail(p, k, probe.term_const, want) > DEPTH_TARGET && want < safe {
            want += 1;
        }
        if want > depth {
            depth = want;
            loop {
                match self.local_varrho_series(p, depth) {
                    Ok(v) => {
                        series = v;
                        break;
                    }
                    Err(Error::Overflow(_)) if depth > 1 => depth -= 1,
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(euler_factor_from_varrho(p, k, (s.e, s.f, s.r), &series, true))
    }

    /// `C` over `p ≤ p0`, serially.
    pub fn constant_c(&self, p0: u64) -> Result<EulerProductEstimate> {
        let factors = crate::arith::primes_up_to(p0)
            .into_iter()
            .map(|p| self.euler_factor(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(assemble_constant(self, p0, &factors))
    }
}

/// The truncated product with its error budget.
#[derive(Clone, Debug)]
pub struct EulerProductEstimate {
    pub p0: u64,
    pub k: u32,
    pub primes: usize,
    /// `(p, depth)` for every prime used.
    pub depths: Vec<(u64, u32)>,
    pub depth_limited: Vec<u64>,
    pub residue: Dd,
    /// `Res ζ_K^{k−1} · ∏_{p ≤ P₀} S_p(1 − p^{−f})^{r(k−1)}`.
    pub value: Dd,
    /// `∏_{p ≤ P₀} S_p(1 − 1/p)^{k−1}`, for comparison.
    pub naive: Dd,
    pub sigma: f64,
    /// `max |log r_p|·p^σ` over `√P₀ < p ≤ P₀`.
    pub c_emp: f64,
    /// Bound on `|log C − log C(P₀)|` from the primes above `P₀`.
    pub log_tail: f64,
    /// `C(P₀)·(e^{log_tail} − 1)`: an empirical-constant bound.
    pub tail_bound: f64,
    /// Bound on the error from the `ν`-truncation of the included factors.
    pub truncation_bound: f64,
}

impl EulerProductEstimate {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// `C(P₀)` from factors computed for (at least) every prime up to `p0`.
pub fn assemble_constant(field: &Field, p0: u64, factors: &[EulerFactor]) -> EulerProductEstimate {
    let k = field.degree() as u32;
    let kf = k as f64;
    let sigma = (2.0 - 2.0 / kf).min(1.5);
    let residue = field.dedekind_residue();
    let mut value = residue.powi(k as i32 - 1);
    let mut naive = Dd::ONE;
    let mut c_emp: f64 = 0.0;
    let mut rel_trunc = 0.0;
    let mut depths = Vec::new();
    let mut depth_limited = Vec::new();
    let root = libm::sqrt(p0 as f64);
    let mut used: Vec<&EulerFactor> = factors.iter().filter(|f| f.p <= p0).collect();
    used.sort_by_key(|f| f.p);
    for fa in &used {
        value *= fa.normalized;
        naive *= fa.factor;
        rel_trunc += fa.truncation / fa.series.to_f64();
        depths.push((fa.p, fa.depth));
        if fa.depth_limited {
            depth_limited.push(fa.p);
        }
        if fa.p as f64 > root {
            let l = libm::fabs(fa.normalized.ln().to_f64());
            c_emp = c_emp.max(l * libm::pow(fa.p as f64, sigma));
        }
    }
    let log_tail = c_emp * libm::pow(p0 as f64, 1.0 - sigma) / (sigma - 1.0);
    let v = value.to_f64();
    EulerProductEstimate {
        p0,
        k,
        primes: used.len(),
        depths,
        depth_limited,
        residue,
        value,
        naive,
        sigma,
        c_emp,
        log_tail,
        tail_bound: v * libm::expm1(log_tail),
        truncation_bound: v * libm::expm1(rel_trunc),
    }
}

/// `C·vol(R)/(k−1)!·X^{k−1}(log X^k)^{k−1}`.
pub fn main_term(c: f64, volume: f64, k: u32, x: f64) -> f64 {
    let fact: f64 = (1..k).map(|i| i as f64).product();
    let lx = kf_log(k, x);
    c * volume / fact * libm::pow(x, (k - 1) as f64) * libm::pow(lx, (k - 1) as f64)
}

fn kf_log(k: u32, x: f64) -> f64 {
    k as f64 * libm::log(x)
}

/// `(k − j)^{k−1}/(k−1)!`.
pub fn residue_coefficient(k: u32, j: u32) -> Result<BigRational> {
    if k < 2 || j == 0 || j >= k {
        return Err(Error::Usage("need 1 ≤ j ≤ k − 1".into()));
    }
    let num = BigInt::from(k - j).pow(k - 1);
    let mut den = BigInt::one();
    for i in 2..k {
        den *= BigInt::from(i);
    }
    Ok(BigRational::new(num, den))
}

/// `(Σ_{j=1}^{k−1} (−1)^{j−1}C(k,j)(k−j)^{k−1}, k^{k−1})`.
pub fn binomial_identity_sides(k: u32) -> (BigInt, BigInt) {
    let mut lhs = BigInt::zero();
    for j in 1..k {
        let t = binomial_big(k as u64, j as u64) * BigInt::from(k - j).pow(k - 1);
        if j % 2 == 1 {
            lhs += t;
        } else {
            lhs -= t;
        }
    }
    (lhs, BigInt::from(k).pow(k - 1))
}

pub fn binomial_identity_check(k: u32) -> bool {
    let (l, r) = binomial_identity_sides(k);
    l == r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::FieldSpec;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn binomial_identity() {
        assert_eq!(binomial_identity_sides(3), (BigInt::from(9), BigInt::from(9)));
        assert_eq!(binomial_identity_sides(4).0, BigInt::from(64));
        for k in 3..=8 {
            assert!(binomial_identity_check(k));
        }
        assert_eq!(residue_coefficient(4, 1).unwrap(), q(27, 6));
        assert!(residue_coefficient(4, 4).is_err());
    }

    #[test]
    fn degenerate_series() {
        let v = [q(1, 1), q(0, 1), q(0, 1)];
        let f = euler_factor_from_varrho(7, 3, (1, 1, 3), &v, false);
        let expect = (Dd::ONE - Dd::ONE / Dd::from_f64(7.0)).powi(2);
        assert!((f.factor - expect).abs().to_f64() < 1e-30);
    }

    #[test]
    fn cubic_small_factors() {
        let f = Field::new(FieldSpec::cyclic_cubic()).unwrap();
        let two = f.euler_factor(2).unwrap();
        assert_eq!(two.terms[1], q(1, 2));
        assert!(!two.depth_limited);
        assert!(two.truncation < DEPTH_TARGET);
        let s17 = f.euler_factor(17).unwrap();
        // ϱ(17) = 49/17, τ_2(17) = 2.
        assert_eq!(s17.terms[1], q(98, 289));
        assert!(s17.factor.to_f64() > 0.0);
        assert!(s17.truncation < 1e-9);
    }

    #[test]
    fn main_term_scaling() {
        assert_eq!(main_term(1.0, 1.0, 3, 1.0), 0.0);
        let r = main_term(1.3, 0.4, 3, 2e6) / main_term(1.3, 0.4, 3, 1e6);
        let log_ratio = libm::log(2e6) / libm::log(1e6);
        assert!((r / (4.0 * log_ratio * log_ratio) - 1.0).abs() < 1e-12);
        let r = main_term(1.3, 0.4, 3, 2e60) / main_term(1.3, 0.4, 3, 1e60);
        assert!((r / 4.0 - 1.0).abs() < 0.05);
    }
}
