//! Local densities `ρ(𝔫)`, `ϱ(n)` and the primitive counts `ϱ*(p^α)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{factor, pow_u128};
use crate::field::Field;
use crate::hnf::{IdealHnf, MODULUS_LIMIT};
use crate::ideal::{exponent_box, local_mu};
use crate::mpoly::{CompiledForm, MPoly};
use crate::{Error, Result};

/// Default cap on `q^{k−1}` for one prime-power component of a direct count.
pub const DIRECT_BUDGET: u128 = 125_000_000;

/// Brute-force threshold for `ϱ*` subproblems.
const BRUTE_LIMIT: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    DirectCount,
    LatticeDeterminant,
    MultiplicativeAssembly,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::DirectCount => "direct-count",
            Provenance::LatticeDeterminant => "lattice-determinant",
            Provenance::MultiplicativeAssembly => "multiplicative-assembly",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityValue {
    pub value: BigRational,
    pub provenance: Provenance,
}

fn ratio(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

/// Number of `x ∈ (Z/q)^{m}` with `q | F(x)`, sweeping the last variable by
/// forward differences.
pub fn count_zeros_mod(form: &CompiledForm, q: u64) -> u64 {
    let m = form.nvars;
    let d = form.degree as usize;
    let mut prefix = vec![0u64; m - 1];
    let mut count = 0u64;
    let mut diff = vec![0u64; d + 1];
    loop {
        let coeffs = form.univariate_last_mod(&prefix, q);
        // Values at t = 0..=d, then the difference table.
        for (t, slot) in diff.iter_mut().enumerate() {
            let mut acc = 0u128;
            for c in coeffs.iter().rev() {
                acc = (acc * t as u128 + *c as u128) % q as u128;
            }
            *slot = acc as u64;
        }
        for level in 1..=d {
            for i in (level..=d).rev() {
                diff[i] = (diff[i] + q - diff[i - 1]) % q;
            }
        }
        // diff[i] now holds Δ^i v(0).
        for _ in 0..q {
            if diff[0] == 0 {
                count += 1;
            }
            for i in 0..d {
                let s = diff[i] + diff[i + 1];
                diff[i] = if s >= q { s - q } else { s };
            }
        }
        let mut i = 0;
        loop {
            if i == m - 1 {
                return count;
            }
            prefix[i] += 1;
            if prefix[i] < q {
                break;
            }
            prefix[i] = 0;
            i += 1;
        }
    }
}

/// Coefficients reduced modulo `q`, for small brute-force counts.
struct ModPoly {
    q: u128,
    terms: Vec<(Vec<u32>, u128)>,
}

impl ModPoly {
    fn new(g: &MPoly, q: u128) -> ModPoly {
        let qb = BigInt::from(q);
        let terms = g
            .terms()
            .map(|(e, c)| (e.clone(), c.mod_floor(&qb).to_u128().unwrap()))
            .filter(|(_, c)| *c != 0)
            .collect();
        ModPoly { q, terms }
    }

    fn eval(&self, x: &[u128]) -> u128 {
        let mut acc = 0u128;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (&xi, &ei) in x.iter().zip(e) {
                for _ in 0..ei {
                    t = t * xi % self.q;
                }
            }
            acc = (acc + t) % self.q;
        }
        acc
    }
}

/// Calls `f` on every point of `(Z/q)^m`.
fn for_each_point(m: usize, q: u128, mut f: impl FnMut(&[u128])) {
    let mut x = vec![0u128; m];
    loop {
        f(&x);
        let mut i = 0;
        loop {
            if i == m {
                return;
            }
            x[i] += 1;
            if x[i] < q {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

fn brute_count(g: &MPoly, p: u64, alpha: u32, primitive: bool) -> u128 {
    let q = pow_u128(p, alpha);
    let mp = ModPoly::new(g, q);
    let mut count = 0u128;
    for_each_point(g.nvars(), q, |x| {
        if primitive && x.iter().all(|&c| c % p as u128 == 0) {
            return;
        }
        if mp.eval(x) == 0 {
            count += 1;
        }
    });
    count
}

fn valuation(mut n: BigInt, p: u64) -> u32 {
    let pb = BigInt::from(p);
    let mut v = 0;
    while !n.is_zero() && n.is_multiple_of(&pb) {
        n /= &pb;
        v += 1;
    }
    v
}

/// Number of `x mod p^α` (primitive ones only if asked) with `p^α | g(x)`:
/// nonsingular zeros mod `p` lift uniquely along each fibre, singular ones
/// descend to `g(r + p·y)` with its content removed.
fn count_lifted(
    g: &MPoly,
    p: u64,
    alpha: u32,
    primitive: bool,
    depth: u32,
    cap: u32,
) -> Result<u128> {
    let m = g.nvars() as u32;
    if alpha == 0 {
        return Ok(1);
    }
    let space = pow_u128(p, alpha).checked_pow(m);
    if space.is_some_and(|s| s <= BRUTE_LIMIT) {
        return Ok(brute_count(g, p, alpha, primitive));
    }
    if depth > cap {
        return Err(Error::BudgetExceeded {
            what: "Hensel descent depth",
            needed: depth as u128,
            budget: cap as u128,
        });
    }
    let pu = p as u128;
    let gp = ModPoly::new(g, pu);
    let grads: Vec<ModPoly> = (0..m as usize)
        .map(|i| ModPoly::new(&g.partial(i), pu))
        .collect();
    let lifts = pow_u128(p, (alpha - 1) * (m - 1));
    let all = pow_u128(p, (alpha - 1) * m);
    let mut total = 0u128;
    let mut err = None;
    for_each_point(m as usize, pu, |r| {
        if err.is_some() || (primitive && r.iter().all(|&c| c == 0)) || gp.eval(r) != 0 {
            return;
        }
        if grads.iter().any(|d| d.eval(r) != 0) {
            total += lifts;
            return;
        }
        let rb: Vec<BigInt> = r.iter().map(|&c| BigInt::from(c)).collect();
        let h = g.substitute_affine(&rb, &BigInt::from(p));
        if h.is_zero() {
            total += all;
            return;
        }
        let t = valuation(h.content(), p);
        if t >= alpha {
            total += all;
            return;
        }
        let hp = h.div_exact(&BigInt::from(p).pow(t));
        match count_lifted(&hp, p, alpha - t, false, depth + 1, cap) {
            Ok(c) => total += c * pow_u128(p, m * (t - 1)),
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// Measured constants from [`Field::check_density_bounds`].
#[derive(Clone, Debug, Default)]
pub struct DensityBounds {
    pub primes_checked: usize,
    /// `max ϱ(p^ℓ)/p^{⌊ℓ/k⌋}` over `ℓ ≤ 2k`.
    pub prime_power_const: f64,
    /// `max |ϱ(p) − k|·p^{1−1/k}` over degree-one `p`.
    pub split_const: f64,
    /// `max ϱ(p)·p^{1−2/k}` over the other primes.
    pub nonsplit_const: f64,
    /// `max ϱ*(p^α)/p^{α(k−2)}` over the primitive counts evaluated.
    pub primitive_const: f64,
    /// Whether `ϱ(p) < p` held everywhere.
    pub varrho_below_p: bool,
    /// Whether `ϱ(p) − k < 0` at every degree-one `p`.
    pub split_deficit_negative: bool,
}

fn rat_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
}

impl Field {
    /// `ρ(𝔫) = N𝔫 / det(𝔫 ∩ Z^{k−1})`, the last HNF diagonal entry.
    pub fn rho_ideal(&self, n: &IdealHnf) -> DensityValue {
        DensityValue {
            value: BigRational::from_integer(BigInt::from(n.last_diag())),
            provenance: Provenance::LatticeDeterminant,
        }
    }

    /// `ρ(𝔫)` by counting `x ∈ (Z/N𝔫)^{k−1}` with `𝔫 | (x)`. Membership is
    /// periodic modulo `a = min(𝔫 ∩ Z)`, so only `(Z/a)^{k−1}` is scanned.
    pub fn rho_direct(&self, n: &IdealHnf, budget: u128) -> Result<DensityValue> {
        let k = self.k;
        let a = n.min_integer();
        let space = (a as u128).checked_pow(k as u32 - 1).unwrap_or(u128::MAX);
        if space > budget {
            return Err(Error::BudgetExceeded {
                what: "direct ρ count",
                needed: space,
                budget,
            });
        }
        let mut count = 0u128;
        let mut x = vec![0i128; k];
        loop {
            if n.contains(&x) {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == k - 1 {
                    let norm = n.norm();
                    let scale = (norm.clone() / BigInt::from(a)).pow(k as u32 - 1);
                    let total = BigInt::from(count) * scale;
                    return Ok(DensityValue {
                        value: ratio(total, norm.pow(k as u32 - 2)),
                        provenance: Provenance::DirectCount,
                    });
                }
                x[i] += 1;
                if x[i] < a {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
        }
    }

    /// `ρ(𝔫)` as the product of `ρ` over the prime-power parts of `𝔫`.
    pub fn rho_multiplicative(&self, n: &IdealHnf) -> Result<DensityValue> {
        let fac = self.factor_ideal(n)?;
        let mut by_prime: BTreeMap<u64, Vec<(usize, u32)>> = BTreeMap::new();
        for &(p, i, e) in &fac.parts {
            by_prime.entry(p).or_default().push((i, e));
        }
        let mut value = BigRational::one();
        for (p, parts) in by_prime {
            let s = self.split_prime(p)?;
            let mut b = vec![0u32; s.r as usize];
            for (i, e) in parts {
                b[i] = e;
            }
            let local = self.local_ideal(&s, &b)?;
            value *= self.rho_ideal(&local).value;
        }
        Ok(DensityValue {
            value,
            provenance: Provenance::MultiplicativeAssembly,
        })
    }

    /// Number of `x ∈ (Z/q)^{k−1}` with `q | f(x)`.
    pub fn count_direct(&self, q: u64, budget: u128) -> Result<u64> {
        let space = (q as u128).checked_pow(self.k as u32 - 1).unwrap_or(u128::MAX);
        if space > budget {
            return Err(Error::BudgetExceeded {
                what: "direct ϱ count",
                needed: space,
                budget,
            });
        }
        if q == 1 {
            return Ok(1);
        }
        Ok(count_zeros_mod(&self.fast_form, q))
    }

    /// `ϱ(n)` by direct counting, split over prime powers by CRT; each
    /// component must fit the budget. `cache` maps prime powers to counts.
    pub fn varrho_direct_cached(
        &self,
        n: u64,
        budget: u128,
        cache: &mut BTreeMap<u64, u64>,
    ) -> Result<DensityValue> {
        if n == 0 {
            return Err(Error::Usage("n must be positive".into()));
        }
        let mut count = BigInt::one();
        for (p, a) in factor(n) {
            let q = p.pow(a);
            let c = match cache.get(&q) {
                Some(&c) => c,
                None => {
                    let c = self.count_direct(q, budget)?;
                    cache.insert(q, c);
                    c
                }
            };
            count *= BigInt::from(c);
        }
        Ok(DensityValue {
            value: ratio(count, BigInt::from(n).pow(self.k as u32 - 2)),
            provenance: Provenance::DirectCount,
        })
    }

    pub fn varrho_direct(&self, n: u64) -> Result<DensityValue> {
        self.varrho_direct_cached(n, DIRECT_BUDGET, &mut BTreeMap::new())
    }

    /// `ϱ(p^α)` for `α = 0..=max_alpha` from `ϱ(p^α)/p^α = Σ μ(b)·ρ(𝔭^b)/N𝔭^b`.
    pub fn local_varrho_series(&self, p: u64, max_alpha: u32) -> Result<Vec<BigRational>> {
        let s = self.split_prime(p)?;
        let r = s.r as usize;
        let c_max = max_alpha.div_ceil(s.f);
        // ρ(𝔭^b)/N(𝔭^b) over the box [0, c_max]^r, by mixed-radix index.
        let side = c_max as usize + 1;
        let size = side.pow(r as u32);
        let mut q: Vec<Option<BigRational>> = vec![None; size];
        let mut ideals: Vec<Option<IdealHnf>> = vec![None; size];
        ideals[0] = Some(IdealHnf::unit(self.k));
        let index = |b: &[u32]| b.iter().fold(0usize, |acc, &x| acc * side + x as usize);
        for b in exponent_box(r, c_max) {
            let idx = index(&b);
            if ideals[idx].is_none() {
                // Extend from the predecessor obtained by lowering the last nonzero entry.
                let j = b.iter().rposition(|&x| x > 0).unwrap();
                let mut prev = b.clone();
                prev[j] -= 1;
                let base = ideals[index(&prev)].clone().unwrap();
                if base.min_integer().saturating_mul(p as i128) >= MODULUS_LIMIT {
                    return Err(Error::Overflow("prime-power ideal modulus"));
                }
                ideals[idx] = Some(self.ideal_product(&base, &s.primes[j].hnf)?);
            }
            let id = ideals[idx].as_ref().unwrap();
            q[idx] = Some(ratio(BigInt::from(id.last_diag()), id.norm()));
        }
        let mut out = Vec::with_capacity(max_alpha as usize + 1);
        for alpha in 0..=max_alpha {
            let lm = local_mu(p, alpha, s.f, s.r);
            let mut acc = BigRational::zero();
            for (b, c) in &lm.coeffs {
                acc += q[index(b)].as_ref().unwrap() * BigInt::from(*c);
            }
            out.push(acc * BigInt::from(p).pow(alpha));
        }
        Ok(out)
    }

    /// `ϱ(n)` assembled from the local measures `μ` and lattice densities.
    pub fn varrho_assembled(&self, n: u64) -> Result<DensityValue> {
        if n == 0 {
            return Err(Error::Usage("n must be positive".into()));
        }
        let mut value = BigRational::one();
        for (p, a) in factor(n) {
            let series = self.local_varrho_series(p, a)?;
            value *= series[a as usize].clone();
        }
        Ok(DensityValue {
            value,
            provenance: Provenance::MultiplicativeAssembly,
        })
    }

    /// `ϱ*(p^α)`: primitive solutions of `p^α | f(x)` in `(Z/p^α)^{k−1}`.
    pub fn varrho_star(&self, p: u64, alpha: u32) -> Result<u128> {
        if !crate::arith::is_prime(p) {
            return Err(Error::Usage(format!("{p} is not prime")));
        }
        count_lifted(&self.form, p, alpha, true, 0, self.k as u32 * alpha.max(1))
    }

    /// Both sides of the valuation split
    /// `p^{ℓ(k−2)}ϱ(p^ℓ) = Σ_{kα<ℓ} p^{(k−1)²α}ϱ*(p^{ℓ−kα}) + p^{(ℓ−⌈ℓ/k⌉)(k−1)}`.
    pub fn valuation_split(&self, p: u64, ell: u32) -> Result<(BigInt, BigInt)> {
        let k = self.k as u32;
        let lhs = {
            let v = &self.local_varrho_series(p, ell)?[ell as usize];
            let scaled = v * BigInt::from(p).pow(ell * (k - 2));
            if !scaled.is_integer() {
                return Err(Error::InvalidSpec(format!("non-integral count at {p}^{ell}")));
            }
            scaled.to_integer()
        };
        let pb = BigInt::from(p);
        let mut rhs = pb.pow((ell - ell.div_ceil(k)) * (k - 1));
        let mut alpha = 0;
        while k * alpha < ell {
            let star = self.varrho_star(p, ell - k * alpha)?;
            rhs += pb.pow((k - 1) * (k - 1) * alpha) * BigInt::from(star);
            alpha += 1;
        }
        Ok((lhs, rhs))
    }

    /// Measures the constants in the prime-power, split and non-split
    /// density bounds over the given primes. `star_limit` caps `p^{α(k−1)}`
    /// for the primitive counts.
    pub fn check_density_bounds(&self, primes: &[u64], star_limit: u128) -> Result<DensityBounds> {
        let k = self.k as u32;
        let kf = k as f64;
        let mut out = DensityBounds {
            varrho_below_p: true,
            split_deficit_negative: true,
            ..Default::default()
        };
        for &p in primes {
            let pf = p as f64;
            let series = self.local_varrho_series(p, 2 * k)?;
            for (ell, v) in series.iter().enumerate() {
                let r = rat_f64(v) / libm::pow(pf, (ell as u32 / k) as f64);
                out.prime_power_const = out.prime_power_const.max(r);
            }
            let v1 = &series[1];
            if *v1 >= BigRational::from_integer(BigInt::from(p)) {
                out.varrho_below_p = false;
            }
            let v1f = rat_f64(v1);
            if self.split_prime(p)?.f == 1 {
                if *v1 >= BigRational::from_integer(BigInt::from(k)) {
                    out.split_deficit_negative = false;
                }
                out.split_const = out
                    .split_const
                    .max((v1f - kf).abs() * libm::pow(pf, 1.0 - 1.0 / kf));
            } else {
                out.nonsplit_const = out
                    .nonsplit_const
                    .max(v1f * libm::pow(pf, 1.0 - 2.0 / kf));
            }
            let mut alpha = 1;
            while (p as u128)
                .checked_pow(alpha * (k - 1))
                .is_some_and(|s| s <= star_limit)
            {
                let star = self.varrho_star(p, alpha)? as f64;
                out.primitive_const = out
                    .primitive_const
                    .max(star / libm::pow(pf, (alpha * (k - 2)) as f64));
                alpha += 1;
            }
            out.primes_checked += 1;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::FieldSpec;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cubic_small_values() {
        let f = Field::new(FieldSpec::cyclic_cubic()).unwrap();
        assert_eq!(f.varrho_direct(1).unwrap().value, r(1, 1));
        assert_eq!(f.varrho_direct(2).unwrap().value, r(1, 2));
        assert_eq!(f.varrho_direct(17).unwrap().value, r(49, 17));
        assert_eq!(f.varrho_assembled(17).unwrap().value, r(49, 17));
        assert_eq!(f.varrho_assembled(2).unwrap().value, r(1, 2));
        assert_eq!(f.varrho_star(17, 1).unwrap(), 48);
        assert_eq!(f.varrho_star(2, 1).unwrap(), 0);
        assert_eq!(f.varrho_star(5, 0).unwrap(), 1);
        let two = f.principal_ideal(&crate::AlgebraicInt::rational(3, 2)).unwrap();
        assert_eq!(f.rho_ideal(&two).value, r(2, 1));
        assert_eq!(f.rho_direct(&two, 1 << 20).unwrap().value, r(2, 1));
    }

    #[test]
    fn forward_differences_match_naive() {
        let f = Field::new(FieldSpec::biquadratic()).unwrap();
        for q in [2u64, 3, 4, 8, 9, 25] {
            let mut naive = 0;
            for_each_point(3, q as u128, |x| {
                let xi: Vec<u64> = x.iter().map(|&c| c as u64).collect();
                if f.fast_form.eval_mod(&xi, q) == 0 {
                    naive += 1;
                }
            });
            assert_eq!(count_zeros_mod(&f.fast_form, q), naive, "q = {q}");
        }
    }

    #[test]
    fn valuation_split_small() {
        let f = Field::new(FieldSpec::cyclic_cubic()).unwrap();
        for (p, ell) in [(2, 4), (3, 5), (17, 3), (7, 4)] {
            let (l, r) = f.valuation_split(p, ell).unwrap();
            assert_eq!(l, r, "p = {p}, ℓ = {ell}");
        }
    }

    #[test]
    fn assembled_matches_direct_prime_powers() {
        let f = Field::new(FieldSpec::biquadratic()).unwrap();
        for n in [2u64, 4, 8, 16, 3, 9, 27, 17, 5, 25] {
            assert_eq!(
                f.varrho_direct(n).unwrap().value,
                f.varrho_assembled(n).unwrap().value,
                "n = {n}"
            );
        }
    }
}
