//! Prime splitting (Dedekind–Kummer), ideals of given norm, the covers
//! `n*`, `n♯`, `n♭`, and the inclusion–exclusion coefficients `μ_n`.

use alloc::format;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{binomial, factor};
use crate::dd::Dd;
use crate::field::{AlgebraicInt, Field};
use crate::hnf::IdealHnf;
use crate::lll::{lll_gram, short_vectors};
use crate::polyfp;
use crate::{Error, Result};

/// A prime ideal `𝔭 = (p, g(θ))` above the rational prime `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdealRep {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    /// Position among the primes above `p`.
    pub index: usize,
    /// Monic irreducible factor of the minimal polynomial mod `p`.
    pub g: Vec<u64>,
    pub hnf: IdealHnf,
}

impl PrimeIdealRep {
    pub fn norm(&self) -> u128 {
        (self.p as u128).pow(self.f)
    }

    pub fn is_degree_one(&self) -> bool {
        self.f == 1
    }
}

/// Splitting type of a rational prime.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    pub r: u32,
    pub primes: Vec<PrimeIdealRep>,
}

/// An ideal as a product of prime powers `(p, index, exponent)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FactoredIdeal {
    pub parts: Vec<(u64, usize, u32)>,
}

/// Local inclusion–exclusion coefficients at one prime power `p^α`, indexed
/// by exponent vectors over the `r` primes above `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalMu {
    pub p: u64,
    pub alpha: u32,
    pub f: u32,
    pub r: u32,
    /// `⌈α/f⌉`.
    pub c: u32,
    pub coeffs: Vec<(Vec<u32>, i64)>,
}

/// The signed measure `μ_n` on ideals.
#[derive(Clone, Debug, PartialEq)]
pub struct MuCoefficients {
    pub n: u64,
    pub local: Vec<LocalMu>,
    /// Support with coefficients, sorted by HNF.
    pub entries: Vec<(IdealHnf, i64)>,
}

impl MuCoefficients {
    /// `Σ_𝔫 μ_n(𝔫)·1_{𝔫 | 𝔮}`.
    pub fn evaluate(&self, q: &IdealHnf) -> i64 {
        self.entries
            .iter()
            .filter(|(id, _)| id.divides(q))
            .map(|(_, c)| *c)
            .sum()
    }

    pub fn max_abs(&self) -> i64 {
        self.entries.iter().map(|(_, c)| c.abs()).max().unwrap_or(0)
    }
}

/// Coefficient at exponent vector `b` of the local measure with threshold
/// `c`: `Σ_{ε ∈ {0,1}^r, ε ≤ b} (−1)^{|ε|}·[Σ(b − ε) ≥ c]`.
pub fn local_mu_value(b: &[u32], c: u32) -> i64 {
    let s: u32 = b.iter().sum();
    let m = b.iter().filter(|&&x| x > 0).count() as u64;
    let mut acc = 0i64;
    for t in 0..=m {
        if s >= c + t as u32 {
            let term = binomial(m, t) as i64;
            acc += if t % 2 == 0 { term } else { -term };
        }
    }
    acc
}

/// Iterates over `[0, c]^r` in lexicographic order.
pub fn exponent_box(r: usize, c: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut b = vec![0u32; r];
    loop {
        out.push(b.clone());
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if b[i] < c {
                b[i] += 1;
                for x in b.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                break;
            }
        }
    }
}

pub fn local_mu(p: u64, alpha: u32, f: u32, r: u32) -> LocalMu {
    let c = alpha.div_ceil(f);
    let coeffs = if alpha == 0 {
        vec![(vec![0; r as usize], 1)]
    } else {
        exponent_box(r as usize, c)
            .into_iter()
            .filter_map(|b| {
                let v = local_mu_value(&b, c);
                (v != 0).then_some((b, v))
            })
            .collect()
    };
    LocalMu {
        p,
        alpha,
        f,
        r,
        c,
        coeffs,
    }
}

impl Field {
    /// Factors the minimal polynomial modulo `p`; cached.
    pub fn split_prime(&self, p: u64) -> Result<Arc<Splitting>> {
        if let Some(s) = self.split_cache.read().get(&p) {
            return Ok(s.clone());
        }
        let s = Arc::new(self.compute_splitting(p)?);
        self.split_cache.write().entry(p).or_insert_with(|| s.clone());
        Ok(s)
    }

    fn compute_splitting(&self, p: u64) -> Result<Splitting> {
        if !crate::arith::is_prime(p) {
            return Err(Error::Usage(format!("{p} is not prime")));
        }
        if p as i128 >= crate::hnf::MODULUS_LIMIT {
            return Err(Error::Overflow("prime too large for ideal arithmetic"));
        }
        let k = self.k;
        let m: Vec<i128> = self
            .spec
            .min_poly
            .iter()
            .map(|c| c.mod_floor(&BigInt::from(p)).to_i128().unwrap())
            .collect();
        let mbar = polyfp::from_ints(&m, p);
        let factors = polyfp::factor(&mbar, p, self.seed);
        let e = factors[0].1;
        let f = (factors[0].0.len() - 1) as u32;
        if factors.iter().any(|(g, m)| *m != e || (g.len() - 1) as u32 != f) {
            return Err(Error::UnsupportedField(format!(
                "non-uniform splitting at p = {p}; the field is not Galois"
            )));
        }
        let pi = p as i128;
        let mut primes = Vec::with_capacity(factors.len());
        for (index, (g, _)) in factors.into_iter().enumerate() {
            // g(θ) in integral-basis coordinates.
            let mut elt = vec![0i128; k];
            // An inert prime has g equal to the minimal polynomial.
            let gr = polyfp::rem(&g, &mbar, p);
            for (j, &gj) in gr.iter().enumerate() {
                for (i, c) in self.theta_pow[j].iter().enumerate() {
                    let ci = c.mod_floor(&BigInt::from(p)).to_i128().unwrap();
                    elt[i] = (elt[i] + gj as i128 * ci) % pi;
                }
            }
            let gens: Vec<Vec<i128>> = (0..k)
                .map(|j| {
                    let mut ej = vec![0i128; k];
                    ej[j] = 1;
                    crate::hnf::mul_mod(&elt, &ej, &self.spec.tensor, pi)
                })
                .collect();
            let hnf = IdealHnf::from_generators(&gens, pi, k)?;
            if hnf.norm() != BigInt::from(p).pow(f) {
                return Err(Error::UnsupportedField(format!(
                    "Dedekind criterion fails at p = {p}"
                )));
            }
            primes.push(PrimeIdealRep {
                p,
                e,
                f,
                index,
                g,
                hnf,
            });
        }
        let r = primes.len() as u32;
        if e * f * r != k as u32 {
            return Err(Error::InvalidSpec(format!("e·f·r ≠ k at p = {p}")));
        }
        Ok(Splitting { p, e, f, r, primes })
    }

    pub fn ideal_product(&self, a: &IdealHnf, b: &IdealHnf) -> Result<IdealHnf> {
        a.product(b, &self.spec.tensor)
    }

    pub fn ideal_power(&self, a: &IdealHnf, e: u32) -> Result<IdealHnf> {
        let mut acc = IdealHnf::unit(self.k);
        for _ in 0..e {
            acc = self.ideal_product(&acc, a)?;
        }
        Ok(acc)
    }

    /// `∏ 𝔭_i^{b_i}` over the primes above `p`.
    pub fn local_ideal(&self, split: &Splitting, b: &[u32]) -> Result<IdealHnf> {
        let mut acc = IdealHnf::unit(self.k);
        for (pr, &bi) in split.primes.iter().zip(b) {
            for _ in 0..bi {
                acc = self.ideal_product(&acc, &pr.hnf)?;
            }
        }
        Ok(acc)
    }

    pub fn ideal_from_factors(&self, fac: &FactoredIdeal) -> Result<IdealHnf> {
        let mut acc = IdealHnf::unit(self.k);
        for &(p, idx, e) in &fac.parts {
            let s = self.split_prime(p)?;
            let pr = s
                .primes
                .get(idx)
                .ok_or_else(|| Error::Usage(format!("no prime #{idx} above {p}")))?;
            for _ in 0..e {
                acc = self.ideal_product(&acc, &pr.hnf)?;
            }
        }
        Ok(acc)
    }

    /// Prime factorization of an ideal by trial division with the primes
    /// above each rational prime dividing its norm.
    pub fn factor_ideal(&self, id: &IdealHnf) -> Result<FactoredIdeal> {
        let n = id
            .norm()
            .to_u64()
            .ok_or(Error::Overflow("ideal norm for factorization"))?;
        let mut parts = Vec::new();
        for (p, _) in factor(n) {
            let s = self.split_prime(p)?;
            for pr in &s.primes {
                let mut pw = pr.hnf.clone();
                let mut e = 0;
                while pw.divides(id) {
                    e += 1;
                    pw = self.ideal_product(&pw, &pr.hnf)?;
                }
                if e > 0 {
                    parts.push((p, pr.index, e));
                }
            }
        }
        Ok(FactoredIdeal { parts })
    }

    /// `a_K(n)` without constructing the ideals.
    pub fn count_ideals_of_norm(&self, n: u64) -> Result<u64> {
        let mut count = 1u64;
        for (p, alpha) in factor(n) {
            let s = self.split_prime(p)?;
            if alpha % s.f != 0 {
                return Ok(0);
            }
            let a = (alpha / s.f) as u64;
            count *= binomial(a + s.r as u64 - 1, s.r as u64 - 1);
        }
        Ok(count)
    }

    /// Exponent vectors over the primes above `p` with `f·Σb = α`.
    fn local_vectors_of_norm(&self, split: &Splitting, alpha: u32) -> Vec<Vec<u32>> {
        if alpha % split.f != 0 {
            return Vec::new();
        }
        let a = alpha / split.f;
        exponent_box(split.r as usize, a)
            .into_iter()
            .filter(|b| b.iter().sum::<u32>() == a)
            .collect()
    }

    /// All ideals of norm `n`, sorted.
    pub fn ideals_of_norm(&self, n: u64) -> Result<Vec<IdealHnf>> {
        if n == 0 {
            return Err(Error::Usage("norm must be positive".to_string()));
        }
        let mut acc = vec![IdealHnf::unit(self.k)];
        for (p, alpha) in factor(n) {
            let s = self.split_prime(p)?;
            let local: Vec<IdealHnf> = self
                .local_vectors_of_norm(&s, alpha)
                .iter()
                .map(|b| self.local_ideal(&s, b))
                .collect::<Result<_>>()?;
            let mut next = Vec::with_capacity(acc.len() * local.len());
            for a in &acc {
                for l in &local {
                    next.push(self.ideal_product(a, l)?);
                }
            }
            acc = next;
        }
        acc.sort();
        Ok(acc)
    }

    /// `(n*, n♯, n♭)`.
    pub fn star_sharp_flat(&self, n: u64) -> Result<(u128, u64, u64)> {
        let mut star = 1u128;
        let mut sharp = 1u64;
        let mut flat = 1u64;
        for (p, alpha) in factor(n) {
            let s = self.split_prime(p)?;
            let e = s.f * alpha.div_ceil(s.f);
            star = star
                .checked_mul((p as u128).pow(e))
                .ok_or(Error::Overflow("n*"))?;
            if s.f == 1 {
                sharp *= p.pow(alpha);
            } else {
                flat *= p.pow(alpha);
            }
        }
        Ok((star, sharp, flat))
    }

    /// Local coefficients of `μ_n` for every prime power exactly dividing `n`.
    pub fn local_mu_of(&self, n: u64) -> Result<Vec<LocalMu>> {
        factor(n)
            .into_iter()
            .map(|(p, alpha)| {
                let s = self.split_prime(p)?;
                Ok(local_mu(p, alpha, s.f, s.r))
            })
            .collect()
    }

    /// `μ_n`, glued multiplicatively from the local coefficients.
    pub fn mu_coefficients(&self, n: u64) -> Result<MuCoefficients> {
        if n == 0 {
            return Err(Error::Usage("n must be positive".to_string()));
        }
        let local = self.local_mu_of(n)?;
        let mut entries = vec![(IdealHnf::unit(self.k), 1i64)];
        for lm in &local {
            let s = self.split_prime(lm.p)?;
            let mut next = Vec::new();
            for (b, c) in &lm.coeffs {
                let id = self.local_ideal(&s, b)?;
                for (a, ca) in &entries {
                    next.push((self.ideal_product(a, &id)?, ca * c));
                }
            }
            entries = next;
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(MuCoefficients { n, local, entries })
    }

    /// `𝔫 | (x)`, i.e. `x ∈ 𝔫`.
    pub fn divides(&self, n: &IdealHnf, x: &AlgebraicInt) -> Result<bool> {
        if x.degree() != self.k || n.degree() != self.k {
            return Err(Error::FieldMismatch);
        }
        Ok(n.contains_big(&x.coords))
    }

    pub fn principal_ideal(&self, g: &AlgebraicInt) -> Result<IdealHnf> {
        if g.is_zero() {
            return Err(Error::Usage("zero ideal".to_string()));
        }
        let n = self
            .norm(g)
            .abs()
            .to_i128()
            .ok_or(Error::Overflow("principal ideal norm"))?;
        let gi = g
            .to_i128s()
            .ok_or(Error::Overflow("generator coordinates"))?;
        IdealHnf::principal(&gi, n, &self.spec.tensor)
    }

    /// A balanced generator of a principal ideal: LLL in the `T2` metric,
    /// Fincke–Pohst with a growing bound until an element of norm `N𝔫`
    /// appears, then unit balancing.
    pub fn principal_generator(&self, n: &IdealHnf) -> Result<AlgebraicInt> {
        let k = self.k;
        let norm = n.norm();
        if norm.is_one() {
            return Ok(AlgebraicInt::one(k));
        }
        let a = n.min_integer();
        if BigInt::from(a).pow(k as u32) == norm {
            return Ok(AlgebraicInt::rational(k, a as i64));
        }
        // Columns of 𝔫 as elements.
        let cols: Vec<Vec<BigInt>> = n
            .columns()
            .iter()
            .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let gram_dd = |rows: &[Vec<BigInt>]| -> Vec<Vec<Dd>> {
            let emb: Vec<Vec<crate::dd::CDd>> = rows
                .iter()
                .map(|r| self.emb.embed(&AlgebraicInt::new(r.clone())))
                .collect();
            (0..rows.len())
                .map(|i| {
                    (0..rows.len())
                        .map(|j| {
                            let mut s = Dd::ZERO;
                            for (x, y) in emb[i].iter().zip(&emb[j]) {
                                s += (*x * y.conj()).re;
                            }
                            s
                        })
                        .collect()
                })
                .collect()
        };
        let g0 = gram_dd(&cols);
        let scale = Dd::from_f64((1u64 << 40) as f64) / g0[0][0];
        let mut gint: Vec<Vec<BigInt>> = g0
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| BigInt::from(libm::round((*x * scale).to_f64()) as i128))
                    .collect()
            })
            .collect();
        let u = lll_gram(&mut gint);
        let reduced = crate::lll::apply(&u, &cols);
        let g = gram_dd(&reduced);
        let gf: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect();
        let nf = norm.to_f64().unwrap();
        let base = k as f64 * libm::pow(nf, 2.0 / k as f64);
        let cap = base * libm::exp(2.0 * self.unit_data.b_k) * 4.0;
        let mut bound = base * 1.05;
        while bound <= cap * 2.0 {
            let found = short_vectors(&gf, bound, 200_000)
                .ok_or_else(|| Error::SearchBound("too many short vectors".to_string()))?;
            let mut cands: Vec<(f64, AlgebraicInt)> = Vec::new();
            for c in &found {
                let coords: Vec<BigInt> = (0..k)
                    .map(|col| {
                        c.iter()
                            .zip(&reduced)
                            .map(|(ci, row)| BigInt::from(*ci) * &row[col])
                            .sum()
                    })
                    .collect();
                let x = AlgebraicInt::new(coords);
                if self.norm(&x).abs() == norm {
                    let t2: f64 = (0..k)
                        .map(|i| (0..k).map(|j| c[i] as f64 * c[j] as f64 * gf[i][j]).sum::<f64>())
                        .sum();
                    cands.push((t2, x));
                }
            }
            if !cands.is_empty() {
                cands.sort_by(|a, b| {
                    a.0.partial_cmp(&b.0)
                        .unwrap()
                        .then_with(|| a.1.cmp(&b.1))
                });
                let g = self.balance_generator(&cands[0].1)?;
                return Ok(canonical_sign(g));
            }
            bound *= 2.0;
        }
        Err(Error::SearchBound(format!(
            "no generator of norm {norm} up to T2 = {cap:.3e}"
        )))
    }

    /// Rational primes up to `limit` with degree-one primes above them.
    pub fn degree_one_primes(&self, limit: u64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for p in crate::arith::primes_up_to(limit) {
            if self.split_prime(p)?.f == 1 {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Whether `p` has residue degree one, without building ideals.
    pub fn is_degree_one_prime(&self, p: u64) -> bool {
        if let Some(s) = self.split_cache.read().get(&p) {
            return s.f == 1;
        }
        let m: Vec<i128> = self
            .spec
            .min_poly
            .iter()
            .map(|c| c.mod_floor(&BigInt::from(p)).to_i128().unwrap())
            .collect();
        polyfp::has_root(&polyfp::from_ints(&m, p), p)
    }
}

/// Picks the sign making the first nonzero coordinate positive.
fn canonical_sign(g: AlgebraicInt) -> AlgebraicInt {
    match g.coords.iter().find(|c| !c.is_zero()) {
        Some(c) if c.is_negative() => g.neg(),
        _ => g,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::FieldSpec;

    fn cubic() -> Field {
        Field::new(FieldSpec::cyclic_cubic()).unwrap()
    }

    fn quartic() -> Field {
        Field::new(FieldSpec::biquadratic()).unwrap()
    }

    #[test]
    fn splitting_types() {
        let q = quartic();
        let s = q.split_prime(17).unwrap();
        assert_eq!((s.e, s.f, s.r), (1, 1, 4));
        let s = q.split_prime(3).unwrap();
        assert_eq!((s.e, s.f, s.r), (1, 2, 2));
        let s = q.split_prime(2).unwrap();
        assert_eq!((s.e, s.f, s.r), (4, 1, 1));
        let c = cubic();
        let s = c.split_prime(2).unwrap();
        assert_eq!((s.e, s.f, s.r), (1, 3, 1));
        let s = c.split_prime(3).unwrap();
        assert_eq!((s.e, s.f, s.r), (3, 1, 1));
    }

    #[test]
    fn ideal_counts() {
        let q = quartic();
        assert_eq!(q.ideals_of_norm(1).unwrap().len(), 1);
        assert_eq!(q.ideals_of_norm(3).unwrap().len(), 0);
        assert_eq!(q.ideals_of_norm(9).unwrap().len(), 2);
        assert_eq!(q.ideals_of_norm(17).unwrap().len(), 4);
        assert_eq!(q.count_ideals_of_norm(17 * 17).unwrap(), 10);
    }

    #[test]
    fn covers() {
        let c = cubic();
        assert_eq!(c.star_sharp_flat(2).unwrap(), (8, 1, 2));
        assert_eq!(c.star_sharp_flat(1).unwrap(), (1, 1, 1));
        assert_eq!(c.star_sharp_flat(17 * 19).unwrap(), (17 * 19, 17 * 19, 1));
    }

    #[test]
    fn mu_for_split_and_inert() {
        let c = cubic();
        let mu = c.mu_coefficients(17).unwrap();
        assert_eq!(mu.entries.len(), 7);
        for (id, coef) in &mu.entries {
            let s = c.factor_ideal(id).unwrap().parts.len() as i64;
            assert_eq!(*coef, if s % 2 == 1 { 1 } else { -1 });
        }
        let mu2 = c.mu_coefficients(2).unwrap();
        assert_eq!(mu2.entries.len(), 1);
        assert_eq!(mu2.entries[0].0.norm(), BigInt::from(8));
        assert_eq!(mu2.entries[0].1, 1);
    }

    #[test]
    fn degree_one_membership_is_linear_congruence() {
        let c = cubic();
        let s = c.split_prime(17).unwrap();
        for pr in &s.primes {
            // g = θ − root, so θ ≡ root mod 𝔭.
            let root = (17 - pr.g[0]) % 17;
            for x1 in -20i128..20 {
                for x2 in -20i128..20 {
                    let inside = pr.hnf.contains(&[x1, x2, 0]);
                    assert_eq!(inside, (x1 + root as i128 * x2).rem_euclid(17) == 0);
                }
            }
        }
    }

    #[test]
    fn generator_of_prime_over_two_in_quartic() {
        let q = quartic();
        let s = q.split_prime(2).unwrap();
        let g = q.principal_generator(&s.primes[0].hnf).unwrap();
        assert_eq!(q.norm(&g).abs(), BigInt::from(2));
        assert_eq!(q.principal_ideal(&g).unwrap(), s.primes[0].hnf);
    }
}
