//! Segmented sieving of `τ_k`, the exact sum `M(R_X)`, the sharp-cutoff
//! hyperbola decomposition and the Wolke-average diagnostic.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{binomial, factor, iroot, primes_up_to, tau_prime_power};
use crate::field::Field;
use crate::region::Region;
use crate::{Error, Result};

/// Default number of integers per sieve segment.
pub const SEGMENT: usize = 1 << 22;

/// Primes up to `√limit`, shared read-only by all segments.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    pub limit: u64,
    pub primes: Vec<u64>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> PrimeTable {
        let r = iroot(limit as u128, 2) as u64 + 1;
        PrimeTable {
            limit,
            primes: primes_up_to(r),
        }
    }
}

/// Powers `p, p², …` not exceeding `b`.
fn powers_upto(p: u64, b: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = p;
    loop {
        out.push(q);
        match q.checked_mul(p) {
            Some(n) if n <= b => q = n,
            _ => return out,
        }
    }
}

/// Visits every `(index, p, exponent)` with `p^exponent ∥ a + index` for the
/// primes of `table`, each pair exactly once. No divisions in the inner loop:
/// higher powers are processed first and a per-entry stamp skips the lower
/// multiples of the same prime.
fn stamp_sieve(table: &PrimeTable, a: u64, b: u64, stamp: &mut [u32], mut hit: impl FnMut(usize, u64, u32, u64)) {
    stamp.fill(0);
    for &p in &table.primes {
        if p * p > b {
            break;
        }
        let pw = powers_upto(p, b);
        for (j, &q) in pw.iter().enumerate().rev() {
            let first = a.div_ceil(q) * q;
            let mut m = first;
            while m <= b {
                let i = (m - a) as usize;
                if stamp[i] != p as u32 {
                    stamp[i] = p as u32;
                    hit(i, p, j as u32 + 1, q);
                }
                m += q;
            }
        }
    }
}

/// `τ_k(n)` for `n ∈ [a, b]` written into `tau` (cleared and resized).
pub fn sieve_tau_into(
    table: &PrimeTable,
    a: u64,
    b: u64,
    k: u32,
    tau: &mut Vec<u64>,
    found: &mut Vec<u64>,
    stamp: &mut Vec<u32>,
) -> Result<()> {
    check_window(table, a, b)?;
    let len = (b - a + 1) as usize;
    tau.clear();
    tau.resize(len, 1);
    found.clear();
    found.resize(len, 1);
    stamp.resize(len, 0);
    let tk: Vec<u64> = (0..64).map(|j| tau_prime_power(j, k)).collect();
    stamp_sieve(table, a, b, stamp, |i, _, j, q| {
        tau[i] *= tk[j as usize];
        found[i] *= q;
    });
    for (i, (t, f)) in tau.iter_mut().zip(found.iter()).enumerate() {
        if *f != a + i as u64 {
            *t *= k as u64;
        }
    }
    if a == 0 {
        tau[0] = 0;
    }
    Ok(())
}

fn check_window(table: &PrimeTable, a: u64, b: u64) -> Result<()> {
    if a > b {
        return Err(Error::Usage("empty sieve window".into()));
    }
    if b > table.limit {
        return Err(Error::BudgetExceeded {
            what: "sieve limit",
            needed: b as u128,
            budget: table.limit as u128,
        });
    }
    if b - a + 1 > u32::MAX as u64 {
        return Err(Error::BudgetExceeded {
            what: "sieve segment",
            needed: (b - a + 1) as u128,
            budget: u32::MAX as u128,
        });
    }
    Ok(())
}

/// A sieved interval with complete factorizations in compressed rows.
#[derive(Clone, Debug)]
pub struct DivisorWindow {
    pub start: u64,
    pub k: u32,
    tau: Vec<u64>,
    offsets: Vec<u32>,
    factors: Vec<(u64, u32)>,
}

impl DivisorWindow {
    pub fn sieve(table: &PrimeTable, a: u64, b: u64, k: u32, max_len: usize) -> Result<DivisorWindow> {
        check_window(table, a, b)?;
        let len = (b - a + 1) as usize;
        if len > max_len {
            return Err(Error::BudgetExceeded {
                what: "sieve segment",
                needed: len as u128,
                budget: max_len as u128,
            });
        }
        let mut stamp = vec![0u32; len];
        let mut found = vec![1u64; len];
        let mut counts = vec![0u32; len];
        stamp_sieve(table, a, b, &mut stamp, |i, _, _, q| {
            counts[i] += 1;
            found[i] *= q;
        });
        let mut offsets = Vec::with_capacity(len + 1);
        offsets.push(0u32);
        for i in 0..len {
            let extra = u32::from(found[i] != a + i as u64 && a + i as u64 > 1);
            offsets.push(offsets[i] + counts[i] + extra);
        }
        let mut factors = vec![(0u64, 0u32); *offsets.last().unwrap() as usize];
        let mut fill: Vec<u32> = offsets[..len].to_vec();
        stamp_sieve(table, a, b, &mut stamp, |i, p, j, _| {
            factors[fill[i] as usize] = (p, j);
            fill[i] += 1;
        });
        let mut tau = vec![1u64; len];
        for i in 0..len {
            let n = a + i as u64;
            if n == 0 {
                tau[i] = 0;
                continue;
            }
            if found[i] != n {
                factors[fill[i] as usize] = (n / found[i], 1);
            }
            let (s, e) = (offsets[i] as usize, offsets[i + 1] as usize);
            tau[i] = factors[s..e].iter().map(|&(_, j)| tau_prime_power(j, k)).product();
        }
        Ok(DivisorWindow {
            start: a,
            k,
            tau,
            offsets,
            factors,
        })
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn end(&self) -> u64 {
        self.start + self.tau.len() as u64 - 1
    }

    pub fn tau_k(&self, n: u64) -> u64 {
        self.tau[(n - self.start) as usize]
    }

    /// Prime factorization of `n`, increasing primes.
    pub fn factorization(&self, n: u64) -> &[(u64, u32)] {
        let i = (n - self.start) as usize;
        &self.factors[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    pub fn omega(&self, n: u64) -> usize {
        self.factorization(n).len()
    }
}

/// The divisors of `n` in mixed radix over its exponents, so that `e | d`
/// is a componentwise comparison and `d/e` is an index difference.
#[derive(Clone, Debug)]
pub struct DivisorLattice {
    pub exps: Vec<u32>,
    strides: Vec<usize>,
    pub values: Vec<u64>,
    digits: Vec<Vec<u32>>,
}

impl DivisorLattice {
    pub fn new(fac: &[(u64, u32)]) -> DivisorLattice {
        let exps: Vec<u32> = fac.iter().map(|f| f.1).collect();
        let mut strides = vec![1usize; fac.len()];
        for i in (0..fac.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (exps[i + 1] as usize + 1);
        }
        let size: usize = exps.iter().map(|&e| e as usize + 1).product();
        let mut values = Vec::with_capacity(size);
        let mut digits = Vec::with_capacity(size);
        for idx in 0..size {
            let mut v = 1u64;
            let mut d = Vec::with_capacity(fac.len());
            for (i, &(p, _)) in fac.iter().enumerate() {
                let di = (idx / strides[i]) % (exps[i] as usize + 1);
                d.push(di as u32);
                v *= p.pow(di as u32);
            }
            values.push(v);
            digits.push(d);
        }
        DivisorLattice {
            exps,
            strides,
            values,
            digits,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn top(&self) -> usize {
        self.values.len() - 1
    }

    fn divides(&self, e: usize, d: usize) -> bool {
        self.digits[e].iter().zip(&self.digits[d]).all(|(a, b)| a <= b)
    }

    /// `τ_j` at every divisor.
    pub fn tau(&self, j: u32) -> Vec<u64> {
        if j == 0 {
            let mut out = vec![0u64; self.len()];
            out[0] = 1;
            return out;
        }
        self.digits
            .iter()
            .map(|d| d.iter().map(|&a| tau_prime_power(a, j)).product())
            .collect()
    }

    /// Dirichlet convolution restricted to the divisors of `n`.
    pub fn convolve(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.len()];
        for d in 0..self.len() {
            for e in 0..self.len() {
                if a[e] != 0 && self.divides(e, d) {
                    out[d] += a[e] * b[d - e];
                }
            }
        }
        out
    }

    /// Ordered `count`-tuples of divisors satisfying `keep` with the given product.
    pub fn tuples(&self, count: u32, keep: impl Fn(u64) -> bool) -> Vec<u64> {
        let unit: Vec<u64> = self.values.iter().map(|&v| u64::from(keep(v))).collect();
        let mut acc = self.tau(0);
        for _ in 0..count {
            acc = self.convolve(&unit, &acc);
        }
        acc
    }

    pub fn index_of_digits(&self, digits: &[u32]) -> usize {
        digits.iter().zip(&self.strides).map(|(&d, &s)| d as usize * s).sum()
    }
}

/// `(−1)^{j−1}·C(k, j)`.
pub fn hyperbola_sign(k: u32, j: u32) -> i128 {
    let c = binomial(k as u64, j as u64) as i128;
    if j % 2 == 1 {
        c
    } else {
        -c
    }
}

/// `τ_k(n) = A + Σ_{j=1}^{k} (−1)^{j−1}C(k,j)·B_j` with `A` the tuples with all
/// entries `≤ y` and `B_j` those with `n_1, …, n_j > y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTerms {
    pub n: u64,
    pub y: u64,
    pub k: u32,
    pub all_small: u64,
    /// `B_1, …, B_k`.
    pub large: Vec<u64>,
}

impl DecompositionTerms {
    pub fn total(&self) -> i128 {
        self.all_small as i128
            + self
                .large
                .iter()
                .enumerate()
                .map(|(j, &b)| hyperbola_sign(self.k, j as u32 + 1) * b as i128)
                .sum::<i128>()
    }
}

pub fn hyperbola_decompose_factored(n: u64, fac: &[(u64, u32)], y: u64, k: u32) -> DecompositionTerms {
    let lat = DivisorLattice::new(fac);
    let top = lat.top();
    let all_small = lat.tuples(k, |v| v <= y)[top];
    let big = lat.values.iter().map(|&v| u64::from(v > y)).collect::<Vec<_>>();
    let mut g = lat.tau(0);
    let mut large = Vec::with_capacity(k as usize);
    for j in 1..=k {
        g = lat.convolve(&big, &g);
        let rest = lat.tau(k - j);
        large.push(lat.convolve(&g, &rest)[top]);
    }
    DecompositionTerms {
        n,
        y,
        k,
        all_small,
        large,
    }
}

pub fn hyperbola_decompose(n: u64, y: u64, k: u32) -> Result<DecompositionTerms> {
    if n == 0 || y == 0 {
        return Err(Error::Usage("n and y must be positive".into()));
    }
    Ok(hyperbola_decompose_factored(n, &factor(n), y, k))
}

/// Sharp-cutoff parameters: `y = XΔ`, `m ≤ 2X^{k−1}/Δ` for the main terms
/// and `X^{k−1}/Δ ≤ m ≤ 2X^{k−1}` for the boundary population.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cutoffs {
    pub x: u64,
    pub delta: u64,
    pub k: u32,
}

impl Cutoffs {
    pub fn y(&self) -> u64 {
        self.x * self.delta
    }

    fn xk1(&self) -> u128 {
        (self.x as u128).pow(self.k - 1)
    }

    /// `m ≤ 2X^{k−1}/Δ`.
    pub fn main_range(&self, m: u64) -> bool {
        m as u128 * self.delta as u128 <= 2 * self.xk1()
    }

    /// `X^{k−1}/Δ ≤ m ≤ 2X^{k−1}`.
    pub fn boundary_range(&self, m: u64) -> bool {
        m as u128 * self.delta as u128 >= self.xk1() && m as u128 <= 2 * self.xk1()
    }
}

/// Per-value contributions to the decomposition of `M(R_X)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SharpTerms {
    pub tau: u128,
    /// `M_1, …, M_{k−1}` (indexed from 0).
    pub m: Vec<u128>,
    /// Tuples counted by `M_j` with `n_1 ≤ y`.
    pub u: Vec<u128>,
    /// Tuples with every entry `≤ y`.
    pub all_small: u128,
    /// `Σ τ_{k−1}(m)` over boundary-range divisors `m`.
    pub e: u128,
}

impl SharpTerms {
    pub fn zero(k: u32) -> SharpTerms {
        SharpTerms {
            m: vec![0; k as usize - 1],
            u: vec![0; k as usize - 1],
            ..Default::default()
        }
    }

    pub fn add(&mut self, o: &SharpTerms) {
        self.tau += o.tau;
        self.all_small += o.all_small;
        self.e += o.e;
        for (a, b) in self.m.iter_mut().zip(&o.m) {
            *a += b;
        }
        for (a, b) in self.u.iter_mut().zip(&o.u) {
            *a += b;
        }
    }

    pub fn k(&self) -> u32 {
        self.m.len() as u32 + 1
    }

    /// `Σ_j (−1)^{j−1}C(k,j) M_j`.
    pub fn signed_main(&self) -> i128 {
        let k = self.k();
        self.m
            .iter()
            .enumerate()
            .map(|(j, &v)| hyperbola_sign(k, j as u32 + 1) * v as i128)
            .sum()
    }

    /// `A − Σ_j (−1)^{j−1}C(k,j) U_j`: what the sharp main terms miss.
    pub fn correction(&self) -> i128 {
        let k = self.k();
        self.all_small as i128
            - self
                .u
                .iter()
                .enumerate()
                .map(|(j, &v)| hyperbola_sign(k, j as u32 + 1) * v as i128)
                .sum::<i128>()
    }

    /// `(k + 2^k − 2)·E`, a bound for `|correction|`.
    pub fn correction_bound(&self) -> u128 {
        let k = self.k();
        (k as u128 + (1u128 << k) - 2) * self.e
    }
}

/// Decomposition terms of a single value `n = f(x)` with `X^k ≤ n ≤ 2X^k`.
pub fn sharp_terms_for_value(n: u64, fac: &[(u64, u32)], c: &Cutoffs) -> SharpTerms {
    let k = c.k;
    let y = c.y();
    let lat = DivisorLattice::new(fac);
    let top = lat.top();
    let mut out = SharpTerms::zero(k);
    out.tau = lat.tau(k)[top] as u128;
    out.all_small = lat.tuples(k, |v| v <= y)[top] as u128;
    let tk1 = lat.tau(k - 1);
    let big: Vec<u64> = lat.values.iter().map(|&v| u64::from(v > y)).collect();
    // G_{j−1}: ordered (j−1)-tuples of entries > y.
    let mut g = lat.tau(0);
    for j in 1..k {
        if j > 1 {
            g = lat.convolve(&big, &g);
        }
        // c_j(m): (k−1)-tuples with product m whose first j−1 entries exceed y.
        let cj = lat.convolve(&g, &lat.tau(k - j));
        for (idx, &m) in lat.values.iter().enumerate() {
            if cj[idx] == 0 || !c.main_range(m) {
                continue;
            }
            out.m[j as usize - 1] += cj[idx] as u128;
            if n / m <= y {
                out.u[j as usize - 1] += cj[idx] as u128;
            }
        }
    }
    for (idx, &m) in lat.values.iter().enumerate() {
        if c.boundary_range(m) {
            out.e += tk1[idx] as u128;
        }
    }
    out
}

/// Every `f(x)` for `x ∈ R_X ∩ Z^{k−1}`, restricted to outer coordinate
/// values in `outer` (inclusive), in enumeration order.
pub fn region_values(
    field: &Field,
    region: &Region,
    x: u64,
    outer: Option<(i128, i128)>,
    budget: u128,
) -> Result<Vec<u64>> {
    let k = field.degree();
    if region.dim() + 1 != k {
        return Err(Error::FieldMismatch);
    }
    if !region.fast_path_ok(field, x) {
        return Err(Error::Overflow("region too large for the i128 fast path"));
    }
    let xk = (x as i128).checked_pow(k as u32).ok_or(Error::Overflow("X^k"))?;
    if 2 * xk > u64::MAX as i128 {
        return Err(Error::Overflow("2X^k exceeds u64"));
    }
    let d = k - 1;
    let mut ranges: Vec<(i128, i128)> = (0..d).map(|i| region.int_range(i, x)).collect();
    if let Some((a, b)) = outer {
        ranges[d - 1] = (ranges[d - 1].0.max(a), ranges[d - 1].1.min(b));
    }
    let total: u128 = ranges.iter().map(|(a, b)| (b - a + 1).max(0) as u128).product();
    if total > budget {
        return Err(Error::BudgetExceeded {
            what: "region points",
            needed: total,
            budget,
        });
    }
    let mut out = Vec::new();
    if ranges.iter().any(|(a, b)| a > b) {
        return Ok(out);
    }
    let mut p: Vec<i128> = ranges.iter().map(|r| r.0).collect();
    loop {
        let v = field.incomplete_norm_i128(&p);
        if v >= xk && v <= 2 * xk {
            out.push(v as u64);
        }
        let mut i = 0;
        loop {
            if i == d {
                return Ok(out);
            }
            p[i] += 1;
            if p[i] <= ranges[i].1 {
                break;
            }
            p[i] = ranges[i].0;
            i += 1;
        }
    }
}

/// `Σ τ_k(v)` over `values`, sieving only the segments that contain values.
pub fn sum_tau_over_values(table: &PrimeTable, values: &[u64], k: u32, segment: usize) -> Result<u128> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let mut total = 0u128;
    let (mut tau, mut found, mut stamp) = (Vec::new(), Vec::new(), Vec::new());
    let mut i = 0;
    while i < sorted.len() {
        let a = sorted[i];
        let b = a.saturating_add(segment as u64 - 1).min(table.limit);
        sieve_tau_into(table, a, b, k, &mut tau, &mut found, &mut stamp)?;
        while i < sorted.len() && sorted[i] <= b {
            total += tau[(sorted[i] - a) as usize] as u128;
            i += 1;
        }
    }
    Ok(total)
}

/// Exact `M(R_X) = Σ_{x ∈ R_X} τ_k(f(x))`, serially.
pub fn m_exact(field: &Field, region: &Region, x: u64, budget: u128, segment: usize) -> Result<u128> {
    let values = region_values(field, region, x, None, budget)?;
    if values.is_empty() {
        return Ok(0);
    }
    let k = field.degree() as u32;
    let table = PrimeTable::new(2 * (x as u64).pow(k));
    sum_tau_over_values(&table, &values, k, segment)
}

/// Accumulates [`SharpTerms`] over `values` using sieved factorizations.
pub fn sharp_terms_over_values(
    table: &PrimeTable,
    values: &[u64],
    c: &Cutoffs,
    segment: usize,
) -> Result<SharpTerms> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let mut acc = SharpTerms::zero(c.k);
    let mut i = 0;
    while i < sorted.len() {
        let a = sorted[i];
        let b = a.saturating_add(segment as u64 - 1).min(table.limit);
        let w = DivisorWindow::sieve(table, a, b, c.k, segment)?;
        while i < sorted.len() && sorted[i] <= b {
            let n = sorted[i];
            acc.add(&sharp_terms_for_value(n, w.factorization(n), c));
            i += 1;
        }
    }
    Ok(acc)
}

/// `M_j`, `E` and the correction population for `R_X` with `y = XΔ`.
pub fn sharp_decomposition(
    field: &Field,
    region: &Region,
    x: u64,
    delta: u64,
    budget: u128,
) -> Result<SharpTerms> {
    if delta < 2 {
        return Err(Error::Usage("Δ must be at least 2".into()));
    }
    let k = field.degree() as u32;
    let values = region_values(field, region, x, None, budget)?;
    let table = PrimeTable::new(2 * x.pow(k));
    sharp_terms_over_values(&table, &values, &Cutoffs { x, delta, k }, SEGMENT)
}

/// Which multiplicative `F` the Wolke average uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WolkeWeight {
    /// `F ≡ 1`.
    One,
    /// `F(p^α) = τ_k(p^α)` when `p` has a degree-one prime above it, else 0.
    DegreeOneTau,
}

/// `Σ F(|N(v)|)` over `0 ≠ v ∈ Z^{k−1}` with `‖v‖ ≤ V` and first coordinate
/// in `first` (inclusive), with a cache of degree-one tests.
pub fn wolke_sum_slice(
    field: &Field,
    v: u64,
    weight: WolkeWeight,
    first: (i64, i64),
    cache: &mut BTreeMap<u64, bool>,
) -> Result<u128> {
    let d = field.degree() - 1;
    let vv = v as i128;
    let r2 = vv * vv;
    if vv >= field.compiled_form().safe_radius() {
        return Err(Error::Overflow("Wolke radius too large for the i128 fast path"));
    }
    let k = field.degree() as u32;
    let mut total = 0u128;
    let mut p = vec![0i128; d];
    fn rec(
        level: usize,
        rem: i128,
        p: &mut Vec<i128>,
        vv: i128,
        first: (i64, i64),
        visit: &mut dyn FnMut(&[i128]),
    ) {
        let bound = iroot(rem as u128, 2) as i128;
        let (mut lo, mut hi) = (-bound.min(vv), bound.min(vv));
        if level == 0 {
            lo = lo.max(first.0 as i128);
            hi = hi.min(first.1 as i128);
        }
        for t in lo..=hi {
            p[level] = t;
            if level + 1 == p.len() {
                visit(p);
            } else {
                rec(level + 1, rem - t * t, p, vv, first, visit);
            }
        }
        p[level] = 0;
    }
    let mut visit = |x: &[i128]| {
        if x.iter().all(|&c| c == 0) {
            return;
        }
        match weight {
            WolkeWeight::One => total += 1,
            WolkeWeight::DegreeOneTau => {
                let n = field.incomplete_norm_i128(x).unsigned_abs() as u64;
                let mut w = 1u128;
                for (q, a) in factor(n) {
                    let ok = *cache
                        .entry(q)
                        .or_insert_with(|| field.is_degree_one_prime(q));
                    if !ok {
                        w = 0;
                        break;
                    }
                    w *= tau_prime_power(a, k) as u128;
                }
                total += w;
            }
        }
    };
    rec(0, r2, &mut p, vv, first, &mut visit);
    Ok(total)
}

/// `Σ F(N(v))` and its ratio to `V^{k−1}(log V)^{k−1}`.
pub fn wolke_average(field: &Field, v: u64, weight: WolkeWeight) -> Result<(u128, f64)> {
    if v == 0 {
        return Ok((0, 0.0));
    }
    let s = wolke_sum_slice(field, v, weight, (-(v as i64), v as i64), &mut BTreeMap::new())?;
    Ok((s, wolke_ratio(s, v, field.degree() as u32)))
}

pub fn wolke_ratio(sum: u128, v: u64, k: u32) -> f64 {
    let vf = v as f64;
    let denom = libm::pow(vf, (k - 1) as f64) * libm::pow(libm::log(vf), (k - 1) as f64);
    if denom <= 0.0 {
        return 0.0;
    }
    sum as f64 / denom
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::tau;
    use crate::FieldSpec;

    #[test]
    fn sieved_tau_matches_factorization() {
        let table = PrimeTable::new(200_000);
        for k in [3u32, 4] {
            let (mut t, mut f, mut s) = (Vec::new(), Vec::new(), Vec::new());
            sieve_tau_into(&table, 150_000, 200_000, k, &mut t, &mut f, &mut s).unwrap();
            for n in 150_000..=200_000u64 {
                assert_eq!(t[(n - 150_000) as usize], tau(n, k), "n = {n}");
            }
            let w = DivisorWindow::sieve(&table, 1, 5000, k, 1 << 20).unwrap();
            for n in 1..=5000u64 {
                assert_eq!(w.tau_k(n), tau(n, k));
                assert_eq!(w.factorization(n), factor(n).as_slice());
            }
        }
    }

    #[test]
    fn small_tau_values() {
        assert_eq!(tau(1, 3), 1);
        assert_eq!(tau(2, 4), 4);
        assert_eq!(tau(12, 3), 18);
    }

    #[test]
    fn hyperbola_examples() {
        let t = hyperbola_decompose(360, 400, 3).unwrap();
        assert_eq!(t.all_small, tau(360, 3));
        assert!(t.large.iter().all(|&b| b == 0));
        let t = hyperbola_decompose(101, 10, 4).unwrap();
        assert_eq!(t.all_small, 0);
        assert_eq!(t.large[0], 1);
        assert_eq!(t.total(), 4);
        for n in 1..2000 {
            for y in [1, 3, 10, 50] {
                assert_eq!(hyperbola_decompose(n, y, 3).unwrap().total(), tau(n, 3) as i128);
            }
        }
    }

    #[test]
    fn decomposition_reassembles_sum() {
        let f = Field::new(FieldSpec::cyclic_cubic()).unwrap();
        let r = Region::standard(3);
        for (x, delta) in [(12u64, 2u64), (20, 3)] {
            let s = sharp_decomposition(&f, &r, x, delta, 1 << 24).unwrap();
            let m = m_exact(&f, &r, x, 1 << 24, SEGMENT).unwrap();
            assert_eq!(s.tau, m);
            assert_eq!(s.signed_main() + s.correction(), m as i128);
            assert!(s.correction().unsigned_abs() <= s.correction_bound());
        }
    }

    #[test]
    fn first_main_term_by_double_loop() {
        let f = Field::new(FieldSpec::cyclic_cubic()).unwrap();
        let r = Region::standard(3);
        let (x, delta) = (15u64, 2u64);
        let s = sharp_decomposition(&f, &r, x, delta, 1 << 24).unwrap();
        let values = region_values(&f, &r, x, None, 1 << 24).unwrap();
        let bound = 2 * x.pow(2) / delta;
        let mut direct = 0u128;
        for m in 1..=bound {
            let t = tau(m, 2) as u128;
            direct += t * values.iter().filter(|&&v| v % m == 0).count() as u128;
        }
        assert_eq!(s.m[0], direct);
    }

    #[test]
    fn wolke_constant_weight_counts_disc() {
        let f = Field::new(FieldSpec::cyclic_cubic()).unwrap();
        let (s, _) = wolke_average(&f, 10, WolkeWeight::One).unwrap();
        let mut n = 0;
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                if a * a + b * b <= 100 && (a, b) != (0, 0) {
                    n += 1;
                }
            }
        }
        assert_eq!(s, n);
        assert_eq!(wolke_average(&f, 0, WolkeWeight::DegreeOneTau).unwrap().0, 0);
    }
}
