//! The exact identity suite.

use std::collections::BTreeMap;
use std::time::Instant;

use normdiv_core::arith::{factor, gcd_u64, primes_up_to, tau};
use normdiv_core::asymptotic::binomial_identity_check;
use normdiv_core::divisor::{hyperbola_decompose_factored, DivisorWindow, PrimeTable};
use normdiv_core::{Field, IdealHnf, Region};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::LabResult;
use crate::report::CheckOutcome;

fn outcome(name: &str, start: Instant, cases: u64, failures: u64, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        cases,
        failures,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Every ideal of norm at most `limit`, with its norm.
pub fn ideals_up_to(field: &Field, limit: u64) -> LabResult<Vec<(u64, IdealHnf)>> {
    let lists = (1..=limit)
        .into_par_iter()
        .map(|m| field.ideals_of_norm(m).map(|v| (m, v)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(lists
        .into_iter()
        .flat_map(|(m, v)| v.into_iter().map(move |id| (m, id)))
        .collect())
}

/// `1_{n | N𝔮} = Σ μ_n(𝔫)1_{𝔫 | 𝔮}` for `n ≤ n_max` and `N𝔮 ≤ norm_max`.
pub fn inclusion_exclusion(field: &Field, n_max: u64, norm_max: u64) -> LabResult<CheckOutcome> {
    let start = Instant::now();
    let ideals = ideals_up_to(field, norm_max)?;
    let per_n = (1..=n_max)
        .into_par_iter()
        .map(|n| -> LabResult<(u64, u64, usize)> {
            let mu = field.mu_coefficients(n)?;
            let mut bad = 0;
            for (norm, q) in &ideals {
                let lhs = i64::from(norm % n == 0);
                if mu.evaluate(q) != lhs {
                    bad += 1;
                }
            }
            Ok((ideals.len() as u64, bad, mu.entries.len()))
        })
        .collect::<LabResult<Vec<_>>>()?;
    let cases = per_n.iter().map(|r| r.0).sum();
    let failures = per_n.iter().map(|r| r.1).sum();
    let support = per_n.iter().map(|r| r.2).max().unwrap_or(0);
    Ok(outcome(
        "inclusion-exclusion",
        start,
        cases,
        failures,
        format!("n ≤ {n_max}, {} ideals of norm ≤ {norm_max}, largest support {support}", ideals.len()),
    ))
}

/// Direct counts of `q | f(x)` for every prime power `q ≤ n_max`.
pub fn direct_counts(field: &Field, n_max: u64, budget: u64) -> LabResult<BTreeMap<u64, u64>> {
    let mut qs = Vec::new();
    for p in primes_up_to(n_max) {
        let mut q = p;
        while q <= n_max {
            qs.push(q);
            q *= p;
        }
    }
    // Largest first, so the long counts start early.
    qs.sort_unstable_by(|a, b| b.cmp(a));
    let counts = qs
        .into_par_iter()
        .map(|q| field.count_direct(q, budget as u128).map(|c| (q, c)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(counts.into_iter().collect())
}

/// `ϱ_direct(n) = ϱ_assembled(n)` for `n ≤ n_max`.
pub fn varrho_identity(field: &Field, n_max: u64, budget: u64) -> LabResult<CheckOutcome> {
    let start = Instant::now();
    let counts = direct_counts(field, n_max, budget)?;
    let rows = (1..=n_max)
        .into_par_iter()
        .map(|n| -> LabResult<bool> {
            let mut cache = counts.clone();
            let d = field.varrho_direct_cached(n, budget as u128, &mut cache)?;
            let a = field.varrho_assembled(n)?;
            Ok(d.value == a.value)
        })
        .collect::<LabResult<Vec<_>>>()?;
    let failures = rows.iter().filter(|ok| !**ok).count() as u64;
    Ok(outcome(
        "varrho-direct-vs-assembled",
        start,
        n_max,
        failures,
        format!("n ≤ {n_max}"),
    ))
}

/// `ρ(𝔭) = 1` at degree-one primes with `p ≤ p_max`, and `ρ` multiplicative
/// on `pairs` random coprime-norm pairs. Ideals whose direct scan fits
/// `budget` are also counted directly.
pub fn rho_checks(field: &Field, p_max: u64, pairs: usize, seed: u64, budget: u64) -> LabResult<Vec<CheckOutcome>> {
    let k = field.degree() as u32;
    let start = Instant::now();
    let mut cases = 0;
    let mut bad = 0;
    let mut direct = 0;
    for p in primes_up_to(p_max) {
        let s = field.split_prime(p)?;
        if s.f != 1 {
            continue;
        }
        for pr in &s.primes {
            cases += 1;
            let v = field.rho_ideal(&pr.hnf).value;
            let mut ok = num_traits::One::is_one(&v);
            if (p as u128).pow(k - 1) <= budget as u128 {
                direct += 1;
                ok &= field.rho_direct(&pr.hnf, budget as u128)?.value == v;
            }
            if !ok {
                bad += 1;
            }
        }
    }
    let first = outcome(
        "rho-degree-one",
        start,
        cases,
        bad,
        format!("p ≤ {p_max}, {direct} also counted directly"),
    );

    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut bad = 0;
    let mut direct = 0;
    let pool = ideals_up_to(field, 3000)?;
    let mut attempts = 0;
    while done < pairs && attempts < 100 * pairs {
        attempts += 1;
        let (a, x) = &pool[rng.gen_range(0..pool.len())];
        let (b, y) = &pool[rng.gen_range(0..pool.len())];
        if *a < 2 || *b < 2 || gcd_u64(*a, *b) != 1 {
            continue;
        }
        let xy = field.ideal_product(x, y)?;
        let prod = field.rho_ideal(&xy).value;
        let mut ok = prod == field.rho_ideal(x).value * field.rho_ideal(y).value;
        ok &= field.rho_multiplicative(&xy)?.value == prod;
        if (xy.min_integer() as u128).pow(k - 1) <= budget as u128 {
            direct += 1;
            ok &= field.rho_direct(&xy, budget as u128)?.value == prod;
        }
        if !ok {
            bad += 1;
        }
        done += 1;
    }
    let mut second = outcome(
        "rho-multiplicative",
        start,
        done as u64,
        bad,
        format!("{done} coprime pairs of norm ≤ 3000, {direct} also counted directly"),
    );
    if done < pairs {
        second.failures += 1;
        second.detail.push_str(", too few pairs found");
    }
    Ok(vec![first, second])
}

/// The hyperbola identity for all `n ≤ n_max`, and sieved against
/// factorization-based `τ_k`.
pub fn hyperbola_identity(n_max: u64, ys: &[u64], ks: &[u32]) -> LabResult<CheckOutcome> {
    let start = Instant::now();
    let table = PrimeTable::new(n_max);
    let mut cases = 0;
    let mut bad = 0;
    for &k in ks {
        let w = DivisorWindow::sieve(&table, 1, n_max, k, n_max as usize)?;
        let chunks: Vec<(u64, u64)> = (1..=n_max)
            .step_by(4096)
            .map(|a| (a, (a + 4095).min(n_max)))
            .collect();
        let parts: Vec<(u64, u64)> = chunks
            .into_par_iter()
            .map(|(a, b)| {
                let mut c = 0;
                let mut f = 0;
                for n in a..=b {
                    let t = w.tau_k(n);
                    c += 1;
                    if t != tau(n, k) {
                        f += 1;
                    }
                    for &y in ys {
                        c += 1;
                        let d = hyperbola_decompose_factored(n, w.factorization(n), y, k);
                        if d.total() != t as i128 {
                            f += 1;
                        }
                    }
                }
                (c, f)
            })
            .collect();
        for (c, f) in parts {
            cases += c;
            bad += f;
        }
    }
    Ok(outcome(
        "hyperbola",
        start,
        cases,
        bad,
        format!("n ≤ {n_max}, y ∈ {ys:?}, k ∈ {ks:?}"),
    ))
}

/// Sieved `τ_k` against trial factorization on random `n ≤ limit`.
pub fn sieve_spot_check(limit: u64, k: u32, samples: usize, seed: u64) -> LabResult<CheckOutcome> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = PrimeTable::new(limit);
    let mut bad = 0;
    let width = 1u64 << 16;
    let mut done = 0;
    while done < samples {
        let a = rng.gen_range(1..=limit.saturating_sub(width).max(1));
        let b = (a + width - 1).min(limit);
        let w = DivisorWindow::sieve(&table, a, b, k, width as usize)?;
        for _ in 0..100 {
            let n = rng.gen_range(a..=b);
            let fac = factor(n);
            if w.tau_k(n) != tau(n, k) || w.factorization(n) != fac.as_slice() {
                bad += 1;
            }
            done += 1;
        }
    }
    Ok(outcome(
        "sieve-vs-factorization",
        start,
        done as u64,
        bad,
        format!("{samples} random n ≤ {limit}, k = {k}"),
    ))
}

/// Both sides of the valuation split at small prime powers.
pub fn valuation_split(field: &Field, primes: &[u64], max_ell: u32) -> LabResult<CheckOutcome> {
    let start = Instant::now();
    let mut cases = 0;
    let mut bad = 0;
    for &p in primes {
        for ell in 1..=max_ell {
            let (l, r) = field.valuation_split(p, ell)?;
            cases += 1;
            if l != r {
                bad += 1;
            }
        }
    }
    Ok(outcome(
        "valuation-split",
        start,
        cases,
        bad,
        format!("p ∈ {primes:?}, ℓ ≤ {max_ell}"),
    ))
}

pub fn binomial_identity(ks: std::ops::RangeInclusive<u32>) -> CheckOutcome {
    let start = Instant::now();
    let mut cases = 0;
    let mut bad = 0;
    for k in ks.clone() {
        cases += 1;
        if !binomial_identity_check(k) {
            bad += 1;
        }
    }
    outcome("binomial-residue", start, cases, bad, format!("k ∈ {ks:?}"))
}

/// `M = Σ_j s_j M_j + correction` and `|correction| ≤ (k + 2^k − 2)E`.
pub fn sharp_reassembly(field: &Field, region: &Region, xs: &[u64], delta: u64, segment: u64) -> LabResult<CheckOutcome> {
    let start = Instant::now();
    let mut bad = 0;
    for &x in xs {
        let s = crate::par::sharp_terms(field, region, x, delta, u64::MAX, segment)?;
        let m = crate::par::m_exact(field, region, x, u64::MAX, segment)?;
        let ok = s.tau == m
            && s.signed_main() + s.correction() == m as i128
            && s.correction().unsigned_abs() <= s.correction_bound();
        if !ok {
            bad += 1;
        }
    }
    Ok(outcome(
        "sharp-reassembly",
        start,
        xs.len() as u64,
        bad,
        format!("X ∈ {xs:?}, Δ = {delta}"),
    ))
}

/// The whole suite on one field.
pub fn full_suite(field: &Field, region: &Region, seed: u64, budget: u64, segment: u64) -> LabResult<Vec<CheckOutcome>> {
    let k = field.degree() as u32;
    let mut out = vec![inclusion_exclusion(field, 60, 10_000)?];
    out.push(varrho_identity(field, 500, budget)?);
    out.extend(rho_checks(field, 200, 200, seed, budget)?);
    out.push(hyperbola_identity(100_000, &[10, 50, 316], &[3, 4])?);
    let limit = 2 * if k == 3 { 400u64.pow(3) } else { 100u64.pow(k) };
    out.push(sieve_spot_check(limit, k, 10_000, seed)?);
    out.push(valuation_split(field, &[2, 3, 5, 7, 17], k + 2)?);
    out.push(binomial_identity(3..=8));
    out.push(sharp_reassembly(field, region, &[12, 20, 30], 2, segment)?);
    Ok(out)
}
