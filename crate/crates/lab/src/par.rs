//! Parallel drivers over the core routines. Work units are sieve segments,
//! primes or slices of a ball; reductions are exact and in a fixed order.

use std::collections::BTreeMap;

use normdiv_core::asymptotic::EulerFactor;
use normdiv_core::divisor::{self, Cutoffs, PrimeTable, SharpTerms, WolkeWeight};
use normdiv_core::{Field, Region};
use rayon::prelude::*;

use crate::error::LabResult;

/// Splits sorted values into runs that each fit one sieve segment.
pub fn segment_groups(sorted: &[u64], segment: u64) -> Vec<&[u64]> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let end = sorted[i].saturating_add(segment - 1);
        let j = i + sorted[i..].partition_point(|&v| v <= end);
        out.push(&sorted[i..j]);
        i = j;
    }
    out
}

fn sorted_values(field: &Field, region: &Region, x: u64, points: u64) -> LabResult<Vec<u64>> {
    let mut v = divisor::region_values(field, region, x, None, points as u128)?;
    v.sort_unstable();
    Ok(v)
}

fn table_for(field: &Field, x: u64) -> PrimeTable {
    PrimeTable::new(2 * x.pow(field.degree() as u32))
}

/// `M(R_X)` with segments sieved in parallel.
pub fn m_exact(field: &Field, region: &Region, x: u64, points: u64, segment: u64) -> LabResult<u128> {
    let values = sorted_values(field, region, x, points)?;
    if values.is_empty() {
        return Ok(0);
    }
    let table = table_for(field, x);
    let k = field.degree() as u32;
    let parts = segment_groups(&values, segment)
        .into_par_iter()
        .map(|g| divisor::sum_tau_over_values(&table, g, k, segment as usize))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(parts.into_iter().sum())
}

/// Sharp-cutoff decomposition terms with segments processed in parallel.
pub fn sharp_terms(
    field: &Field,
    region: &Region,
    x: u64,
    delta: u64,
    points: u64,
    segment: u64,
) -> LabResult<SharpTerms> {
    let k = field.degree() as u32;
    let values = sorted_values(field, region, x, points)?;
    let table = table_for(field, x);
    let cut = Cutoffs { x, delta, k };
    let parts = segment_groups(&values, segment)
        .into_par_iter()
        .map(|g| divisor::sharp_terms_over_values(&table, g, &cut, segment as usize))
        .collect::<Result<Vec<_>, _>>()?;
    let mut acc = SharpTerms::zero(k);
    for p in &parts {
        acc.add(p);
    }
    Ok(acc)
}

/// Local factors for every prime up to `p_max`, in increasing order.
pub fn euler_factors(field: &Field, p_max: u64) -> LabResult<Vec<EulerFactor>> {
    let primes = normdiv_core::arith::primes_up_to(p_max);
    Ok(primes
        .into_par_iter()
        .map(|p| field.euler_factor(p))
        .collect::<Result<Vec<_>, _>>()?)
}

/// `Σ F(N(v))` over the ball of radius `v`, sliced by first coordinate.
pub fn wolke_sum(field: &Field, v: u64, weight: WolkeWeight) -> LabResult<u128> {
    if v == 0 {
        return Ok(0);
    }
    let r = v as i64;
    let width = ((2 * r + 1 + 63) / 64).max(1);
    let slices: Vec<(i64, i64)> = (0..)
        .map(|i| (-r + i * width, (-r + (i + 1) * width - 1).min(r)))
        .take_while(|s| s.0 <= r)
        .collect();
    let parts = slices
        .into_par_iter()
        .map(|s| divisor::wolke_sum_slice(field, v, weight, s, &mut BTreeMap::new()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(parts.into_iter().sum())
}
