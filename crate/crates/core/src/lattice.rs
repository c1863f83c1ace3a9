//! Multiplier lattices `Λ(g) = {b : g·b has vanishing last coordinate}`,
//! exact counts of `A_X(𝔫)`, the error envelope of the counting lemma and
//! region volumes.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{ceil_div, floor_div};
use crate::dd::Dd;
use crate::field::{AlgebraicInt, Field};
use crate::hnf::IdealHnf;
use crate::linalg::det_bigint;
use crate::lll::{gram_of, gram_to_f64, lll_rows, short_vectors};
use crate::region::{rat_to_f64, Interval, IntervalForm, Region};
use crate::{Error, Result};

/// A basis of a rank `k−1` sublattice of `Z^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeBasis {
    pub vectors: Vec<Vec<BigInt>>,
    pub reduced: bool,
    /// `det(BᵀB)`, the squared Euclidean covolume.
    pub gram_det: BigInt,
    /// Index of `g·Λ` in the coordinate hyperplane `Z^{k−1}`, when built
    /// from a multiplier.
    pub image_det: Option<BigInt>,
}

fn norm_sqr(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x * x).sum()
}

fn big_sqrt_f64(x: &BigInt) -> f64 {
    x.to_f64().map(libm::sqrt).unwrap_or(f64::INFINITY)
}

impl LatticeBasis {
    pub fn from_vectors(vectors: Vec<Vec<BigInt>>) -> LatticeBasis {
        let gram_det = det_bigint(&gram_of(&vectors));
        LatticeBasis {
            vectors,
            reduced: false,
            gram_det,
            image_det: None,
        }
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn norms(&self) -> Vec<f64> {
        self.vectors.iter().map(|v| big_sqrt_f64(&norm_sqr(v))).collect()
    }

    pub fn covolume(&self) -> f64 {
        Dd::from_f64(self.gram_det.to_f64().unwrap()).sqrt().to_f64()
    }

    /// The covolume when `det(BᵀB)` is a perfect square.
    pub fn covolume_exact(&self) -> Option<BigInt> {
        let r = self.gram_det.sqrt();
        (&r * &r == self.gram_det).then_some(r)
    }

    /// `∏‖b_j‖ / covolume`, at least 1 by Hadamard's inequality.
    pub fn hadamard_ratio(&self) -> f64 {
        self.norms().iter().product::<f64>() / self.covolume()
    }

    /// `z(𝔫)`: a shortest nonzero vector, found by enumeration below the
    /// first basis vector.
    pub fn shortest(&self) -> Vec<BigInt> {
        let g = gram_to_f64(&gram_of(&self.vectors));
        let first = norm_sqr(&self.vectors[0]).to_f64().unwrap();
        let mut best = self.vectors[0].clone();
        let mut best_n = norm_sqr(&best);
        if let Some(cands) = short_vectors(&g, first, 100_000) {
            for c in cands {
                let v = combine(&c, &self.vectors);
                let n = norm_sqr(&v);
                if n < best_n || (n == best_n && v > best) {
                    best_n = n;
                    best = v;
                }
            }
        }
        best
    }

    /// `max |c_j|·‖b_j‖/‖v‖` over the lattice vectors `v = Σ c_j b_j` with
    /// `‖v‖² ≤ bound`: the measured coefficient-domination constant.
    pub fn domination_constant(&self, bound: f64) -> f64 {
        let g = gram_to_f64(&gram_of(&self.vectors));
        let norms = self.norms();
        let mut worst = 0.0f64;
        if let Some(cands) = short_vectors(&g, bound, 1_000_000) {
            for c in cands {
                let v = big_sqrt_f64(&norm_sqr(&combine(&c, &self.vectors)));
                for (cj, nj) in c.iter().zip(&norms) {
                    worst = worst.max((*cj as f64).abs() * nj / v);
                }
            }
        }
        worst
    }
}

fn combine(c: &[i64], rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let dim = rows[0].len();
    (0..dim)
        .map(|i| c.iter().zip(rows).map(|(ci, r)| BigInt::from(*ci) * &r[i]).sum())
        .collect()
}

/// Integer kernel of a nonzero row vector, as `len − 1` vectors.
pub fn row_kernel(row: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = row.len();
    // Column operations r·U = (0, …, 0, gcd) tracked on U.
    let mut r = row.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j))).collect())
        .collect();
    // u[j] is column j of U.
    for j in (0..n - 1).rev() {
        // Fold column j into column n−1.
        let last = n - 1;
        if r[j].is_zero() {
            continue;
        }
        let e = r[last].extended_gcd(&r[j]);
        let (g, s, t) = (e.gcd, e.x, e.y);
        let a = &r[last] / &g;
        let b = &r[j] / &g;
        let new_last: Vec<BigInt> = (0..n).map(|i| &s * &u[last][i] + &t * &u[j][i]).collect();
        let new_j: Vec<BigInt> = (0..n).map(|i| &a * &u[j][i] - &b * &u[last][i]).collect();
        u[last] = new_last;
        u[j] = new_j;
        r[last] = g;
        r[j] = BigInt::zero();
    }
    u.truncate(n - 1);
    u
}

/// Counting-lemma comparison for one ideal and scale.
#[derive(Clone, Debug)]
pub struct CountResult {
    pub exact: u64,
    pub density: BigRational,
    pub volume: f64,
    pub volume_err: f64,
    /// `ρ(𝔫)/N𝔫 · vol(R_X)`.
    pub main: f64,
    /// `1 + X^{k−2}/(‖z‖^{k−2} N𝔫^{(k−2)/k})`.
    pub envelope: f64,
    /// `Σ_{j=1}^{k−2} X^j/(‖z‖^j N𝔫^{j/k})`.
    pub envelope_sum: f64,
}

impl CountResult {
    pub fn deviation(&self) -> f64 {
        (self.exact as f64 - self.main).abs()
    }

    pub fn normalized(&self) -> f64 {
        self.deviation() / self.envelope
    }
}

/// Volume enclosure from dyadic refinement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeEstimate {
    pub value: f64,
    pub half_gap: f64,
    pub depth: u32,
    pub cells: u64,
}

impl VolumeEstimate {
    pub fn inner(&self) -> f64 {
        self.value - self.half_gap
    }

    pub fn outer(&self) -> f64 {
        self.value + self.half_gap
    }
}

struct Refiner<'a> {
    form: &'a IntervalForm,
    max_depth: u32,
    inside: f64,
    boundary: f64,
    boundary_cells: u64,
    cells: u64,
}

impl Refiner<'_> {
    fn visit(&mut self, cell: &mut [Interval], depth: u32, vol: f64) {
        self.cells += 1;
        let e = self.form.enclose(cell);
        if e.hi < 1.0 || e.lo > 2.0 {
            return;
        }
        if e.lo >= 1.0 && e.hi <= 2.0 {
            self.inside += vol;
            return;
        }
        if depth == self.max_depth {
            self.boundary += vol;
            self.boundary_cells += 1;
            return;
        }
        let d = cell.len();
        let saved: Vec<Interval> = cell.to_vec();
        let child = vol / (1u64 << d) as f64;
        for mask in 0..(1u32 << d) {
            for (i, c) in cell.iter_mut().enumerate() {
                let mid = 0.5 * (saved[i].lo + saved[i].hi);
                *c = if mask >> i & 1 == 0 {
                    Interval::new(saved[i].lo, mid)
                } else {
                    Interval::new(mid, saved[i].hi)
                };
            }
            self.visit(cell, depth + 1, child);
        }
        cell.copy_from_slice(&saved);
    }
}

fn refine(form: &IntervalForm, region: &Region, depth: u32) -> (VolumeEstimate, u64) {
    let mut cell: Vec<Interval> = region
        .lo
        .iter()
        .zip(&region.hi)
        .map(|(a, b)| Interval::new(rat_to_f64(a), rat_to_f64(b)))
        .collect();
    let vol: f64 = cell.iter().map(|c| c.hi - c.lo).product();
    let mut r = Refiner {
        form,
        max_depth: depth,
        inside: 0.0,
        boundary: 0.0,
        boundary_cells: 0,
        cells: 0,
    };
    if vol > 0.0 {
        r.visit(&mut cell, 0, vol);
    }
    (
        VolumeEstimate {
            value: r.inside + 0.5 * r.boundary,
            half_gap: 0.5 * r.boundary,
            depth,
            cells: r.cells,
        },
        r.boundary_cells,
    )
}

impl Field {
    /// `Λ(g)`: kernel of the last row of the multiplication-by-`g` matrix,
    /// LLL-reduced and sorted by length.
    pub fn multiplier_lattice(&self, g: &AlgebraicInt) -> Result<LatticeBasis> {
        if g.degree() != self.k {
            return Err(Error::FieldMismatch);
        }
        if g.is_zero() {
            return Err(Error::Usage("multiplier must be nonzero".into()));
        }
        let m = self.spec.mul_matrix(g);
        let k = self.k;
        let kernel = row_kernel(&m[k - 1]);
        let mut basis = self.reduce_basis(&LatticeBasis::from_vectors(kernel));
        // g·b for each basis vector; first k−1 coordinates.
        let image: Vec<Vec<BigInt>> = basis
            .vectors
            .iter()
            .map(|b| {
                (0..k - 1)
                    .map(|i| (0..k).map(|j| &m[i][j] * &b[j]).sum())
                    .collect()
            })
            .collect();
        basis.image_det = Some(det_bigint(&image).abs());
        Ok(basis)
    }

    /// LLL (δ = 0.99), then ordering by nondecreasing length.
    pub fn reduce_basis(&self, l: &LatticeBasis) -> LatticeBasis {
        reduce_basis(l)
    }

    /// The triangular basis of `L_𝔫 = 𝔫 ∩ Z^{k−1}`: the first `k−1` HNF
    /// columns restricted to the first `k−1` coordinates.
    pub fn hyperplane_basis(&self, n: &IdealHnf) -> Vec<Vec<i128>> {
        let k = self.k;
        n.columns()[..k - 1]
            .iter()
            .map(|c| c[..k - 1].to_vec())
            .collect()
    }

    /// Range of the outermost coefficient in the enumeration of `count_exact`.
    pub fn count_outer_range(&self, n: &IdealHnf, region: &Region, x: u64) -> (i128, i128) {
        let d = self.k - 2;
        let (lo, hi) = region.int_range(d, x);
        let h = n.columns()[d][d];
        (ceil_div(lo, h), floor_div(hi, h))
    }

    /// `|A_X(𝔫)|` restricted to outer coefficients in `outer`, by
    /// back-substitution through the triangular basis of `L_𝔫` with box
    /// bounds at every level.
    pub fn count_exact_slice(
        &self,
        n: &IdealHnf,
        region: &Region,
        x: u64,
        outer: (i128, i128),
        budget: u128,
    ) -> Result<u64> {
        if region.dim() + 1 != self.k {
            return Err(Error::FieldMismatch);
        }
        let d = self.k - 1;
        let basis = self.hyperplane_basis(n);
        let ranges: Vec<(i128, i128)> = (0..d).map(|i| region.int_range(i, x)).collect();
        let xk = (x as i128)
            .checked_pow(self.k as u32)
            .ok_or(Error::Overflow("X^k"))?;
        if !region.fast_path_ok(self, x) {
            return Err(Error::Overflow("region too large for the i128 fast path"));
        }
        let mut point = vec![0i128; d];
        let mut count = 0u64;
        let mut visited = 0u128;
        // Level i fixes coefficient t_i; the partial sum lives in `point`.
        fn rec(
            level: usize,
            basis: &[Vec<i128>],
            ranges: &[(i128, i128)],
            point: &mut [i128],
            field: &Field,
            xk: i128,
            count: &mut u64,
            visited: &mut u128,
            budget: u128,
            outer: Option<(i128, i128)>,
        ) -> Result<()> {
            let h = basis[level][level];
            let base = point[level];
            let (lo, hi) = ranges[level];
            let (mut a, mut b) = (ceil_div(lo - base, h), floor_div(hi - base, h));
            if let Some((oa, ob)) = outer {
                a = a.max(oa);
                b = b.min(ob);
            }
            for t in a..=b {
                *visited += 1;
                if *visited > budget {
                    return Err(Error::BudgetExceeded {
                        what: "lattice enumeration",
                        needed: *visited,
                        budget,
                    });
                }
                for i in 0..=level {
                    point[i] += t * basis[level][i];
                }
                if level == 0 {
                    let v = field.incomplete_norm_i128(point);
                    if v >= xk && v <= 2 * xk {
                        *count += 1;
                    }
                } else {
                    rec(level - 1, basis, ranges, point, field, xk, count, visited, budget, None)?;
                }
                for i in 0..=level {
                    point[i] -= t * basis[level][i];
                }
            }
            Ok(())
        }
        rec(
            d - 1,
            &basis,
            &ranges,
            &mut point,
            self,
            xk,
            &mut count,
            &mut visited,
            budget,
            Some(outer),
        )?;
        Ok(count)
    }

    pub fn count_exact(&self, n: &IdealHnf, region: &Region, x: u64, budget: u128) -> Result<u64> {
        let outer = self.count_outer_range(n, region, x);
        self.count_exact_slice(n, region, x, outer, budget)
    }

    /// `(1 + X^{k−2}/(‖z‖^{k−2}N^{(k−2)/k}), Σ_{j=1}^{k−2} X^j/(‖z‖^j N^{j/k}))`.
    pub fn error_envelope(&self, z_norm: f64, norm: f64, x: f64) -> (f64, f64) {
        let k = self.k as i32;
        let unit = |j: i32| libm::pow(x / z_norm, j as f64) / libm::pow(norm, j as f64 / k as f64);
        let first = 1.0 + unit(k - 2);
        let sum = (1..=k - 2).map(unit).sum();
        (first, sum)
    }

    /// Exact count, main term and envelope for `𝔫 = (g)` at scale `X`.
    pub fn count_with_envelope(
        &self,
        n: &IdealHnf,
        g: &AlgebraicInt,
        region: &Region,
        volume: &VolumeEstimate,
        x: u64,
        budget: u128,
    ) -> Result<CountResult> {
        let exact = self.count_exact(n, region, x, budget)?;
        let density = self.rho_ideal(n).value / BigRational::from_integer(n.norm());
        let scale = libm::pow(x as f64, (self.k - 1) as f64);
        let main = rat_to_f64(&density) * volume.value * scale;
        let lattice = self.multiplier_lattice(g)?;
        let z = big_sqrt_f64(&norm_sqr(&lattice.shortest()));
        let (envelope, envelope_sum) = self.error_envelope(z, n.norm().to_f64().unwrap(), x as f64);
        Ok(CountResult {
            exact,
            density,
            volume: volume.value,
            volume_err: volume.half_gap * scale * rat_to_f64(&self.rho_ideal(n).value)
                / n.norm().to_f64().unwrap(),
            main,
            envelope,
            envelope_sum,
        })
    }

    /// Volume of `R` at a fixed refinement depth.
    pub fn region_volume_at_depth(&self, region: &Region, depth: u32) -> Result<VolumeEstimate> {
        if region.dim() + 1 != self.k {
            return Err(Error::FieldMismatch);
        }
        let form = IntervalForm::new(&self.form);
        Ok(refine(&form, region, depth).0)
    }

    /// Refines until the inner/outer gap is below `tolerance` or the total
    /// number of visited cells would exceed `cell_budget`. Returns the best
    /// estimate together with whether the tolerance was met.
    pub fn region_volume_best(
        &self,
        region: &Region,
        tolerance: f64,
        cell_budget: u64,
    ) -> Result<(VolumeEstimate, bool)> {
        if region.dim() + 1 != self.k {
            return Err(Error::FieldMismatch);
        }
        let form = IntervalForm::new(&self.form);
        let d = region.dim() as u32;
        let mut spent = 0u64;
        let mut depth = 0;
        loop {
            let (est, bcells) = refine(&form, region, depth);
            spent += est.cells;
            if 2.0 * est.half_gap < tolerance {
                return Ok((est, true));
            }
            let next = est.cells + bcells * (1u64 << d);
            if spent + next > cell_budget {
                return Ok((est, false));
            }
            depth += 1;
        }
    }

    /// `vol(R)` with inner/outer gap below `tolerance`.
    pub fn region_volume(
        &self,
        region: &Region,
        tolerance: f64,
        cell_budget: u64,
    ) -> Result<VolumeEstimate> {
        let (est, ok) = self.region_volume_best(region, tolerance, cell_budget)?;
        if ok {
            Ok(est)
        } else {
            Err(Error::ToleranceUnreachable {
                gap: 2.0 * est.half_gap,
                tolerance,
            })
        }
    }
}

pub fn reduce_basis(l: &LatticeBasis) -> LatticeBasis {
    let mut rows = lll_rows(&l.vectors);
    rows.sort_by(|a, b| norm_sqr(a).cmp(&norm_sqr(b)).then_with(|| b.cmp(a)));
    // Sign convention: first nonzero coordinate positive.
    for r in rows.iter_mut() {
        if r.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
            for c in r.iter_mut() {
                *c = -c.clone();
            }
        }
    }
    LatticeBasis {
        vectors: rows,
        reduced: true,
        gram_det: l.gram_det.clone(),
        image_det: l.image_det.clone(),
    }
}

/// `|N(g)|` divided by the image determinant; equals `ρ((g))`.
pub fn rho_from_lattice(l: &LatticeBasis, norm: &BigInt) -> Option<BigRational> {
    let d = l.image_det.as_ref()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(norm.abs(), d.clone()))
}

/// Whether `v ∈ Z^k` is annihilated in the last coordinate by `g`.
pub fn in_multiplier_lattice(field: &Field, g: &AlgebraicInt, v: &[BigInt]) -> bool {
    let m = field.spec.mul_matrix(g);
    let k = v.len();
    (0..k).map(|j| &m[k - 1][j] * &v[j]).sum::<BigInt>().is_zero()
}

impl LatticeBasis {
    pub fn unit_check(&self) -> bool {
        self.gram_det.is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::FieldSpec;

    fn cubic() -> Field {
        Field::new(FieldSpec::cyclic_cubic()).unwrap()
    }

    #[test]
    fn kernel_of_row() {
        let row: Vec<BigInt> = [6, 10, 15].iter().map(|&x| BigInt::from(x)).collect();
        let ker = row_kernel(&row);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let dot: BigInt = v.iter().zip(&row).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
        // The kernel of a primitive row has covolume ‖row‖.
        let l = LatticeBasis::from_vectors(ker);
        assert_eq!(l.gram_det, BigInt::from(36 + 100 + 225));
    }

    #[test]
    fn trivial_multipliers() {
        let f = cubic();
        for g in [AlgebraicInt::one(3), AlgebraicInt::rational(3, 7)] {
            let l = f.multiplier_lattice(&g).unwrap();
            assert!(l.unit_check());
            for v in &l.vectors {
                assert!(v[2].is_zero());
            }
        }
    }

    #[test]
    fn image_determinant_identity_at_17() {
        let f = cubic();
        let s = f.split_prime(17).unwrap();
        for pr in &s.primes {
            let g = f.principal_generator(&pr.hnf).unwrap();
            let l = f.multiplier_lattice(&g).unwrap();
            let rho = f.rho_ideal(&pr.hnf).value;
            let lhs = BigRational::from_integer(l.image_det.clone().unwrap()) * rho;
            assert_eq!(lhs, BigRational::from_integer(f.norm(&g).abs()));
            assert!(l.hadamard_ratio() >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn unit_ideal_counts_region_points() {
        let f = cubic();
        let r = Region::standard(3);
        let unit = IdealHnf::unit(3);
        let mut naive = 0;
        for a in 5..=15i128 {
            for b in -5..=5i128 {
                if r.contains_scaled(&f, &[a, b], 10).unwrap() {
                    naive += 1;
                }
            }
        }
        assert_eq!(f.count_exact(&unit, &r, 10, 1 << 20).unwrap(), naive);
    }

    #[test]
    fn count_matches_filtered_scan() {
        let f = cubic();
        let r = Region::standard(3);
        let s = f.split_prime(19).unwrap();
        let n = &s.primes[1].hnf;
        let x = 40;
        let mut naive = 0;
        for a in 20..=60i128 {
            for b in -20..=20i128 {
                if n.contains(&[a, b, 0]) && r.contains_scaled(&f, &[a, b], x).unwrap() {
                    naive += 1;
                }
            }
        }
        assert_eq!(f.count_exact(n, &r, x, 1 << 20).unwrap(), naive);
    }

    #[test]
    fn volume_brackets_and_empty_box() {
        let f = cubic();
        let r = Region::standard(3);
        let v = f.region_volume_at_depth(&r, 8).unwrap();
        let w = f.region_volume_at_depth(&r, 10).unwrap();
        assert!(w.inner() >= v.inner() - 1e-12 && w.outer() <= v.outer() + 1e-12);
        let empty = Region::from_pairs(&[(3, 1), (3, 1)], &[(4, 1), (4, 1)]).unwrap();
        let e = f.region_volume(&empty, 1e-6, 1000).unwrap();
        assert_eq!((e.value, e.half_gap), (0.0, 0.0));
    }
}
