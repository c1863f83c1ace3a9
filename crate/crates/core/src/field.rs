//! Galois number fields presented by an integral basis and a multiplication
//! tensor, and exact arithmetic in their rings of integers.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::embed::{Embeddings, UnitData};
use crate::ideal::Splitting;
use crate::linalg::{det_bigint, inverse_rational};
use crate::mpoly::{CompiledForm, MPoly};
use crate::{Error, Result};

/// Field data. `basis[i]` holds the power-basis coordinates of `ω_{i+1}`;
/// `tensor[(i·k + j)·k + r] = α_{i,j,r}` with `ω_i ω_j = Σ_r α_{i,j,r} ω_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSpec {
    pub name: String,
    pub degree: usize,
    pub min_poly: Vec<BigInt>,
    pub basis: Vec<Vec<BigRational>>,
    pub tensor: Vec<i64>,
    pub discriminant: BigInt,
    pub class_number: u32,
    pub units: Vec<Vec<i64>>,
    pub precision_bits: u32,
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn int_rows(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

/// Multiplies two power-basis vectors modulo the monic `min_poly`.
fn mul_power_basis(a: &[BigRational], b: &[BigRational], min_poly: &[BigInt]) -> Vec<BigRational> {
    let k = min_poly.len() - 1;
    let mut prod = vec![BigRational::zero(); 2 * k - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    for d in (k..prod.len()).rev() {
        let c = core::mem::take(&mut prod[d]);
        if c.is_zero() {
            continue;
        }
        for (i, m) in min_poly.iter().take(k).enumerate() {
            prod[d - k + i] -= &c * BigRational::from_integer(m.clone());
        }
    }
    prod.truncate(k);
    prod
}

/// Recomputes the multiplication tensor from a minimal polynomial and basis.
pub fn tensor_from_basis(min_poly: &[BigInt], basis: &[Vec<BigRational>]) -> Result<Vec<i64>> {
    let k = basis.len();
    let inv = inverse_rational(basis)
        .ok_or_else(|| Error::InvalidSpec("basis matrix is singular".to_string()))?;
    let mut out = vec![0i64; k * k * k];
    for i in 0..k {
        for j in 0..k {
            let prod = mul_power_basis(&basis[i], &basis[j], min_poly);
            for r in 0..k {
                let c: BigRational = (0..k).map(|s| &prod[s] * &inv[s][r]).sum();
                if !c.is_integer() {
                    return Err(Error::InvalidSpec(format!(
                        "ω_{}·ω_{} has non-integral coordinate",
                        i + 1,
                        j + 1
                    )));
                }
                out[(i * k + j) * k + r] = c
                    .to_integer()
                    .to_i64()
                    .ok_or(Error::Overflow("multiplication tensor"))?;
            }
        }
    }
    Ok(out)
}

impl FieldSpec {
    /// `Q[θ]/(θ³ − 3θ − 1)`, the cyclic cubic field of conductor 9.
    pub fn cyclic_cubic() -> FieldSpec {
        let min_poly: Vec<BigInt> = [-1, -3, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        let basis = int_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let tensor = tensor_from_basis(&min_poly, &basis).expect("built-in cubic");
        FieldSpec {
            name: "cubic9".to_string(),
            degree: 3,
            min_poly,
            basis,
            tensor,
            discriminant: BigInt::from(81),
            class_number: 1,
            units: vec![vec![0, 1, 0], vec![1, 1, 0]],
            precision_bits: 100,
        }
    }

    /// `Q(√2, i) = Q(ζ_8)` with basis `{1, √2, i, (√2 + √2 i)/2}`, θ = ζ_8.
    pub fn biquadratic() -> FieldSpec {
        let min_poly: Vec<BigInt> = [1, 0, 0, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        // √2 = ζ − ζ³, i = ζ², (√2 + √2 i)/2 = ζ.
        let basis = int_rows(&[&[1, 0, 0, 0], &[0, 1, 0, -1], &[0, 0, 1, 0], &[0, 1, 0, 0]]);
        let tensor = tensor_from_basis(&min_poly, &basis).expect("built-in quartic");
        FieldSpec {
            name: "q_sqrt2_i".to_string(),
            degree: 4,
            min_poly,
            basis,
            tensor,
            discriminant: BigInt::from(256),
            class_number: 1,
            units: vec![vec![1, 1, 0, 0]],
            precision_bits: 100,
        }
    }

    pub fn builtin(name: &str) -> Option<FieldSpec> {
        match name {
            "cubic9" | "cubic" => Some(FieldSpec::cyclic_cubic()),
            "q_sqrt2_i" | "quartic" | "zeta8" => Some(FieldSpec::biquadratic()),
            _ => None,
        }
    }

    #[inline]
    pub fn alpha(&self, i: usize, j: usize, r: usize) -> i64 {
        let k = self.degree;
        self.tensor[(i * k + j) * k + r]
    }

    fn check(&self, x: &AlgebraicInt) -> Result<()> {
        if x.coords.len() == self.degree {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn mul(&self, x: &AlgebraicInt, y: &AlgebraicInt) -> Result<AlgebraicInt> {
        self.check(x)?;
        self.check(y)?;
        let k = self.degree;
        let mut out = vec![BigInt::zero(); k];
        for i in 0..k {
            if x.coords[i].is_zero() {
                continue;
            }
            for j in 0..k {
                if y.coords[j].is_zero() {
                    continue;
                }
                let p = &x.coords[i] * &y.coords[j];
                for (r, o) in out.iter_mut().enumerate() {
                    let a = self.alpha(i, j, r);
                    if a != 0 {
                        *o += &p * a;
                    }
                }
            }
        }
        Ok(AlgebraicInt { coords: out })
    }

    /// Matrix of multiplication by `x`: column `j` holds `x·ω_j`.
    pub fn mul_matrix(&self, x: &AlgebraicInt) -> Vec<Vec<BigInt>> {
        let k = self.degree;
        let mut m = vec![vec![BigInt::zero(); k]; k];
        for i in 0..k {
            if x.coords[i].is_zero() {
                continue;
            }
            for j in 0..k {
                for (r, row) in m.iter_mut().enumerate() {
                    let a = self.alpha(i, j, r);
                    if a != 0 {
                        row[j] += &x.coords[i] * a;
                    }
                }
            }
        }
        m
    }

    pub fn norm(&self, x: &AlgebraicInt) -> BigInt {
        det_bigint(&self.mul_matrix(x))
    }

    pub fn trace(&self, x: &AlgebraicInt) -> BigInt {
        let m = self.mul_matrix(x);
        (0..self.degree).map(|i| m[i][i].clone()).sum()
    }

    /// `det(Tr(ω_i ω_j))`.
    pub fn trace_form_discriminant(&self) -> BigInt {
        let k = self.degree;
        let tr: Vec<BigInt> = (0..k)
            .map(|r| self.trace(&AlgebraicInt::basis(k, r)))
            .collect();
        let gram: Vec<Vec<BigInt>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| (0..k).map(|r| &tr[r] * self.alpha(i, j, r)).sum())
                    .collect()
            })
            .collect();
        det_bigint(&gram)
    }

    /// The norm form restricted to the first `nvars` coordinates.
    pub fn norm_form_in(&self, nvars: usize) -> MPoly {
        let k = self.degree;
        let m: Vec<Vec<MPoly>> = (0..k)
            .map(|r| {
                (0..k)
                    .map(|j| {
                        let coeffs: Vec<BigInt> = (0..nvars)
                            .map(|i| BigInt::from(self.alpha(i, j, r)))
                            .collect();
                        MPoly::linear(&coeffs)
                    })
                    .collect()
            })
            .collect();
        MPoly::determinant(&m, nvars)
    }

    /// The incomplete norm form `f(x_1, …, x_{k−1}) = N(x_1ω_1 + … + x_{k−1}ω_{k−1})`.
    pub fn incomplete_norm_form(&self) -> MPoly {
        self.norm_form_in(self.degree - 1)
    }

    /// Power-basis coordinates of `θ^j` expressed in the integral basis, as rows.
    pub fn theta_powers(&self) -> Result<Vec<Vec<BigRational>>> {
        inverse_rational(&self.basis)
            .ok_or_else(|| Error::InvalidSpec("basis matrix is singular".to_string()))
    }

    /// `Z[θ] = O_K` exactly when the basis change matrix is integral and unimodular.
    pub fn is_monogenic(&self) -> bool {
        let ints = self.basis.iter().flatten().all(|c| c.is_integer());
        if !ints {
            return false;
        }
        let m: Vec<Vec<BigInt>> = self
            .basis
            .iter()
            .map(|r| r.iter().map(|c| c.to_integer()).collect())
            .collect();
        det_bigint(&m).abs().is_one()
    }

    /// `x / y` when it lies in `O_K`, otherwise `None`.
    pub fn quotient(&self, x: &AlgebraicInt, y: &AlgebraicInt) -> Result<Option<AlgebraicInt>> {
        self.check(x)?;
        self.check(y)?;
        if y.is_zero() {
            return Err(Error::Usage("division by zero".to_string()));
        }
        let m: Vec<Vec<BigRational>> = self
            .mul_matrix(y)
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        let rhs: Vec<BigRational> = x.coords.iter().cloned().map(BigRational::from_integer).collect();
        let sol = crate::linalg::solve_rational(&m, &rhs)
            .ok_or_else(|| Error::Usage("singular multiplication matrix".to_string()))?;
        if sol.iter().all(|c| c.is_integer()) {
            Ok(Some(AlgebraicInt::new(sol.into_iter().map(|c| c.to_integer()).collect())))
        } else {
            Ok(None)
        }
    }

    pub fn units(&self) -> Vec<AlgebraicInt> {
        self.units.iter().map(|u| AlgebraicInt::from_i64s(u)).collect()
    }
}

/// An element of `O_K` in coordinates with respect to `ω_1, …, ω_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraicInt {
    pub coords: Vec<BigInt>,
}

impl AlgebraicInt {
    pub fn new(coords: Vec<BigInt>) -> AlgebraicInt {
        AlgebraicInt { coords }
    }

    pub fn from_i64s(c: &[i64]) -> AlgebraicInt {
        AlgebraicInt {
            coords: c.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn from_i128s(c: &[i128]) -> AlgebraicInt {
        AlgebraicInt {
            coords: c.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    /// Embeds `x ∈ Z^{k−1}` with a vanishing last coordinate.
    pub fn from_point(x: &[i128]) -> AlgebraicInt {
        let mut c: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        c.push(BigInt::zero());
        AlgebraicInt { coords: c }
    }

    pub fn rational(k: usize, m: i64) -> AlgebraicInt {
        let mut c = vec![BigInt::zero(); k];
        c[0] = BigInt::from(m);
        AlgebraicInt { coords: c }
    }

    pub fn one(k: usize) -> AlgebraicInt {
        AlgebraicInt::rational(k, 1)
    }

    pub fn basis(k: usize, i: usize) -> AlgebraicInt {
        let mut c = vec![BigInt::zero(); k];
        c[i] = BigInt::one();
        AlgebraicInt { coords: c }
    }

    pub fn degree(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn to_i128s(&self) -> Option<Vec<i128>> {
        self.coords.iter().map(|c| c.to_i128()).collect()
    }

    pub fn neg(&self) -> AlgebraicInt {
        AlgebraicInt {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn euclid_norm_sqr(&self) -> BigInt {
        self.coords.iter().map(|c| c * c).sum()
    }
}

/// A field ready for computation: the spec plus derived data (norm form,
/// embeddings, unit data) and the prime-splitting cache.
pub struct Field {
    pub(crate) spec: FieldSpec,
    pub(crate) k: usize,
    pub(crate) form: MPoly,
    pub(crate) fast_form: CompiledForm,
    /// Coordinates of `θ^j` in the integral basis.
    pub(crate) theta_pow: Vec<Vec<BigInt>>,
    pub(crate) emb: Embeddings,
    pub(crate) unit_data: UnitData,
    pub(crate) split_cache: spin::RwLock<BTreeMap<u64, Arc<Splitting>>>,
    pub(crate) seed: u64,
}

impl Field {
    /// Validates the spec against the supported class (monogenic, class
    /// number one, consistent tensor) and precomputes derived data.
    pub fn new(spec: FieldSpec) -> Result<Field> {
        Field::with_seed(spec, 0x5eed_1234)
    }

    pub fn with_seed(spec: FieldSpec, seed: u64) -> Result<Field> {
        let k = spec.degree;
        if k < 3 {
            return Err(Error::UnsupportedField("degree must be at least 3".to_string()));
        }
        if spec.min_poly.len() != k + 1 || !spec.min_poly[k].is_one() {
            return Err(Error::InvalidSpec("minimal polynomial must be monic of degree k".to_string()));
        }
        if spec.basis.len() != k || spec.basis.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidSpec("basis matrix must be k×k".to_string()));
        }
        if spec.tensor.len() != k * k * k {
            return Err(Error::InvalidSpec("tensor must have k³ entries".to_string()));
        }
        if spec.class_number != 1 {
            return Err(Error::UnsupportedField("class number must be 1".to_string()));
        }
        if !spec.is_monogenic() {
            return Err(Error::UnsupportedField(
                "basis is not a unimodular change of the power basis".to_string(),
            ));
        }
        let recomputed = tensor_from_basis(&spec.min_poly, &spec.basis)?;
        if recomputed != spec.tensor {
            return Err(Error::InvalidSpec(
                "tensor disagrees with minimal polynomial and basis".to_string(),
            ));
        }
        let theta_pow: Vec<Vec<BigInt>> = spec
            .theta_powers()?
            .into_iter()
            .map(|r| r.into_iter().map(|c| c.to_integer()).collect())
            .collect();
        let form = spec.incomplete_norm_form();
        let fast_form = form
            .compile()
            .ok_or(Error::Overflow("norm form coefficients"))?;
        let emb = Embeddings::new(&spec)?;
        let unit_data = UnitData::new(&spec, &emb)?;
        Ok(Field {
            k,
            form,
            fast_form,
            theta_pow,
            emb,
            unit_data,
            split_cache: spin::RwLock::new(BTreeMap::new()),
            seed,
            spec,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mul(&self, x: &AlgebraicInt, y: &AlgebraicInt) -> Result<AlgebraicInt> {
        self.spec.mul(x, y)
    }

    pub fn norm(&self, x: &AlgebraicInt) -> BigInt {
        self.spec.norm(x)
    }

    pub fn norm_form(&self) -> &MPoly {
        &self.form
    }

    pub fn compiled_form(&self) -> &CompiledForm {
        &self.fast_form
    }

    /// `f(x)` for `x ∈ Z^{k−1}`.
    pub fn incomplete_norm(&self, x: &[BigInt]) -> BigInt {
        self.form.eval_big(x)
    }

    /// Fast path; valid while every `|x_i|` is below `compiled_form().safe_radius()`.
    #[inline]
    pub fn incomplete_norm_i128(&self, x: &[i128]) -> i128 {
        self.fast_form.eval_i128(x)
    }

    /// `u^e` for an exponent of either sign; `u` must be a unit.
    pub fn unit_pow(&self, u: &AlgebraicInt, e: i64) -> Result<AlgebraicInt> {
        let base = if e < 0 { self.unit_inverse(u)? } else { u.clone() };
        let mut acc = AlgebraicInt::one(self.k);
        let mut b = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &b)?;
            }
            b = self.mul(&b, &b)?;
            n >>= 1;
        }
        Ok(acc)
    }

    /// Exact inverse of a unit through a rational linear solve.
    pub fn unit_inverse(&self, u: &AlgebraicInt) -> Result<AlgebraicInt> {
        let q = self.quotient(&AlgebraicInt::one(self.k), u)?;
        q.ok_or_else(|| Error::Usage("element is not a unit".to_string()))
    }

    /// `x / y` when it lies in `O_K`, otherwise `None`.
    pub fn quotient(&self, x: &AlgebraicInt, y: &AlgebraicInt) -> Result<Option<AlgebraicInt>> {
        self.spec.quotient(x, y)
    }
}

/// Outcome of one consistency check of a [`FieldSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

/// Runs every finite consistency check on a spec. Failures are reported,
/// never raised.
pub fn verify_field(spec: &FieldSpec) -> Vec<Check> {
    let k = spec.degree;
    let mut out = Vec::new();
    let shape_ok = k >= 3
        && spec.min_poly.len() == k + 1
        && spec.min_poly.last().is_some_and(|c| c.is_one())
        && spec.basis.len() == k
        && spec.basis.iter().all(|r| r.len() == k)
        && spec.tensor.len() == k * k * k
        && spec.units.iter().all(|u| u.len() == k);
    out.push(check("shape", shape_ok, format!("k = {k}")));
    if !shape_ok {
        return out;
    }

    let identity = (0..k).all(|j| (0..k).all(|r| spec.alpha(0, j, r) == i64::from(j == r)));
    out.push(check("identity", identity, "ω_1 acts as 1".to_string()));

    let mut comm_fail = None;
    for i in 0..k {
        for j in 0..k {
            if (0..k).any(|r| spec.alpha(i, j, r) != spec.alpha(j, i, r)) {
                comm_fail.get_or_insert((i, j));
            }
        }
    }
    out.push(check(
        "commutativity",
        comm_fail.is_none(),
        comm_fail.map_or("all pairs".to_string(), |(i, j)| format!("fails at ({}, {})", i + 1, j + 1)),
    ));

    let mut assoc_fail = None;
    'outer: for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                for r in 0..k {
                    let lhs: i128 = (0..k)
                        .map(|s| spec.alpha(i, j, s) as i128 * spec.alpha(s, l, r) as i128)
                        .sum();
                    let rhs: i128 = (0..k)
                        .map(|s| spec.alpha(j, l, s) as i128 * spec.alpha(i, s, r) as i128)
                        .sum();
                    if lhs != rhs {
                        assoc_fail = Some((i, j, l));
                        break 'outer;
                    }
                }
            }
        }
    }
    out.push(check(
        "associativity",
        assoc_fail.is_none(),
        assoc_fail.map_or("all triples".to_string(), |(i, j, l)| {
            format!("fails at ({}, {}, {})", i + 1, j + 1, l + 1)
        }),
    ));

    match tensor_from_basis(&spec.min_poly, &spec.basis) {
        Ok(t) => out.push(check(
            "tensor_vs_basis",
            t == spec.tensor,
            "tensor recomputed from minimal polynomial and basis".to_string(),
        )),
        Err(e) => out.push(check("tensor_vs_basis", false, e.to_string())),
    }

    let disc = spec.trace_form_discriminant();
    out.push(check(
        "discriminant",
        disc == spec.discriminant,
        format!("trace form gives {disc}, spec says {}", spec.discriminant),
    ));

    out.push(check(
        "monogenic",
        spec.is_monogenic(),
        "basis is a unimodular change of the power basis".to_string(),
    ));
    out.push(check(
        "class_number",
        spec.class_number == 1,
        format!("declared h = {}", spec.class_number),
    ));

    match Embeddings::new(spec) {
        Ok(emb) => {
            let resid = emb.root_residual(spec);
            out.push(check(
                "roots",
                resid < 1e-20,
                format!("max |m(θ^σ)| = {resid:e} over {k} conjugates"),
            ));
            let mut worst = 0.0f64;
            for s in 0..8i64 {
                let c: Vec<i64> = (0..k as i64).map(|i| (i * 7 + s * 3) % 11 - 5).collect();
                let x = AlgebraicInt::from_i64s(&c);
                if x.is_zero() {
                    continue;
                }
                worst = worst.max(emb.product_error(spec, &x));
            }
            out.push(check(
                "norm_product",
                worst < 1e-9,
                format!("max relative error {worst:e}"),
            ));
            let unit_norms_ok = spec
                .units()
                .iter()
                .all(|u| spec.norm(u).abs().is_one());
            out.push(check(
                "units_have_norm_one",
                unit_norms_ok,
                format!("{} unit(s)", spec.units.len()),
            ));
            let rank_ok = spec.units.len() == emb.r1 + emb.r2 - 1;
            let reg = emb.regulator(spec).unwrap_or(0.0);
            out.push(check(
                "unit_rank",
                rank_ok && reg > 1e-6,
                format!("rank {} expected {}, regulator {reg:.10}", spec.units.len(), emb.r1 + emb.r2 - 1),
            ));
        }
        Err(e) => out.push(check("roots", false, e.to_string())),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_verify() {
        for spec in [FieldSpec::cyclic_cubic(), FieldSpec::biquadratic()] {
            for c in verify_field(&spec) {
                assert!(c.passed, "{}: {} {}", spec.name, c.name, c.detail);
            }
        }
    }

    #[test]
    fn perturbed_tensor_breaks_associativity() {
        let mut spec = FieldSpec::cyclic_cubic();
        let k = 3;
        spec.tensor[(k + 2) * k + 1] += 1; // α_{2,3,2}
        spec.tensor[(2 * k + 1) * k + 1] += 1; // keep it commutative
        let checks = verify_field(&spec);
        let assoc = checks.iter().find(|c| c.name == "associativity").unwrap();
        assert!(!assoc.passed);
    }

    #[test]
    fn wrong_discriminant_detected() {
        let mut spec = FieldSpec::cyclic_cubic();
        spec.discriminant = BigInt::from(49);
        let checks = verify_field(&spec);
        let d = checks.iter().find(|c| c.name == "discriminant").unwrap();
        assert!(!d.passed);
        assert!(d.detail.contains("81"));
    }

    #[test]
    fn tensor_of_cubic_power_basis() {
        let spec = FieldSpec::cyclic_cubic();
        let theta = AlgebraicInt::from_i64s(&[0, 1, 0]);
        let theta2 = AlgebraicInt::from_i64s(&[0, 0, 1]);
        assert_eq!(spec.mul(&theta, &theta2).unwrap(), AlgebraicInt::from_i64s(&[1, 3, 0]));
        assert_eq!(spec.norm(&AlgebraicInt::from_i64s(&[1, 1, 0])), BigInt::from(-1));
    }

    #[test]
    fn quartic_sqrt2_squared() {
        let spec = FieldSpec::biquadratic();
        let s = AlgebraicInt::from_i64s(&[0, 1, 0, 0]);
        assert_eq!(spec.mul(&s, &s).unwrap(), AlgebraicInt::from_i64s(&[2, 0, 0, 0]));
        assert_eq!(spec.norm(&s), BigInt::from(4));
    }

    #[test]
    fn mismatched_degrees_rejected() {
        let spec = FieldSpec::cyclic_cubic();
        let x = AlgebraicInt::from_i64s(&[1, 0, 0, 0]);
        assert_eq!(spec.mul(&x, &x), Err(Error::FieldMismatch));
    }
}
