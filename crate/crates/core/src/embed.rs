//! Numeric conjugates in double-double precision: embeddings, the unit
//! log-lattice, regulator, torsion, Dedekind residue and balanced generators.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::dd::{CDd, Dd};
use crate::field::{AlgebraicInt, Field, FieldSpec};
use crate::lll::short_vectors;
use crate::{Error, Result};

fn big_to_dd(x: &BigInt) -> Dd {
    Dd::from_big(x)
}

fn horner(poly: &[Dd], z: CDd) -> (CDd, CDd) {
    let mut p = CDd::ZERO;
    let mut dp = CDd::ZERO;
    for &c in poly.iter().rev() {
        dp = dp * z + p;
        p = p * z + CDd::real(c);
    }
    (p, dp)
}

/// All complex roots of a monic integer polynomial: Durand–Kerner in `f64`,
/// then Newton polishing in double-double. Real roots come first (ascending),
/// then conjugate pairs `(z, z̄)` with `Im z > 0`.
pub fn poly_roots(min_poly: &[BigInt]) -> Vec<CDd> {
    let k = min_poly.len() - 1;
    let c: Vec<f64> = min_poly.iter().map(|x| x.to_f64().unwrap()).collect();
    let radius = 1.0 + c[..k].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<(f64, f64)> = (0..k)
        .map(|j| {
            let a = 0.4 + 2.0 * core::f64::consts::PI * j as f64 / k as f64;
            (radius * libm::cos(a) * 0.9, radius * libm::sin(a) * 0.9)
        })
        .collect();
    let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let cdiv = |a: (f64, f64), b: (f64, f64)| {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..k {
            let mut p = (0.0, 0.0);
            for &ci in c.iter().rev() {
                p = cmul(p, z[i]);
                p.0 += ci;
            }
            let mut den = (1.0, 0.0);
            for j in 0..k {
                if i != j {
                    den = cmul(den, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let step = cdiv(p, den);
            z[i] = (z[i].0 - step.0, z[i].1 - step.1);
            delta = delta.max(step.0.abs() + step.1.abs());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    let cdd: Vec<Dd> = min_poly.iter().map(big_to_dd).collect();
    let mut roots: Vec<CDd> = z
        .into_iter()
        .map(|(re, im)| {
            let im = if im.abs() < 1e-7 * (1.0 + re.abs()) { 0.0 } else { im };
            let mut r = CDd::new(Dd::from_f64(re), Dd::from_f64(im));
            for _ in 0..4 {
                let (p, dp) = horner(&cdd, r);
                if dp.norm_sqr().is_zero() {
                    break;
                }
                r = r - p / dp;
            }
            r
        })
        .collect();
    roots.sort_by(|a, b| {
        let ka = (!a.im.is_zero(), a.re, a.im.abs(), a.im < Dd::ZERO);
        let kb = (!b.im.is_zero(), b.re, b.im.abs(), b.im < Dd::ZERO);
        ka.partial_cmp(&kb).unwrap_or(core::cmp::Ordering::Equal)
    });
    roots
}

#[derive(Clone, Debug)]
pub struct Embeddings {
    /// Conjugates `θ^σ`.
    pub roots: Vec<CDd>,
    /// `omega[σ][i] = ω_i^σ`.
    pub omega: Vec<Vec<CDd>>,
    pub r1: usize,
    pub r2: usize,
    /// One embedding index per archimedean place, real places first.
    pub places: Vec<usize>,
}

impl Embeddings {
    pub fn new(spec: &FieldSpec) -> Result<Embeddings> {
        let k = spec.degree;
        let roots = poly_roots(&spec.min_poly);
        let r1 = roots.iter().filter(|r| r.im.is_zero()).count();
        if (k - r1) % 2 != 0 {
            return Err(Error::InvalidSpec("root finding did not pair complex roots".to_string()));
        }
        let r2 = (k - r1) / 2;
        let mut places: Vec<usize> = (0..r1).collect();
        places.extend((0..r2).map(|j| r1 + 2 * j));
        let basis_dd: Vec<Vec<Dd>> = spec
            .basis
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| {
                        let n = c.numer().to_i128().unwrap_or(0);
                        let d = c.denom().to_i128().unwrap_or(1);
                        Dd::from_ratio(n, d)
                    })
                    .collect()
            })
            .collect();
        let omega = roots
            .iter()
            .map(|&t| {
                let mut pw = vec![CDd::ONE; k];
                for j in 1..k {
                    pw[j] = pw[j - 1] * t;
                }
                basis_dd
                    .iter()
                    .map(|row| {
                        let mut acc = CDd::ZERO;
                        for (c, p) in row.iter().zip(&pw) {
                            acc += p.scale(*c);
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Ok(Embeddings {
            roots,
            omega,
            r1,
            r2,
            places,
        })
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// `max_σ |m(θ^σ)|`.
    pub fn root_residual(&self, spec: &FieldSpec) -> f64 {
        let c: Vec<Dd> = spec.min_poly.iter().map(big_to_dd).collect();
        self.roots
            .iter()
            .map(|&r| horner(&c, r).0.abs().to_f64())
            .fold(0.0, f64::max)
    }

    pub fn embed(&self, x: &AlgebraicInt) -> Vec<CDd> {
        let xs: Vec<Dd> = x.coords.iter().map(big_to_dd).collect();
        self.omega
            .iter()
            .map(|row| {
                let mut acc = CDd::ZERO;
                for (w, c) in row.iter().zip(&xs) {
                    acc += w.scale(*c);
                }
                acc
            })
            .collect()
    }

    /// `ln |x^σ|` for every embedding.
    pub fn log_abs(&self, x: &AlgebraicInt) -> Vec<Dd> {
        self.embed(x).iter().map(|z| z.norm_sqr().ln().mul_pow2(-1)).collect()
    }

    /// `|∏_σ |x^σ| / |N(x)| − 1|`.
    pub fn product_error(&self, spec: &FieldSpec, x: &AlgebraicInt) -> f64 {
        let prod = self.embed(x).iter().fold(Dd::ONE, |acc, z| acc * z.abs());
        let n = big_to_dd(&spec.norm(x).abs());
        if n.is_zero() {
            return f64::INFINITY;
        }
        (prod / n - Dd::ONE).abs().to_f64()
    }

    /// Unit log-lattice basis restricted to the first `r1 + r2 − 1` places.
    fn log_matrix(&self, units: &[AlgebraicInt]) -> Vec<Vec<Dd>> {
        let r = self.r1 + self.r2 - 1;
        units
            .iter()
            .map(|u| {
                let l = self.log_abs(u);
                (0..r)
                    .map(|p| {
                        let w = if p < self.r1 { 1 } else { 2 };
                        l[self.places[p]] * Dd::from_f64(w as f64)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn regulator_dd(&self, spec: &FieldSpec) -> Result<Dd> {
        let units = spec.units();
        if units.len() != self.r1 + self.r2 - 1 {
            return Err(Error::InvalidSpec(format!(
                "expected {} fundamental units, spec has {}",
                self.r1 + self.r2 - 1,
                units.len()
            )));
        }
        Ok(det_dd(self.log_matrix(&units)).abs())
    }

    pub fn regulator(&self, spec: &FieldSpec) -> Result<f64> {
        self.regulator_dd(spec).map(|r| r.to_f64())
    }

    /// Gram matrix of the trace form `T2(x) = Σ_σ |x^σ|²` on the integral basis.
    pub fn t2_gram(&self) -> Vec<Vec<f64>> {
        let k = self.degree();
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let mut s = Dd::ZERO;
                        for row in &self.omega {
                            s += (row[i] * row[j].conj()).re;
                        }
                        s.to_f64()
                    })
                    .collect()
            })
            .collect()
    }

    /// Number of roots of unity: elements with `T2 = k` all have unit-modulus
    /// conjugates.
    pub fn torsion(&self) -> u32 {
        let k = self.degree() as f64;
        let found = short_vectors(&self.t2_gram(), k, 10_000).unwrap_or_default();
        found
            .iter()
            .filter(|c| {
                let x = AlgebraicInt::from_i64s(c);
                self.embed(&x)
                    .iter()
                    .all(|z| (z.abs() - Dd::ONE).abs().to_f64() < 1e-20)
            })
            .count() as u32
    }
}

fn det_dd(mut a: Vec<Vec<Dd>>) -> Dd {
    let n = a.len();
    let mut det = Dd::ONE;
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap())
            .unwrap();
        if a[piv][c].is_zero() {
            return Dd::ZERO;
        }
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for j in c..n {
                let t = f * a[c][j];
                a[r][j] -= t;
            }
        }
    }
    det
}

fn solve_f64(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = a.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap())?;
        if a[piv][c].abs() < 1e-300 {
            return None;
        }
        a.swap(piv, c);
        b.swap(piv, c);
        for r in 0..n {
            if r != c {
                let f = a[r][c] / a[c][c];
                for j in c..n {
                    a[r][j] -= f * a[c][j];
                }
                b[r] -= f * b[c];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Frobenius norm of the inverse of a complex matrix (Gauss–Jordan in `f64`).
fn inverse_frobenius(m: &[Vec<CDd>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<(f64, f64)>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<(f64, f64)> = row.iter().map(|z| z.to_f64()).collect();
            r.extend((0..n).map(|j| if i == j { (1.0, 0.0) } else { (0.0, 0.0) }));
            r
        })
        .collect();
    let mul = |x: (f64, f64), y: (f64, f64)| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
    let inv = |x: (f64, f64)| {
        let d = x.0 * x.0 + x.1 * x.1;
        (x.0 / d, -x.1 / d)
    };
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&i, &j| {
                let ni = libm::hypot(a[i][c].0, a[i][c].1);
                let nj = libm::hypot(a[j][c].0, a[j][c].1);
                ni.partial_cmp(&nj).unwrap()
            })
            .unwrap();
        a.swap(piv, c);
        let ic = inv(a[c][c]);
        for j in 0..2 * n {
            a[c][j] = mul(a[c][j], ic);
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                for j in 0..2 * n {
                    let t = mul(f, a[c][j]);
                    a[r][j].0 -= t.0;
                    a[r][j].1 -= t.1;
                }
            }
        }
    }
    let mut s = 0.0;
    for row in &a {
        for z in &row[n..] {
            s += z.0 * z.0 + z.1 * z.1;
        }
    }
    libm::sqrt(s)
}

/// Unit data for balancing generators.
#[derive(Clone, Debug)]
pub struct UnitData {
    pub units: Vec<AlgebraicInt>,
    /// `ln |u^σ|` over all `k` embeddings, per unit.
    pub logs: Vec<Vec<f64>>,
    pub torsion: u32,
    pub regulator: Dd,
    /// Admissible spread `max_σ ln|g^σ| − min_σ ln|g^σ|` after balancing.
    pub b_k: f64,
    /// `‖g‖ ≤ c_K · |N(g)|^{1/k}` for balanced `g`.
    pub c_k: f64,
}

impl UnitData {
    pub fn new(spec: &FieldSpec, emb: &Embeddings) -> Result<UnitData> {
        let units = spec.units();
        for u in &units {
            if !spec.norm(u).abs().to_i64().is_some_and(|n| n == 1) {
                return Err(Error::InvalidSpec("listed unit does not have norm ±1".to_string()));
            }
        }
        let regulator = emb.regulator_dd(spec)?;
        if regulator.to_f64() < 1e-9 {
            return Err(Error::InvalidSpec("units are dependent".to_string()));
        }
        let logs: Vec<Vec<f64>> = units
            .iter()
            .map(|u| emb.log_abs(u).iter().map(|d| d.to_f64()).collect())
            .collect();
        let torsion = emb.torsion();
        let diam: f64 = logs
            .iter()
            .map(|l| libm::sqrt(l.iter().map(|x| x * x).sum::<f64>()))
            .sum();
        let b_k = diam + libm::log(torsion as f64);
        let c_k = inverse_frobenius(&emb.omega) * libm::sqrt(spec.degree as f64) * libm::exp(b_k);
        Ok(UnitData {
            units,
            logs,
            torsion,
            regulator,
            b_k,
            c_k,
        })
    }
}

/// `max_σ ln|g^σ| − min_σ ln|g^σ|`.
pub fn spread(logs: &[f64]) -> f64 {
    let mx = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mn = logs.iter().cloned().fold(f64::INFINITY, f64::min);
    mx - mn
}

impl Field {
    pub fn embeddings(&self) -> &Embeddings {
        &self.emb
    }

    pub fn unit_data(&self) -> &UnitData {
        &self.unit_data
    }

    /// Conjugates `x^σ`; fails when their product misses `|N(x)|` by more
    /// than `1e-9` relative.
    pub fn embed(&self, x: &AlgebraicInt) -> Result<Vec<CDd>> {
        if x.degree() != self.k {
            return Err(Error::FieldMismatch);
        }
        let v = self.emb.embed(x);
        if !x.is_zero() {
            let err = self.emb.product_error(&self.spec, x);
            if !(err < 1e-9) {
                return Err(Error::InsufficientPrecision { relative_error: err });
            }
        }
        Ok(v)
    }

    pub fn regulator(&self) -> f64 {
        self.unit_data.regulator.to_f64()
    }

    pub fn torsion(&self) -> u32 {
        self.unit_data.torsion
    }

    /// Residue of `ζ_K` at `s = 1` from the class number formula.
    pub fn dedekind_residue(&self) -> Dd {
        let two_pi = Dd::PI.mul_pow2(1);
        let num = Dd::from_f64(2.0).powi(self.emb.r1 as i32)
            * two_pi.powi(self.emb.r2 as i32)
            * Dd::from_f64(self.spec.class_number as f64)
            * self.unit_data.regulator;
        let d = big_to_dd(&self.spec.discriminant.abs()).sqrt();
        num / (Dd::from_f64(self.unit_data.torsion as f64) * d)
    }

    /// Unit exponents `c` minimizing the conjugate spread of `g·∏ ε_j^{c_j}`.
    pub fn balance_exponents(&self, g: &AlgebraicInt) -> Result<Vec<i64>> {
        if g.is_zero() {
            return Err(Error::Usage("cannot balance zero".to_string()));
        }
        let logs = &self.unit_data.logs;
        let r = logs.len();
        if r == 0 {
            return Ok(Vec::new());
        }
        let l: Vec<f64> = self.emb.log_abs(g).iter().map(|d| d.to_f64()).collect();
        let mean = l.iter().sum::<f64>() / self.k as f64;
        let t: Vec<f64> = l.iter().map(|x| x - mean).collect();
        // Normal equations for min ‖t + Σ c_j L_j‖.
        let a: Vec<Vec<f64>> = (0..r)
            .map(|i| (0..r).map(|j| dot(&logs[i], &logs[j])).collect())
            .collect();
        let b: Vec<f64> = (0..r).map(|i| -dot(&logs[i], &t)).collect();
        let c0: Vec<i64> = solve_f64(a, b)
            .ok_or_else(|| Error::InvalidSpec("singular unit log Gram matrix".to_string()))?
            .iter()
            .map(|x| libm::round(*x) as i64)
            .collect();
        let mut best: Option<(f64, f64, Vec<i64>)> = None;
        let width = 5usize;
        let total = width.pow(r as u32);
        for idx in 0..total {
            let mut c = c0.clone();
            let mut rest = idx;
            for cj in c.iter_mut() {
                *cj += (rest % width) as i64 - 2;
                rest /= width;
            }
            let v: Vec<f64> = (0..self.k)
                .map(|s| t[s] + (0..r).map(|j| c[j] as f64 * logs[j][s]).sum::<f64>())
                .collect();
            let sp = spread(&v);
            let nrm = dot(&v, &v);
            let better = match &best {
                None => true,
                Some((bs, bn, bc)) => {
                    sp < bs - 1e-12 || ((sp - bs).abs() <= 1e-12 && (nrm < bn - 1e-12 || ((nrm - bn).abs() <= 1e-12 && c < *bc)))
                }
            };
            if better {
                best = Some((sp, nrm, c));
            }
        }
        Ok(best.unwrap().2)
    }

    /// Multiplies `g` by a unit so that all conjugates have comparable size;
    /// the conjugate log-spread of the result is at most `B_K`.
    pub fn balance_generator(&self, g: &AlgebraicInt) -> Result<AlgebraicInt> {
        let c = self.balance_exponents(g)?;
        let mut out = g.clone();
        for (u, &e) in self.unit_data.units.iter().zip(&c) {
            if e != 0 {
                out = self.mul(&out, &self.unit_pow(u, e)?)?;
            }
        }
        Ok(out)
    }

    /// `max_σ ln|g^σ| − min_σ ln|g^σ|`.
    pub fn log_spread(&self, g: &AlgebraicInt) -> f64 {
        let l: Vec<f64> = self.emb.log_abs(g).iter().map(|d| d.to_f64()).collect();
        spread(&l)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean length of the coordinate vector.
pub fn euclid_norm(x: &AlgebraicInt) -> f64 {
    libm::sqrt(
        x.coords
            .iter()
            .map(|c| {
                let f = c.to_f64().unwrap_or(f64::INFINITY);
                f * f
            })
            .sum::<f64>(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots() {
        let spec = FieldSpec::cyclic_cubic();
        let emb = Embeddings::new(&spec).unwrap();
        assert_eq!(emb.r1, 3);
        let re: Vec<f64> = emb.roots.iter().map(|r| r.re.to_f64()).collect();
        let expect = [-1.532088886237956, -0.3472963553338607, 1.879385241571817];
        for (a, b) in re.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(emb.root_residual(&spec) < 1e-28);
    }

    #[test]
    fn quartic_is_totally_complex_with_eight_roots_of_unity() {
        let spec = FieldSpec::biquadratic();
        let emb = Embeddings::new(&spec).unwrap();
        assert_eq!((emb.r1, emb.r2), (0, 2));
        assert_eq!(emb.torsion(), 8);
        let reg = emb.regulator(&spec).unwrap();
        assert!((reg - 1.762747174039086).abs() < 1e-12, "{reg}");
    }

    #[test]
    fn cubic_regulator_and_residue() {
        let f = Field::new(FieldSpec::cyclic_cubic()).unwrap();
        assert_eq!(f.torsion(), 2);
        assert!((f.regulator() - 0.8492874506461916).abs() < 1e-12, "{}", f.regulator());
        let res = f.dedekind_residue().to_f64();
        assert!((res - 8.0 * f.regulator() / 18.0).abs() < 1e-14);
    }

    #[test]
    fn norm_two_has_all_conjugates_two() {
        let f = Field::new(FieldSpec::biquadratic()).unwrap();
        let v = f.embed(&AlgebraicInt::rational(4, 2)).unwrap();
        for z in v {
            assert!((z.re.to_f64() - 2.0).abs() < 1e-28 && z.im.to_f64().abs() < 1e-28);
        }
    }
}
