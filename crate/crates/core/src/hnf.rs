//! Integral ideals as sublattices of `Z^k` in Hermite normal form.
//!
//! Columns are stored upper triangular: column `j` is supported on rows
//! `0..=j`, has a positive diagonal entry, and its entries above the diagonal
//! are reduced into `[0, h_ii)`. Column 0 is `a·ω_1` with `a` the positive
//! generator of `𝔫 ∩ Z`. All arithmetic is modular with a multiple of `a`
//! kept below `2^62`, so products fit in `i128`.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::arith::egcd_i128;
use crate::{Error, Result};

/// Largest admissible modulus.
pub const MODULUS_LIMIT: i128 = 1 << 62;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealHnf {
    /// `cols[j][i]`, zero for `i > j`.
    cols: Vec<Vec<i128>>,
}

impl IdealHnf {
    pub fn unit(k: usize) -> IdealHnf {
        let cols = (0..k)
            .map(|j| (0..k).map(|i| i128::from(i == j)).collect())
            .collect();
        IdealHnf { cols }
    }

    /// HNF of the lattice spanned by `gens` together with `d·Z^k`. The caller
    /// guarantees that `d·Z^k` lies in the lattice.
    pub fn from_generators(gens: &[Vec<i128>], d: i128, k: usize) -> Result<IdealHnf> {
        if d <= 0 {
            return Err(Error::Usage("modulus must be positive".into()));
        }
        if d >= MODULUS_LIMIT {
            return Err(Error::Overflow("ideal modulus"));
        }
        let mut work: Vec<Vec<i128>> = gens
            .iter()
            .map(|g| g.iter().map(|x| x.rem_euclid(d)).collect())
            .filter(|g: &Vec<i128>| g.iter().any(|&x| x != 0))
            .collect();
        let mut cols = vec![vec![0i128; k]; k];
        for i in (0..k).rev() {
            let mut piv = vec![0i128; k];
            piv[i] = d;
            for g in work.iter_mut() {
                if g[i] == 0 {
                    continue;
                }
                let (gg, s, t) = egcd_i128(piv[i], g[i]);
                let a = piv[i] / gg;
                let b = g[i] / gg;
                let mut np = vec![0i128; k];
                let mut ng = vec![0i128; k];
                for l in 0..i {
                    np[l] = (s * piv[l] + t * g[l]).rem_euclid(d);
                    ng[l] = (a * g[l] - b * piv[l]).rem_euclid(d);
                }
                np[i] = gg;
                piv = np;
                *g = ng;
            }
            work.retain(|g| g.iter().any(|&x| x != 0));
            cols[i] = piv;
        }
        for j in 0..k {
            for i in (0..j).rev() {
                let q = cols[j][i].div_euclid(cols[i][i]);
                if q != 0 {
                    for l in 0..=i {
                        cols[j][l] -= q * cols[i][l];
                    }
                    for l in 0..i {
                        cols[j][l] = cols[j][l].rem_euclid(d);
                    }
                }
            }
        }
        Ok(IdealHnf { cols })
    }

    pub fn degree(&self) -> usize {
        self.cols.len()
    }

    pub fn columns(&self) -> &[Vec<i128>] {
        &self.cols
    }

    #[inline]
    pub fn diag(&self, i: usize) -> i128 {
        self.cols[i][i]
    }

    /// Positive generator of `𝔫 ∩ Z`.
    pub fn min_integer(&self) -> i128 {
        self.cols[0][0]
    }

    pub fn norm(&self) -> BigInt {
        self.cols
            .iter()
            .enumerate()
            .fold(BigInt::one(), |acc, (i, c)| acc * BigInt::from(c[i]))
    }

    pub fn norm_u128(&self) -> Option<u128> {
        self.cols
            .iter()
            .enumerate()
            .try_fold(1u128, |acc, (i, c)| acc.checked_mul(c[i] as u128))
    }

    /// Last diagonal entry; equals `N𝔫 / det(𝔫 ∩ Z^{k−1})`.
    pub fn last_diag(&self) -> i128 {
        let k = self.cols.len();
        self.cols[k - 1][k - 1]
    }

    pub fn is_unit(&self) -> bool {
        self.cols[0][0] == 1
    }

    /// Membership by back-substitution.
    pub fn contains(&self, x: &[i128]) -> bool {
        let a = self.min_integer();
        let mut v: Vec<i128> = x.iter().map(|c| c.rem_euclid(a)).collect();
        for i in (0..v.len()).rev() {
            let h = self.cols[i][i];
            if v[i] % h != 0 {
                return false;
            }
            let c = v[i] / h;
            if c != 0 {
                for l in 0..i {
                    v[l] = (v[l] - c * self.cols[i][l]).rem_euclid(a);
                }
            }
            v[i] = 0;
        }
        true
    }

    pub fn contains_big(&self, x: &[BigInt]) -> bool {
        let a = BigInt::from(self.min_integer());
        let v: Vec<i128> = x
            .iter()
            .map(|c| c.mod_floor(&a).to_i128().unwrap())
            .collect();
        self.contains(&v)
    }

    /// `self | other`, that is `other ⊆ self`.
    pub fn divides(&self, other: &IdealHnf) -> bool {
        other.cols.iter().all(|c| self.contains(c))
    }

    /// Generators `x·y` for all column pairs, computed modulo `d`.
    pub fn product(&self, other: &IdealHnf, tensor: &[i64]) -> Result<IdealHnf> {
        let k = self.cols.len();
        let d = self
            .min_integer()
            .checked_mul(other.min_integer())
            .filter(|&d| d < MODULUS_LIMIT)
            .ok_or(Error::Overflow("ideal product modulus"))?;
        let mut gens = Vec::with_capacity(k * k);
        for x in &self.cols {
            for y in &other.cols {
                gens.push(mul_mod(x, y, tensor, d));
            }
        }
        IdealHnf::from_generators(&gens, d, k)
    }

    /// `(g)` for an element with `|N(g)| = norm`.
    pub fn principal(g: &[i128], norm: i128, tensor: &[i64]) -> Result<IdealHnf> {
        let k = g.len();
        let d = norm.abs();
        let gens: Vec<Vec<i128>> = (0..k)
            .map(|j| {
                let mut e = vec![0i128; k];
                e[j] = 1;
                mul_mod(g, &e, tensor, d.max(1))
            })
            .collect();
        IdealHnf::from_generators(&gens, d, k)
    }
}

/// `x·y mod d` through the multiplication tensor.
pub fn mul_mod(x: &[i128], y: &[i128], tensor: &[i64], d: i128) -> Vec<i128> {
    let k = x.len();
    let mut out = vec![0i128; k];
    for (i, &xi) in x.iter().enumerate() {
        let xi = xi.rem_euclid(d);
        if xi == 0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            let yj = yj.rem_euclid(d);
            if yj == 0 {
                continue;
            }
            let p = (xi * yj) % d;
            let base = (i * k + j) * k;
            for (r, o) in out.iter_mut().enumerate() {
                let a = tensor[base + r] as i128;
                if a != 0 {
                    *o = (*o + a * p).rem_euclid(d);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::FieldSpec;

    #[test]
    fn rational_ideal() {
        let spec = FieldSpec::cyclic_cubic();
        let two = IdealHnf::principal(&[2, 0, 0], 8, &spec.tensor).unwrap();
        for i in 0..3 {
            assert_eq!(two.diag(i), 2);
        }
        assert_eq!(two.norm(), BigInt::from(8));
        assert!(two.contains(&[4, -2, 6]));
        assert!(!two.contains(&[4, -1, 6]));
        assert_eq!(two.last_diag(), 2);
    }

    #[test]
    fn unit_ideal_from_unit_element() {
        let spec = FieldSpec::cyclic_cubic();
        let u = IdealHnf::principal(&[1, 1, 0], 1, &spec.tensor).unwrap();
        assert_eq!(u, IdealHnf::unit(3));
    }

    #[test]
    fn canonical_form_is_reduced() {
        let spec = FieldSpec::biquadratic();
        let g = [3i128, 1, 0, 2];
        let n = spec.norm(&crate::AlgebraicInt::from_i128s(&g));
        let id = IdealHnf::principal(&g, n.to_i128().unwrap(), &spec.tensor).unwrap();
        assert_eq!(id.norm(), n.magnitude().clone().into());
        for j in 0..4 {
            for i in 0..j {
                let v = id.columns()[j][i];
                assert!(v >= 0 && v < id.diag(i));
            }
            for i in j + 1..4 {
                assert_eq!(id.columns()[j][i], 0);
            }
        }
    }
}
