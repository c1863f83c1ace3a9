//! Sparse multivariate integer polynomials, just enough for norm forms:
//! products, determinants of polynomial matrices, affine substitution and
//! fast evaluation (exact in `i128`, or modulo a machine integer).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> MPoly {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> MPoly {
        let mut p = MPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// `Σ coeffs[i]·x_i`.
    pub fn linear(coeffs: &[BigInt]) -> MPoly {
        let n = coeffs.len();
        let mut p = MPoly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, s: &BigInt) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    /// Gcd of all coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Exact division of every coefficient; the caller guarantees divisibility.
    pub fn div_exact(&self, d: &BigInt) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    debug_assert!((c % d).is_zero());
                    (e.clone(), c / d)
                })
                .collect(),
        }
    }

    pub fn partial(&self, var: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                out.add_term(e2, c * BigInt::from(e[var]));
            }
        }
        out
    }

    pub fn eval_big(&self, x: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &ei) in x.iter().zip(e) {
                for _ in 0..ei {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_mod(&self, x: &[u64], q: u64) -> u64 {
        let qb = BigInt::from(q);
        let mut acc: u128 = 0;
        for (e, c) in &self.terms {
            let cm = c.mod_floor(&qb).to_u64().unwrap();
            let mut t = cm as u128;
            for (&xi, &ei) in x.iter().zip(e) {
                for _ in 0..ei {
                    t = t * xi as u128 % q as u128;
                }
            }
            acc = (acc + t) % q as u128;
        }
        acc as u64
    }

    /// `g(r + s·y)` as a polynomial in `y`.
    pub fn substitute_affine(&self, r: &[BigInt], s: &BigInt) -> MPoly {
        let n = self.nvars;
        let deg = self.total_degree() as usize;
        // powers[i][d] = (r_i + s·y_i)^d
        let mut powers: Vec<Vec<MPoly>> = Vec::with_capacity(n);
        for (i, ri) in r.iter().enumerate() {
            let mut lin = MPoly::constant(n, ri.clone());
            let mut e = vec![0; n];
            e[i] = 1;
            lin.add_term(e, s.clone());
            let mut row = vec![MPoly::constant(n, BigInt::one())];
            for d in 1..=deg {
                let next = row[d - 1].mul(&lin);
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = MPoly::zero(n);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(n, c.clone());
            for (i, &ei) in e.iter().enumerate() {
                if ei > 0 {
                    t = t.mul(&powers[i][ei as usize]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Determinant of a square matrix of polynomials, by dynamic programming
    /// over the subsets of used columns.
    pub fn determinant(m: &[Vec<MPoly>], nvars: usize) -> MPoly {
        let k = m.len();
        let full = 1usize << k;
        let mut table: Vec<Option<MPoly>> = vec![None; full];
        table[0] = Some(MPoly::constant(nvars, BigInt::one()));
        for set in 1..full {
            let row = set.count_ones() as usize - 1;
            let mut acc = MPoly::zero(nvars);
            for j in 0..k {
                if set & (1 << j) == 0 || m[row][j].is_zero() {
                    continue;
                }
                let rest = set & !(1 << j);
                let Some(minor) = table[rest].as_ref() else {
                    continue;
                };
                if minor.is_zero() {
                    continue;
                }
                let above = (rest >> (j + 1)).count_ones();
                let term = m[row][j].mul(minor);
                acc = if above % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            table[set] = Some(acc);
        }
        table[full - 1].take().unwrap()
    }

    pub fn compile(&self) -> Option<CompiledForm> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            terms.push((e.iter().map(|&x| x as u8).collect(), c.to_i128()?));
        }
        Some(CompiledForm {
            nvars: self.nvars,
            degree: self.total_degree(),
            terms,
            max_abs_coeff: self.terms.values().map(|c| c.abs()).max().unwrap_or_default(),
        })
    }
}

/// A polynomial with machine-size coefficients for hot loops.
#[derive(Clone, Debug)]
pub struct CompiledForm {
    pub nvars: usize,
    pub degree: u32,
    terms: Vec<(Vec<u8>, i128)>,
    max_abs_coeff: BigInt,
}

impl CompiledForm {
    /// Largest `|x_i|` for which `eval_i128` cannot overflow.
    pub fn safe_radius(&self) -> i128 {
        let nterms = BigInt::from(self.terms.len().max(1));
        let bound = (BigInt::one() << 125u32) / (nterms * self.max_abs_coeff.clone().max(BigInt::one()));
        let r = bound.nth_root(self.degree.max(1));
        r.to_i128().unwrap_or(i128::MAX)
    }

    #[inline]
    pub fn eval_i128(&self, x: &[i128]) -> i128 {
        let mut acc = 0i128;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (xi, &ei) in x.iter().zip(e) {
                for _ in 0..ei {
                    t *= *xi;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_mod(&self, x: &[u64], q: u64) -> u64 {
        let q128 = q as i128;
        let mut acc = 0u128;
        for (e, c) in &self.terms {
            let mut t = c.rem_euclid(q128) as u128;
            for (&xi, &ei) in x.iter().zip(e) {
                for _ in 0..ei {
                    t = t * xi as u128 % q as u128;
                }
            }
            acc = (acc + t) % q as u128;
        }
        acc as u64
    }

    /// Coefficients modulo `q` (low degree first) of `t ↦ f(prefix, t)`.
    pub fn univariate_last_mod(&self, prefix: &[u64], q: u64) -> Vec<u64> {
        let last = self.nvars - 1;
        let mut out = vec![0u128; self.degree as usize + 1];
        for (e, c) in &self.terms {
            let mut t = c.rem_euclid(q as i128) as u128;
            for (&xi, &ei) in prefix.iter().zip(e.iter().take(last)) {
                for _ in 0..ei {
                    t = t * xi as u128 % q as u128;
                }
            }
            let d = e[last] as usize;
            out[d] = (out[d] + t) % q as u128;
        }
        out.into_iter().map(|v| v as u64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn determinant_of_constants() {
        let c = |x| MPoly::constant(1, b(x));
        let m = vec![
            vec![c(2), c(1), c(0)],
            vec![c(1), c(3), c(1)],
            vec![c(0), c(1), c(4)],
        ];
        let d = MPoly::determinant(&m, 1);
        assert_eq!(d, c(2 * (12 - 1) - (4 - 0)));
    }

    #[test]
    fn substitution_matches_evaluation() {
        // g = x^2 y - 3 y^3 + 5
        let mut g = MPoly::zero(2);
        g.add_term(vec![2, 1], b(1));
        g.add_term(vec![0, 3], b(-3));
        g.add_term(vec![0, 0], b(5));
        let h = g.substitute_affine(&[b(2), b(-1)], &b(7));
        for (y1, y2) in [(0, 0), (1, 2), (-3, 5)] {
            let lhs = h.eval_big(&[b(y1), b(y2)]);
            let rhs = g.eval_big(&[b(2 + 7 * y1), b(-1 + 7 * y2)]);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn compiled_agrees() {
        let mut g = MPoly::zero(2);
        g.add_term(vec![3, 0], b(1));
        g.add_term(vec![1, 2], b(-3));
        g.add_term(vec![0, 3], b(1));
        let cf = g.compile().unwrap();
        for x in -5i64..5 {
            for y in -5i64..5 {
                let v = g.eval_big(&[b(x), b(y)]);
                assert_eq!(BigInt::from(cf.eval_i128(&[x as i128, y as i128])), v);
                let q = 13u64;
                let xm = [(x.rem_euclid(13)) as u64, (y.rem_euclid(13)) as u64];
                assert_eq!(
                    BigInt::from(cf.eval_mod(&xm, q)),
                    v.mod_floor(&BigInt::from(13))
                );
            }
        }
    }
}
