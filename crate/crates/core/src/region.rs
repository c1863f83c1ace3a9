//! Regions `R = B ∩ {1 ≤ f ≤ 2}` for an axis-aligned box `B` with rational
//! corners, and their dilates `R_X`.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::field::Field;
use crate::mpoly::MPoly;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub lo: Vec<BigRational>,
    pub hi: Vec<BigRational>,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Region {
    pub fn new(lo: Vec<BigRational>, hi: Vec<BigRational>) -> Result<Region> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::Usage("box corners must have equal positive length".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::Usage("box has lo > hi".into()));
        }
        Ok(Region { lo, hi })
    }

    /// Box from `(num, den)` pairs.
    pub fn from_pairs(lo: &[(i64, i64)], hi: &[(i64, i64)]) -> Result<Region> {
        Region::new(
            lo.iter().map(|&(n, d)| q(n, d)).collect(),
            hi.iter().map(|&(n, d)| q(n, d)).collect(),
        )
    }

    /// Default region for the built-in fields: `[1/2, 3/2] × [−1/2, 1/2]^{k−2}`.
    pub fn standard(k: usize) -> Region {
        let mut lo = alloc::vec![q(1, 2)];
        let mut hi = alloc::vec![q(3, 2)];
        for _ in 1..k - 1 {
            lo.push(q(-1, 2));
            hi.push(q(1, 2));
        }
        Region { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    fn check(&self, field: &Field) -> Result<()> {
        if self.dim() + 1 != field.degree() {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Integer range of coordinate `i` inside `X·B`.
    pub fn int_range(&self, i: usize, x: u64) -> (i128, i128) {
        let xb = BigInt::from(x);
        let lo = (&self.lo[i] * &xb).ceil().to_integer();
        let hi = (&self.hi[i] * &xb).floor().to_integer();
        (lo.to_i128().unwrap(), hi.to_i128().unwrap())
    }

    /// Largest `|x_i|` over `X·B`.
    pub fn radius(&self, x: u64) -> i128 {
        (0..self.dim())
            .map(|i| {
                let (a, b) = self.int_range(i, x);
                a.abs().max(b.abs())
            })
            .max()
            .unwrap_or(0)
    }

    /// Number of integer points of `X·B`.
    pub fn box_points(&self, x: u64) -> u128 {
        (0..self.dim())
            .map(|i| {
                let (a, b) = self.int_range(i, x);
                (b - a + 1).max(0) as u128
            })
            .product()
    }

    /// Whether `v ∈ X·B` (exact).
    pub fn in_box(&self, v: &[i128], x: u64) -> bool {
        let xb = BigInt::from(x);
        v.iter().enumerate().all(|(i, &c)| {
            let c = BigRational::from_integer(BigInt::from(c));
            c >= &self.lo[i] * &xb && c <= &self.hi[i] * &xb
        })
    }

    /// `X^k ≤ f(v) ≤ 2X^k` and `v ∈ X·B`; exact, with an `i128` fast path.
    pub fn contains_scaled(&self, field: &Field, v: &[i128], x: u64) -> Result<bool> {
        self.check(field)?;
        if !self.in_box(v, x) {
            return Ok(false);
        }
        let k = field.degree() as u32;
        let xk = BigInt::from(x).pow(k);
        let fv = if self.radius(x) < field.compiled_form().safe_radius() {
            BigInt::from(field.incomplete_norm_i128(v))
        } else {
            let vb: Vec<BigInt> = v.iter().map(|&c| BigInt::from(c)).collect();
            field.incomplete_norm(&vb)
        };
        Ok(fv >= xk && fv <= xk * 2)
    }

    /// Whether the dilate's integer coordinates admit the `i128` fast path.
    pub fn fast_path_ok(&self, field: &Field, x: u64) -> bool {
        self.radius(x) < field.compiled_form().safe_radius()
    }
}

/// A closed interval of reals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Interval {
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Interval {
        Interval { lo: x, hi: x }
    }

    fn add(self, o: Interval) -> Interval {
        Interval::new(self.lo + o.lo, self.hi + o.hi)
    }

    fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        Interval::new(
            c.iter().cloned().fold(f64::INFINITY, f64::min),
            c.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        )
    }

    fn scale(self, s: f64) -> Interval {
        if s >= 0.0 {
            Interval::new(self.lo * s, self.hi * s)
        } else {
            Interval::new(self.hi * s, self.lo * s)
        }
    }

    fn powi(self, e: u32) -> Interval {
        if e == 0 {
            return Interval::point(1.0);
        }
        let a = libm::pow(self.lo, e as f64);
        let b = libm::pow(self.hi, e as f64);
        if e % 2 == 1 {
            Interval::new(a, b)
        } else if self.lo >= 0.0 {
            Interval::new(a, b)
        } else if self.hi <= 0.0 {
            Interval::new(b, a)
        } else {
            Interval::new(0.0, a.max(b))
        }
    }

    fn intersect(self, o: Interval) -> Interval {
        Interval::new(self.lo.max(o.lo), self.hi.min(o.hi))
    }

    fn widen(self, rel: f64) -> Interval {
        let pad = rel * (self.lo.abs().max(self.hi.abs()) + 1.0);
        Interval::new(self.lo - pad, self.hi + pad)
    }
}

/// `f` and its gradient with `f64` coefficients, for interval bounds.
#[derive(Clone, Debug)]
pub struct IntervalForm {
    f: Vec<(Vec<u32>, f64)>,
    grad: Vec<Vec<(Vec<u32>, f64)>>,
}

fn float_terms(p: &MPoly) -> Vec<(Vec<u32>, f64)> {
    p.terms()
        .map(|(e, c)| (e.clone(), c.to_f64().unwrap()))
        .collect()
}

fn eval_terms(t: &[(Vec<u32>, f64)], x: &[Interval]) -> Interval {
    let mut acc = Interval::point(0.0);
    for (e, c) in t {
        let mut term = Interval::point(1.0);
        for (xi, &ei) in x.iter().zip(e) {
            if ei > 0 {
                term = term.mul(xi.powi(ei));
            }
        }
        acc = acc.add(term.scale(*c));
    }
    acc
}

fn eval_point(t: &[(Vec<u32>, f64)], x: &[f64]) -> f64 {
    t.iter()
        .map(|(e, c)| {
            e.iter()
                .zip(x)
                .fold(*c, |acc, (&ei, &xi)| acc * libm::pow(xi, ei as f64))
        })
        .sum()
}

impl IntervalForm {
    pub fn new(form: &MPoly) -> IntervalForm {
        IntervalForm {
            f: float_terms(form),
            grad: (0..form.nvars()).map(|i| float_terms(&form.partial(i))).collect(),
        }
    }

    /// Enclosure of `f` over a box: natural extension intersected with the
    /// mean-value form, padded for rounding.
    pub fn enclose(&self, cell: &[Interval]) -> Interval {
        let natural = eval_terms(&self.f, cell);
        let mid: Vec<f64> = cell.iter().map(|c| 0.5 * (c.lo + c.hi)).collect();
        let mut mv = Interval::point(eval_point(&self.f, &mid));
        for (i, g) in self.grad.iter().enumerate() {
            let r = 0.5 * (cell[i].hi - cell[i].lo);
            mv = mv.add(eval_terms(g, cell).mul(Interval::new(-r, r)));
        }
        natural.intersect(mv).widen(1e-12)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        eval_point(&self.f, x)
    }
}

/// Rational to `f64`.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    let (n, d) = (r.numer(), r.denom());
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if b.is_finite() && a.is_finite() => a / b,
        _ => {
            let (qt, rm) = n.div_mod_floor(d);
            qt.to_f64().unwrap() + rm.to_f64().unwrap() / d.to_f64().unwrap()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::FieldSpec;

    #[test]
    fn integer_ranges_and_membership() {
        let f = Field::new(FieldSpec::cyclic_cubic()).unwrap();
        let r = Region::standard(3);
        assert_eq!(r.int_range(0, 10), (5, 15));
        assert_eq!(r.int_range(1, 10), (-5, 5));
        assert_eq!(r.box_points(10), 121);
        // f(10, 0) = 1000 = X^3.
        assert!(r.contains_scaled(&f, &[10, 0], 10).unwrap());
        assert!(!r.contains_scaled(&f, &[15, 0], 10).unwrap());
        assert!(matches!(
            r.contains_scaled(&Field::new(FieldSpec::biquadratic()).unwrap(), &[10, 0], 10),
            Err(Error::FieldMismatch)
        ));
    }

    #[test]
    fn enclosure_contains_samples() {
        let f = Field::new(FieldSpec::biquadratic()).unwrap();
        let form = IntervalForm::new(f.norm_form());
        let cell = [
            Interval::new(0.5, 0.75),
            Interval::new(-0.25, 0.0),
            Interval::new(0.1, 0.3),
        ];
        let enc = form.enclose(&cell);
        for i in 0..=4 {
            for j in 0..=4 {
                for l in 0..=4 {
                    let x = [
                        0.5 + 0.0625 * i as f64,
                        -0.25 + 0.0625 * j as f64,
                        0.1 + 0.05 * l as f64,
                    ];
                    let v = form.value(&x);
                    assert!(enc.lo <= v && v <= enc.hi);
                }
            }
        }
    }
}
