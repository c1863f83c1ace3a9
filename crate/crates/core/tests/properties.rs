use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Signed;
use normdiv_core::arith::{factor, gcd_u64, is_prime, tau};
use normdiv_core::asymptotic::binomial_identity_check;
use normdiv_core::divisor::{hyperbola_decompose, DivisorWindow, PrimeTable};
use normdiv_core::{Field, FieldSpec, IdealHnf};
use proptest::prelude::*;

fn cubic() -> &'static Field {
    static F: OnceLock<Field> = OnceLock::new();
    F.get_or_init(|| Field::new(FieldSpec::cyclic_cubic()).unwrap())
}

fn quartic() -> &'static Field {
    static F: OnceLock<Field> = OnceLock::new();
    F.get_or_init(|| Field::new(FieldSpec::biquadratic()).unwrap())
}

fn field(quartic_field: bool) -> &'static Field {
    if quartic_field {
        quartic()
    } else {
        cubic()
    }
}

fn pick(f: &Field, n: u64, i: usize) -> Option<IdealHnf> {
    let list = f.ideals_of_norm(n).unwrap();
    (!list.is_empty()).then(|| list[i % list.len()].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorization_reconstructs(n in 1u64..=u64::MAX / 2) {
        let f = factor(n);
        let mut prod = 1u128;
        for (p, a) in &f {
            prop_assert!(is_prime(*p));
            prod *= (*p as u128).pow(*a);
        }
        prop_assert_eq!(prod, n as u128);
    }

    #[test]
    fn tau_recursion(n in 1u64..200_000, k in 2u32..6) {
        let mut s = 0;
        for d in 1..=n {
            if n % d == 0 {
                s += tau(n / d, k - 1);
            }
        }
        prop_assert_eq!(tau(n, k), s);
    }

    #[test]
    fn tau_multiplicative(a in 1u64..1_000_000, b in 1u64..1_000_000, k in 2u32..7) {
        prop_assume!(gcd_u64(a, b) == 1);
        prop_assert_eq!(tau(a * b, k), tau(a, k) * tau(b, k));
    }

    #[test]
    fn hyperbola_reassembles(n in 1u64..10_000_000, y in 1u64..400, k in 2u32..6) {
        let d = hyperbola_decompose(n, y, k).unwrap();
        prop_assert_eq!(d.total(), tau(n, k) as i128);
    }

    #[test]
    fn sieve_window_matches(a in 1u64..5_000_000, k in 2u32..5) {
        let table = PrimeTable::new(a + 2000);
        let w = DivisorWindow::sieve(&table, a, a + 2000, k, 4096).unwrap();
        for n in a..=a + 2000 {
            prop_assert_eq!(w.tau_k(n), tau(n, k));
            prop_assert_eq!(w.factorization(n).to_vec(), factor(n));
        }
    }

    #[test]
    fn ideal_norm_multiplicative(q in any::<bool>(), n in 2u64..400, m in 2u64..400, i in 0usize..8, j in 0usize..8) {
        let f = field(q);
        let (Some(a), Some(b)) = (pick(f, n, i), pick(f, m, j)) else {
            return Ok(());
        };
        let ab = f.ideal_product(&a, &b).unwrap();
        prop_assert_eq!(ab.norm(), BigInt::from(n * m));
        prop_assert!(a.divides(&ab) && b.divides(&ab));
    }

    #[test]
    fn rho_multiplicative(q in any::<bool>(), n in 2u64..600, m in 2u64..600, i in 0usize..8, j in 0usize..8) {
        prop_assume!(gcd_u64(n, m) == 1);
        let f = field(q);
        let (Some(a), Some(b)) = (pick(f, n, i), pick(f, m, j)) else {
            return Ok(());
        };
        let ab = f.ideal_product(&a, &b).unwrap();
        prop_assert_eq!(
            f.rho_ideal(&ab).value,
            f.rho_ideal(&a).value * f.rho_ideal(&b).value
        );
    }

    #[test]
    fn generator_norm(q in any::<bool>(), n in 2u64..3000, i in 0usize..8) {
        let f = field(q);
        let Some(a) = pick(f, n, i) else { return Ok(()) };
        let g = f.principal_generator(&a).unwrap();
        prop_assert_eq!(f.norm(&g).abs(), BigInt::from(n));
    }

    #[test]
    fn inclusion_exclusion(q in any::<bool>(), n in 1u64..40, m in 1u64..3000, i in 0usize..8) {
        let f = field(q);
        let Some(id) = pick(f, m, i) else { return Ok(()) };
        let mu = f.mu_coefficients(n).unwrap();
        let s: i64 = mu
            .entries
            .iter()
            .filter(|(a, _)| a.divides(&id))
            .map(|(_, c)| c)
            .sum();
        prop_assert_eq!(s, i64::from(m % n == 0));
    }

    #[test]
    fn varrho_assembled_matches_direct(q in any::<bool>(), n in 1u64..120) {
        let f = field(q);
        prop_assert_eq!(f.varrho_direct(n).unwrap().value, f.varrho_assembled(n).unwrap().value);
    }
}

#[test]
fn binomial_identity_holds() {
    for k in 3..=12 {
        assert!(binomial_identity_check(k), "k = {k}");
    }
}
