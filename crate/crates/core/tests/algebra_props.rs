//! Property tests for the exact arithmetic layer and the thirds-power series.

use num_bigint::BigInt;
use proptest::prelude::*;

use pi2_core::algebra::{LaurentSeries, Poly, Rational, RationalFunction};
use pi2_core::asym::ThirdsSeries;

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(), 1..=max_len).prop_map(Poly::from_coeffs)
}

fn ratfunc() -> impl Strategy<Value = RationalFunction> {
    (poly(3), poly(3).prop_filter("nonzero denominator", |p| !p.is_zero()))
        .prop_map(|(n, d)| RationalFunction::new(n, d).expect("nonzero denominator"))
}

fn laurent() -> impl Strategy<Value = LaurentSeries<Rational>> {
    (-3i32..=2, rational().prop_filter("unit", |c| c != &Rational::from_integer(0.into())), prop::collection::vec(rational(), 0..4))
        .prop_map(|(low, lead, rest)| {
            let mut coeffs = vec![lead];
            coeffs.extend(rest);
            LaurentSeries::exact(low, coeffs)
        })
}

fn thirds() -> impl Strategy<Value = ThirdsSeries> {
    (prop::collection::vec((-6i32..=4, -3.0f64..3.0), 1..5), -12i32..=-8).prop_map(|(terms, err)| {
        let mut s = ThirdsSeries::zero(err);
        for (n, c) in terms {
            s.add_term(n, c);
        }
        s
    })
}

proptest! {
    #[test]
    fn ratfunc_ring_laws(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn ratfunc_normalization_is_idempotent(a in ratfunc()) {
        let again = RationalFunction::new(a.numerator().clone(), a.denominator().clone()).unwrap();
        prop_assert_eq!(&again, &a);
        let (n, d) = a.to_integer_lists();
        prop_assert_eq!(RationalFunction::from_integer_lists(&n, &d).unwrap(), a);
    }

    #[test]
    fn ratfunc_division_inverts_multiplication(a in ratfunc(), b in ratfunc()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).checked_div(&b).unwrap(), a);
    }

    #[test]
    fn laurent_reciprocal_is_an_involution(a in laurent()) {
        let n = 6;
        let v = a.valuation().unwrap();
        let inv = a.reciprocal(n).unwrap();
        prop_assert!(a.mul(&inv).agrees_through(&LaurentSeries::one(), n + v));
        let back = inv.reciprocal(n).unwrap();
        prop_assert!(back.agrees_through(&a, n.min(n + 2 * v)));
    }

    #[test]
    fn laurent_principal_plus_analytic(a in laurent()) {
        prop_assert_eq!(a.principal_part().add(&a.analytic_part()), a);
    }

    #[test]
    fn laurent_ring_laws(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn thirds_product_matches_values(a in thirds(), b in thirds()) {
        let p = a.mul(&b);
        prop_assert_eq!(p.err(), (a.err() + b.leading().unwrap_or(b.err())).max(b.err() + a.leading().unwrap_or(a.err())));
        let (ab, ba) = (p, b.mul(&a));
        for n in -12..=8 {
            prop_assert!((ab.coeff(n) - ba.coeff(n)).abs() <= 1e-12);
        }
        let sum = a.add(&b);
        let s = 7.5f64;
        prop_assert_eq!(sum.err(), a.err().max(b.err()));
        let direct: f64 = a.terms().chain(b.terms()).filter(|&(n, _)| n > sum.err()).map(|(n, c)| c * s.powf(n as f64 / 3.0)).sum();
        prop_assert!((sum.eval(s) - direct).abs() <= 1e-9 * (1.0 + direct.abs()));
    }
}
