use markov_snake::poly::{PolyError, TriPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = TriPoly> {
    prop::collection::vec(((-3i64..4, -3i64..4, -3i64..4), -20i64..21), 0..6)
        .prop_map(|ts| TriPoly::from_terms(ts.into_iter().map(|((a, b, c), k)| ([a, b, c], k))))
}

fn nonzero_poly() -> impl Strategy<Value = TriPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

/// Evaluation at points where no variable vanishes, so Laurent terms are defined.
fn point() -> impl Strategy<Value = (i64, i64, i64)> {
    let nz = prop_oneof![-5i64..=-1, 1i64..=5];
    (nz.clone(), nz.clone(), nz)
}

proptest! {
    #[test]
    fn ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p - &p, TriPoly::zero());
        prop_assert_eq!(&p * &TriPoly::one(), p.clone());
        prop_assert!((&p * &TriPoly::zero()).is_zero());
        prop_assert!(p.terms().all(|(_, c)| !c.is_zero()));
    }

    #[test]
    fn exact_division_recovers_factor(p in poly(), q in nonzero_poly()) {
        prop_assert_eq!((&p * &q).exact_div(&q), Ok(p));
    }

    #[test]
    fn division_by_zero_is_an_error(p in poly()) {
        prop_assert_eq!(p.exact_div(&TriPoly::zero()), Err(PolyError::ZeroDivisor));
    }

    #[test]
    fn non_divisible_is_reported(p in nonzero_poly(), q in nonzero_poly()) {
        // Whatever exact_div returns must multiply back.
        if let Ok(d) = p.exact_div(&q) {
            prop_assert_eq!(&d * &q, p);
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(), q in poly(), (x, y, z) in point()) {
        let ev = |t: &TriPoly| t.eval_ints(x, y, z).unwrap();
        prop_assert_eq!(ev(&(&p * &q)), ev(&p) * ev(&q));
        prop_assert_eq!(ev(&(&p + &q)), ev(&p) + ev(&q));
    }

    #[test]
    fn json_round_trip(p in poly()) {
        prop_assert_eq!(TriPoly::from_json_str(&p.to_json_string()), Ok(p));
    }
}

#[test]
fn known_quotient() {
    // (x^2 - y^2) / (x - y) = x + y
    let num = TriPoly::from_terms([([2, 0, 0], 1), ([0, 2, 0], -1)]);
    let den = TriPoly::from_terms([([1, 0, 0], 1), ([0, 1, 0], -1)]);
    let quot = TriPoly::from_terms([([1, 0, 0], 1), ([0, 1, 0], 1)]);
    assert_eq!(num.exact_div(&den), Ok(quot));
    let bump = &num + &TriPoly::one();
    assert_eq!(bump.exact_div(&den), Err(PolyError::NotDivisible));
}

#[test]
fn laurent_evaluation_is_exact() {
    // x / z + y at (1, 1, 3) = 4/3
    let p = TriPoly::from_terms([([1, 0, -1], 1), ([0, 1, 0], 1)]);
    assert_eq!(p.eval_ints(1, 1, 3).unwrap(), BigRational::new(BigInt::from(4), BigInt::from(3)));
    assert_eq!(p.eval_ints(1, 1, 0), Err(PolyError::DivisionByZero));
}
