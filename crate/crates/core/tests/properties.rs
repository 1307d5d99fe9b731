mod common;

use proptest::prelude::*;

use common::{ppoly, rational};
use qcong::numbers::rat;
use qcong::powerseries::QSeries;

fn series(order: usize) -> impl Strategy<Value = QSeries> {
    prop::collection::vec(-5i64..=5, order + 1).prop_map(move |cs| QSeries::from_coeffs(cs.into_iter().map(rat).collect(), order))
}

#[test]
fn cyclotomic_product_up_to_60() {
    common::cyclotomic_product(60).unwrap();
}

#[test]
fn q_integer_factors_into_cyclotomics() {
    common::q_integer_factorization(60).unwrap();
}

#[test]
fn q_pascal_recurrence() {
    common::q_pascal(30).unwrap();
}

#[test]
fn central_binomial_up_to_200() {
    common::central_binomial(200).unwrap();
}

#[test]
fn bernoulli_up_to_100() {
    common::bernoulli_properties(100).unwrap();
}

#[test]
fn euler_pentagonal_through_50() {
    common::euler_pentagonal(50).unwrap();
}

#[test]
fn classical_degeneration_up_to_10() {
    common::classical_degeneration(10).unwrap();
}

#[test]
fn strategies_agree_small_n() {
    common::strategy_agreement(5).unwrap();
}

proptest! {
    #[test]
    fn pochhammer_splits(x in rational(), m in 0u32..12, n in 0u32..12) {
        prop_assert!(common::pochhammer_multiplicative(&x, m, n).is_ok());
    }

    #[test]
    fn q_pochhammer_splits(s in 1u64..6, d in 1u64..4, m in 0u64..8, n in 0u64..8) {
        prop_assert!(common::qpoch_multiplicative(s, d, m, n).is_ok());
    }

    #[test]
    fn q_binomial_symmetry(m in 0u64..20, k in 0i64..20) {
        prop_assume!(k as u64 <= m);
        prop_assert_eq!(qcong::qpoly::q_binomial(m, k), qcong::qpoly::q_binomial(m, m as i64 - k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pseudo_division_identity(f in ppoly(13), m in ppoly(13)) {
        prop_assume!(!m.is_zero());
        prop_assert_eq!(common::pseudo_division_holds(&f, &m), Ok(()));
    }

    #[test]
    fn specialize_is_a_ring_map(f in ppoly(4), g in ppoly(4), alpha in rational(), beta in rational()) {
        let sf = f.specialize(&alpha, &beta);
        let sg = g.specialize(&alpha, &beta);
        prop_assert_eq!((&f * &g).specialize(&alpha, &beta), &sf * &sg);
        prop_assert_eq!((&f + &g).specialize(&alpha, &beta), &sf + &sg);
        prop_assert_eq!((&f - &g).specialize(&alpha, &beta), &sf - &sg);
    }

    #[test]
    fn truncation_is_a_ring_map(f in series(12), g in series(12), t in 0usize..12) {
        prop_assert_eq!((&f * &g).truncate(t), &f.truncate(t) * &g.truncate(t));
        prop_assert_eq!((&f + &g).truncate(t), &f.truncate(t) + &g.truncate(t));
    }

    #[test]
    fn series_inverse(f in series(10)) {
        let c0 = f.coeffs()[0].clone();
        prop_assume!(c0 != rat(0));
        let inv = f.inverse().unwrap();
        prop_assert_eq!(&f * &inv, QSeries::one(10));
    }
}

#[test]
fn pseudo_division_fixed_seed() {
    assert_eq!(common::pseudo_division_seeded(200), Ok(200));
}
