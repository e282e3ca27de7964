use glpwb::ordinal::{parse, Ordinal};
use glpwb::selftest::ordinal_triple_laws;
use proptest::prelude::*;

/// Ordinals below ω^(ω^ω), built as sums of monomials.
fn ordinal() -> impl Strategy<Value = Ordinal> {
    let small = prop::collection::vec((0u64..4, 0u64..5), 0..3).prop_map(|terms| {
        terms.into_iter().fold(Ordinal::zero(), |acc, (e, c)| {
            acc.add(&Ordinal::monomial(Ordinal::from(e), c)).unwrap()
        })
    });
    // `small` ranges below ω^4, so the exponents stay below ω^ω
    prop::collection::vec((small, 0u64..6), 0..4).prop_map(|terms| {
        terms.into_iter().fold(Ordinal::zero(), |acc, (e, c)| {
            acc.add(&Ordinal::monomial(e, c)).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn algebraic_laws(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(ordinal_triple_laws(&a, &b, &c), Ok(()));
    }

    #[test]
    fn text_round_trip(a in ordinal()) {
        prop_assert_eq!(parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn r_of_power(b in ordinal()) {
        prop_assert_eq!(Ordinal::omega_pow(b.clone()).r(), b.clone());
        prop_assert!(b.r() <= b);
    }

    #[test]
    fn succ_pred(a in ordinal()) {
        prop_assert_eq!(a.succ().pred().unwrap(), a.clone());
        prop_assert!(a.succ().is_successor());
        prop_assert!(a.is_zero() || a.is_successor() != a.is_limit());
    }

    #[test]
    fn addition_is_monotone_on_the_right(a in ordinal(), b in ordinal(), c in ordinal()) {
        if b < c {
            prop_assert!(a.add(&b).unwrap() < a.add(&c).unwrap());
        }
    }
}
