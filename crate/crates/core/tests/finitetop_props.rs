use glpwb::bits;
use glpwb::finitetop::{
    d_product, is_d_map, is_l_maximal_by_criterion, is_l_maximal_by_def, plus_topology,
    random_scattered, random_topology, DeltaOperator, FiniteSpace,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn space(max: usize) -> impl Strategy<Value = FiniteSpace> {
    (1..=max, any::<u64>())
        .prop_map(|(size, seed)| random_topology(&mut ChaCha8Rng::seed_from_u64(seed), size))
}

fn scattered(max: usize) -> impl Strategy<Value = FiniteSpace> {
    (1..=max, any::<u64>())
        .prop_map(|(size, seed)| random_scattered(&mut ChaCha8Rng::seed_from_u64(seed), size))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn derived_set_is_additive(s in space(6), a in any::<u64>(), b in any::<u64>()) {
        let (a, b) = (a & s.full(), b & s.full());
        prop_assert_eq!(s.d(a | b), s.d(a) | s.d(b));
        prop_assert_eq!(s.d(0), 0);
        prop_assert!(bits::is_subset(s.d(s.d(a)), a | s.d(a)));
    }

    #[test]
    fn scattered_derived_set_laws(s in scattered(6), a in any::<u64>()) {
        let a = a & s.full();
        let da = s.d(a);
        prop_assert!(bits::is_subset(s.d(da), da));
        prop_assert_eq!(s.d(a & !da), da);
    }

    #[test]
    fn magari_iff_scattered(s in space(5)) {
        let delta = DeltaOperator::of_space(&s).unwrap();
        prop_assert_eq!(delta.is_magari(), s.is_scattered());
        if s.is_scattered() {
            prop_assert_eq!(delta.to_space().unwrap(), s);
        }
    }

    #[test]
    fn rank_map_is_d_map(s in scattered(6)) {
        let ranks = s.ranks().unwrap();
        let target = FiniteSpace::left(s.rank().unwrap());
        prop_assert!(is_d_map(&s, &target, &ranks));
    }

    #[test]
    fn plus_is_discrete(s in scattered(5)) {
        prop_assert_eq!(plus_topology(&s), FiniteSpace::discrete(s.size()));
    }

    #[test]
    fn l_maximality_agrees(s in scattered(4)) {
        prop_assert_eq!(
            is_l_maximal_by_def(&s).unwrap(),
            is_l_maximal_by_criterion(&s).unwrap()
        );
    }

    #[test]
    fn d_product_carrier(x in scattered(3), y in scattered(3)) {
        let p = d_product(&x, &y).unwrap();
        let want = x.size() * y.iso().count_ones() as usize + y.d(y.full()).count_ones() as usize;
        prop_assert_eq!(p.space.size(), want);
        prop_assert!(p.space.is_scattered());
    }

    #[test]
    fn raw_round_trip(s in space(5)) {
        prop_assert_eq!(FiniteSpace::from_raw(&s.to_raw()).unwrap(), s);
    }
}

/// A finite witness to non-monotonicity of `τ ↦ τ⁺` would be scattered
/// `τ ⊆ σ` with `τ⁺ ⊄ σ⁺`. Every finite `τ⁺` is discrete, so the search
/// comes up empty.
#[test]
fn plus_has_no_finite_non_monotonicity_witness() {
    use glpwb::finitetop::scattered_topologies;
    for size in 1..=4 {
        let all = scattered_topologies(size).unwrap();
        for t in &all {
            for s in all.iter().filter(|s| t.is_subtopology_of(s)) {
                assert!(plus_topology(t).is_subtopology_of(&plus_topology(s)));
            }
        }
    }
}
