use glpwb::construction::build;
use glpwb::kripke::{enumerate_rooted_jtrees, JTree};
use glpwb::ordinal::Ordinal;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tree() -> impl Strategy<Value = JTree> {
    (0usize..=2, 1usize..=4, any::<prop::sample::Index>()).prop_map(|(n, size, i)| {
        let size = if n == 2 { size.min(3) } else { size };
        let all = enumerate_rooted_jtrees(n, size);
        all[i.index(all.len())].clone()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn model_maps_onto_tree(t in tree(), seed in any::<u64>()) {
        let m = build(&t).unwrap();
        prop_assert_eq!(m.eval_map(m.lambda()).unwrap(), t.root().unwrap());
        let witnesses = m.witnesses().unwrap();
        prop_assert_eq!(witnesses.len(), t.size());
        for (w, alpha) in &witnesses {
            prop_assert_eq!(m.eval_map(alpha).unwrap(), *w);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for alpha in m.samples(&mut rng, 20) {
            prop_assert!(alpha >= Ordinal::one() && &alpha <= m.lambda());
            prop_assert!(m.eval_map(&alpha).unwrap() < t.size());
        }
    }

    #[test]
    fn rank_height_and_suitability(t in tree(), seed in any::<u64>()) {
        let m = build(&t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = m.samples(&mut rng, 30);
        prop_assert!(m.check_rank_height(&samples).unwrap().is_ok());
        prop_assert!(m.check_suitability(&samples).unwrap().is_ok());
    }

    #[test]
    fn outside_the_interval_is_rejected(t in tree()) {
        let m = build(&t).unwrap();
        prop_assert!(m.eval_map(&Ordinal::zero()).is_err());
        prop_assert!(m.eval_map(&m.lambda().succ()).is_err());
    }
}
