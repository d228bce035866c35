use irvzone_geometry::{mc_vote_shares, Metric, Region, Scene};
use proptest::prelude::*;

fn candidates() -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0..1.0f64, 2), 1..=9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shares_are_conserved(mut cands in candidates(), seed in any::<u64>(), l1 in any::<bool>()) {
        let metric = if l1 { Metric::L1 } else { Metric::L2 };
        let scene = Scene::new(Region::rectangle(1.5, 1.0).unwrap(), metric).unwrap();
        cands.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cands.dedup();
        let mc = mc_vote_shares(&scene, &cands, 20_000, seed).unwrap();
        prop_assert!(mc.is_conserved());
        prop_assert!((mc.shares.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grid_ties_are_split(seed in any::<u64>()) {
        // Lattice candidates create L1 regions of positive area that are
        // equidistant; weights must still add up exactly.
        let scene = Scene::new(Region::rectangle(1.0, 1.0).unwrap(), Metric::L1).unwrap();
        let cands = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![0.5, 0.5]];
        let mc = mc_vote_shares(&scene, &cands, 10_000, seed).unwrap();
        prop_assert!(mc.is_conserved());
    }
}
