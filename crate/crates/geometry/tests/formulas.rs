//! Monte-Carlo shares against closed-form areas.

use irvzone_geometry::{mc_irv_outcome, mc_vote_shares, McIrvOutcome, Metric, Region, Scene};

const SAMPLES: usize = 1_000_000;

fn square() -> Scene {
    Scene::new(Region::rectangle(1.0, 1.0).unwrap(), Metric::L2).unwrap()
}

fn within(scene: &Scene, cands: &[Vec<f64>], expected: &[(usize, f64)], seed: u64) {
    let mc = mc_vote_shares(scene, cands, SAMPLES, seed).unwrap();
    for &(i, want) in expected {
        let se = mc.std_errors[i];
        assert!(
            (mc.shares[i] - want).abs() <= 3.0 * se,
            "candidate {i}: {} vs {want} (se {se})",
            mc.shares[i]
        );
    }
}

fn cross(x: f64) -> Vec<Vec<f64>> {
    vec![
        vec![0.5, 0.5],
        vec![x, 0.5],
        vec![0.5, 1.0 - x],
        vec![1.0 - x, 0.5],
        vec![0.5, x],
    ]
}

#[test]
fn cross_centre_share() {
    let x: f64 = 0.1;
    within(&square(), &cross(x), &[(0, x * x - x + 0.25)], 1);
    // The same holds with L1 voters.
    let l1 = Scene::new(Region::rectangle(1.0, 1.0).unwrap(), Metric::L1).unwrap();
    within(&l1, &cross(x), &[(0, x * x - x + 0.25)], 2);
}

#[test]
fn bottom_against_sides() {
    let x: f64 = 0.1;
    let b = (1.0 - 2.0 * x * x).powi(2) / (4.0 - 8.0 * x);
    within(&square(), &[vec![0.5, x], vec![0.0, 0.5], vec![1.0, 0.5]], &[(0, b)], 3);
}

#[test]
fn left_edge_triple() {
    // The middle of three left-edge candidates gets 1/2 − x.
    let cands = [vec![0.0, 0.25], vec![0.0, 0.5], vec![0.0, 0.75]];
    within(&square(), &cands, &[(1, 0.25), (0, 0.375), (2, 0.375)], 4);
}

#[test]
fn square_corner_squeeze() {
    let x: f64 = 0.18;
    let t = 0.25 + 3.0 * x / 8.0 - x.powi(3) / 8.0;
    let l = 3.0 / 8.0 - x / 4.0 - x * x / 8.0;
    let cands = [vec![0.0, 1.0 - x], vec![0.0, 0.0], vec![1.0, 1.0]];
    within(&square(), &cands, &[(0, t), (1, l), (2, 1.0 - t - l)], 5);
}

#[test]
fn rectangle_l1_corner_squeeze() {
    let (w, c, e): (f64, f64, f64) = (2.0, 0.1, 0.05);
    let scene = Scene::new(Region::rectangle(w, 1.0).unwrap(), Metric::L1).unwrap();
    let m = -c * c / 2.0 + e / 4.0 - c * e - e * e / 4.0 + w / 4.0 + e * w / 4.0;
    let l = 0.125 - c * c / 2.0 - e * e / 8.0 + w / 4.0 - e * w / 4.0;
    let r = -0.125 + c * c - e / 4.0 + c * e + 3.0 * e * e / 8.0 + w / 2.0;
    assert!((m + l + r - w).abs() < 1e-12);
    let cands = [vec![0.0, 1.0 - c - e], vec![0.0, c], vec![w - c, 1.0]];
    within(&scene, &cands, &[(0, m / w), (1, l / w), (2, r / w)], 6);
    // With the squeezed candidate gone: w/2 − c²/2 against w/2 + c²/2.
    within(
        &scene,
        &cands[1..],
        &[(0, (w / 2.0 - c * c / 2.0) / w), (1, (w / 2.0 + c * c / 2.0) / w)],
        7,
    );
}

#[test]
fn rectangle_l2_corner_squeeze() {
    let (w, c): (f64, f64) = (2.0, 0.1);
    let e = 1.0 / (8.0 * w * w + 5.0);
    let scene = Scene::new(Region::rectangle(w, 1.0).unwrap(), Metric::L2).unwrap();
    let m = (1.0 + e) * (2.0 * w * w - 4.0 * c * e - e * e + e) / (8.0 * w);
    let l = (1.0 - e) * (2.0 * w * w - 2.0 * c * (e + 1.0) + e + 1.0) / (8.0 * w);
    let r = (4.0 * w * w + (2.0 * c - 1.0 + e) * (1.0 + e).powi(2)) / (8.0 * w);
    assert!((m + l + r - w).abs() < 1e-12);
    let cands = [vec![0.0, 1.0 - c - e], vec![0.0, c], vec![w, 1.0 - c]];
    within(&scene, &cands, &[(0, m / w), (1, l / w), (2, r / w)], 8);
}

#[test]
fn mirror_pair_splits_evenly() {
    let mc = mc_vote_shares(&square(), &[vec![0.2, 0.3], vec![0.8, 0.7]], SAMPLES, 9).unwrap();
    assert!((mc.shares[0] - 0.5).abs() <= 3.0 * mc.std_errors[0]);
    assert!(mc.is_conserved());
}

#[test]
fn cross_centre_is_eliminated_first() {
    let out = mc_irv_outcome(&square(), &cross(0.1), SAMPLES, 10, 3.0).unwrap();
    let McIrvOutcome::Inconclusive { round, rounds, .. } = out else {
        panic!("the four arms tie after the centre goes");
    };
    assert_eq!(round, 2);
    assert_eq!(rounds[0].eliminated, Some(0));
}

#[test]
fn symmetric_pair_is_inconclusive() {
    let out =
        mc_irv_outcome(&square(), &[vec![0.25, 0.5], vec![0.75, 0.5]], 100_000, 11, 3.0).unwrap();
    assert!(matches!(out, McIrvOutcome::Inconclusive { round: 1, .. }));
}

#[test]
fn l1_wedge_centre_is_eliminated() {
    let scene = Scene::new(Region::rectangle(2.0, 1.0).unwrap(), Metric::L1).unwrap();
    let (x, e) = (1.0, 1.0 / 12.0);
    let cands = [vec![x, 0.5], vec![x - e, 0.5 + 2.0 * e], vec![x - e, 0.5 - 2.0 * e]];
    let out = mc_irv_outcome(&scene, &cands, SAMPLES, 12, 3.0).unwrap();
    let rounds = match &out {
        McIrvOutcome::Winner { rounds, .. } | McIrvOutcome::Inconclusive { rounds, .. } => rounds,
    };
    assert_eq!(rounds[0].eliminated, Some(0));
}

/// Scans the cross's arm offset and brackets where the centre starts to
/// finish last, which happens at 1/2 − 1/√5.
#[test]
fn cross_threshold_is_bracketed() {
    let boundary = 0.5 - 1.0 / 5f64.sqrt();
    let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.0025).collect();
    let last: Vec<bool> = grid
        .iter()
        .map(|&x| {
            let mc = mc_vote_shares(&square(), &cross(x), 200_000, 13).unwrap();
            mc.shares[1..].iter().all(|&s| mc.shares[0] < s)
        })
        .collect();
    let hi = grid[last.iter().position(|&b| b).unwrap()];
    let lo = grid[last.iter().rposition(|&b| !b).unwrap()];
    assert!(lo < hi, "decisions are monotone in x");
    assert!((lo - boundary).abs() <= 0.01 && (hi - boundary).abs() <= 0.01, "[{lo}, {hi}]");
}

#[test]
fn seeds_reproduce() {
    let a = mc_vote_shares(&square(), &cross(0.2), 50_000, 99).unwrap();
    let b = mc_vote_shares(&square(), &cross(0.2), 50_000, 99).unwrap();
    assert_eq!(a, b);
    let c = mc_vote_shares(&square(), &cross(0.2), 50_000, 98).unwrap();
    assert_ne!(a.shares, c.shares);
}

#[test]
fn bad_inputs() {
    assert!(mc_vote_shares(&square(), &[vec![1.5, 0.5]], 10, 1).is_err());
    assert!(mc_vote_shares(&square(), &[vec![0.5, 0.5]], 0, 1).is_err());
    assert!(mc_irv_outcome(&square(), &[vec![0.5, 0.5]], 10, 1, f64::NAN).is_err());
}
