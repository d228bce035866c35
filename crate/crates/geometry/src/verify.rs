//! Statistical checks of geometric facts: the centre of a hyperrectangle
//! beats everyone head to head and a corner loses to everyone, planar
//! elections embed unchanged in higher dimensions, and the flag's left part
//! is never escaped.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ballots::{BallotTally, McIrvOutcome};
use crate::cloud::{box_area_estimate, rng_for, VoterCloud};
use crate::error::GeoError;
use crate::mc::{check_margin, McShares};
use crate::region::{
    in_flag_triangle, in_flag_zone, Metric, Point, Region, Scene, FLAG_AREA, FLAG_TRIANGLE_AREA,
};

/// Random stream reserved for drawing candidate positions, well clear of
/// the streams used by voter batches.
const CANDIDATE_STREAM: u64 = 1 << 62;

/// Offset separating independent samples derived from one seed.
const SEED_SPLIT: u64 = 0x9E37_79B9_7F4A_7C15;

fn uniform_point<R: Rng>(rng: &mut R, region: &Region) -> Point {
    let (lo, hi) = region.bounding_box();
    loop {
        let p: Point = lo.iter().zip(&hi).map(|(l, h)| l + (h - l) * rng.gen::<f64>()).collect();
        if region.contains(&p) {
            return p;
        }
    }
}

/// Head-to-head share of `a` against `b` on a fixed cloud, with how many
/// standard errors `a` sits above `b`.
pub fn pairwise_on(
    scene: &Scene,
    cloud: &VoterCloud,
    a: &Point,
    b: &Point,
) -> Result<(f64, f64), GeoError> {
    let pair = [a.clone(), b.clone()];
    scene.check_candidates(&pair)?;
    let tally = BallotTally::new(scene.metric, cloud, &pair);
    let shares = tally.shares(tally.all());
    Ok((shares[0], tally.separation(tally.all(), &shares, 1, 0)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CondorcetReport {
    pub sides: Vec<f64>,
    pub metric: Metric,
    pub opponents: usize,
    pub samples: u64,
    pub seed: u64,
    pub margin_sigmas: f64,
    /// Lowest centre share seen and its gap to the opponent in standard
    /// errors.
    pub center_min_share: f64,
    pub center_min_sigmas: f64,
    /// Highest share of the origin corner seen and its gap in standard
    /// errors.
    pub corner_max_share: f64,
    pub corner_max_sigmas: f64,
    /// Opponents that beat the centre by more than the margin.
    pub center_failures: usize,
    /// Opponents that the corner beats by more than the margin.
    pub corner_failures: usize,
    pub passed: bool,
}

/// Pits the centre and the origin corner against `opponents` uniformly
/// random positions. The centre must never be significantly below half the
/// vote and the corner never significantly above.
pub fn verify_condorcet_hyperrect(
    sides: &[f64],
    metric: Metric,
    opponents: usize,
    samples: usize,
    seed: u64,
    margin_sigmas: f64,
) -> Result<CondorcetReport, GeoError> {
    check_margin(margin_sigmas)?;
    let region = Region::hyperrectangle(sides.to_vec())?;
    let scene = Scene::new(region.clone(), metric)?;
    let cloud = VoterCloud::sample(&region, samples, seed)?;
    let center = region.center().expect("box");
    let corner = vec![0.0; sides.len()];
    let mut rng = rng_for(seed, CANDIDATE_STREAM);
    let rivals: Vec<Point> = (0..opponents).map(|_| uniform_point(&mut rng, &region)).collect();
    let results: Vec<((f64, f64), (f64, f64))> = rivals
        .par_iter()
        .map(|o| Ok((pairwise_on(&scene, &cloud, &center, o)?, pairwise_on(&scene, &cloud, &corner, o)?)))
        .collect::<Result<_, GeoError>>()?;
    let mut r = CondorcetReport {
        sides: sides.to_vec(),
        metric,
        opponents,
        samples: samples as u64,
        seed,
        margin_sigmas,
        center_min_share: f64::INFINITY,
        center_min_sigmas: f64::INFINITY,
        corner_max_share: f64::NEG_INFINITY,
        corner_max_sigmas: f64::NEG_INFINITY,
        center_failures: 0,
        corner_failures: 0,
        passed: false,
    };
    for ((cs, cz), (ks, kz)) in results {
        r.center_min_share = r.center_min_share.min(cs);
        r.center_min_sigmas = r.center_min_sigmas.min(cz);
        r.corner_max_share = r.corner_max_share.max(ks);
        r.corner_max_sigmas = r.corner_max_sigmas.max(kz);
        r.center_failures += usize::from(cz < -margin_sigmas);
        r.corner_failures += usize::from(kz > margin_sigmas);
    }
    r.passed = r.center_failures == 0 && r.corner_failures == 0;
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionReport {
    pub full: McShares,
    pub projected: McShares,
    /// Per candidate `|full − projected| / sqrt(se_full² + se_projected²)`.
    pub sigmas: Vec<f64>,
    pub margin_sigmas: f64,
    pub passed: bool,
}

/// Compares an election in a hyperrectangle whose candidates lie on the
/// mid-plane spanned by two axes with the same election in that plane's
/// rectangle. Every other coordinate must be the midpoint of its side.
pub fn verify_projection(
    sides: &[f64],
    metric: Metric,
    axes: (usize, usize),
    candidates: &[Point],
    samples: usize,
    seed: u64,
    margin_sigmas: f64,
) -> Result<ProjectionReport, GeoError> {
    check_margin(margin_sigmas)?;
    let region = Region::hyperrectangle(sides.to_vec())?;
    let d = sides.len();
    let (a, b) = axes;
    if a == b || a >= d || b >= d {
        return Err(GeoError::Precondition(format!(
            "plane axes must be two distinct indices below {d}"
        )));
    }
    let scene = Scene::new(region, metric)?;
    scene.check_candidates(candidates)?;
    for (i, c) in candidates.iter().enumerate() {
        for k in (0..d).filter(|&k| k != a && k != b) {
            if (c[k] - sides[k] / 2.0).abs() > 1e-12 {
                return Err(GeoError::Precondition(format!(
                    "candidate {i} is off the mid-plane: coordinate {k} is {} instead of {}",
                    c[k],
                    sides[k] / 2.0
                )));
            }
        }
    }
    let planar: Vec<Point> = candidates.iter().map(|c| vec![c[a], c[b]]).collect();
    let plane = Scene::new(Region::rectangle(sides[a], sides[b])?, metric)?;
    let full = crate::mc::mc_vote_shares(&scene, candidates, samples, seed)?;
    let plane_seed = seed.wrapping_add(SEED_SPLIT);
    let projected = crate::mc::mc_vote_shares(&plane, &planar, samples, plane_seed)?;
    let sigmas: Vec<f64> = (0..candidates.len())
        .map(|i| {
            let se = full.std_errors[i].hypot(projected.std_errors[i]);
            let diff = (full.shares[i] - projected.shares[i]).abs();
            if se > 0.0 {
                diff / se
            } else if diff > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .collect();
    let passed = sigmas.iter().all(|&z| z <= margin_sigmas);
    Ok(ProjectionReport {
        full,
        projected,
        sigmas,
        margin_sigmas,
        passed,
    })
}

/// One flag election.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlagElection {
    pub candidates: Vec<Point>,
    /// Whether some candidate lies in the zone `x − y ≤ 6`. Without one
    /// there is nothing to check.
    pub applicable: bool,
    pub outcome: McIrvOutcome,
    /// A conclusive winner outside the zone in an applicable election.
    pub escaped: bool,
}

/// Runs IRV for one flag configuration on a shared voter cloud.
pub fn flag_election(
    cloud: &VoterCloud,
    candidates: &[Point],
    margin_sigmas: f64,
) -> Result<FlagElection, GeoError> {
    check_margin(margin_sigmas)?;
    let scene = Scene {
        region: Region::Flag,
        metric: Metric::L1,
    };
    scene.check_candidates(candidates)?;
    let outcome = BallotTally::new(Metric::L1, cloud, candidates).irv(margin_sigmas);
    let applicable = candidates.iter().any(|c| in_flag_zone(c));
    let escaped = applicable && outcome.winner().is_some_and(|w| !in_flag_zone(&candidates[w]));
    Ok(FlagElection {
        candidates: candidates.to_vec(),
        applicable,
        outcome,
        escaped,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AreaCheck {
    pub expected: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub sigmas: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlagReport {
    pub configs: usize,
    pub samples: u64,
    pub seed: u64,
    pub margin_sigmas: f64,
    pub conclusive: usize,
    pub inconclusive: usize,
    /// Conclusive winners outside the zone.
    pub escapes: usize,
    /// The first few escaping elections, if any.
    pub escape_examples: Vec<FlagElection>,
    pub triangle_area: AreaCheck,
    pub flag_area: AreaCheck,
    pub passed: bool,
}

const ESCAPE_EXAMPLES: usize = 5;

fn area_check(expected: f64, (estimate, std_error): (f64, f64), margin: f64) -> AreaCheck {
    let sigmas = (estimate - expected).abs() / std_error;
    AreaCheck {
        expected,
        estimate,
        std_error,
        sigmas,
        passed: sigmas <= margin,
    }
}

/// Runs `configs` random elections on the flag, each with 2 to 6 uniformly
/// placed candidates at least one of which lies in the zone, and counts
/// conclusive winners outside the zone. Also estimates the areas of the
/// flag and its large triangle from `samples` points of the bounding box.
pub fn verify_flag_zone(
    configs: usize,
    samples: usize,
    seed: u64,
    margin_sigmas: f64,
) -> Result<FlagReport, GeoError> {
    check_margin(margin_sigmas)?;
    if configs == 0 {
        return Err(GeoError::Precondition("at least one configuration is required".into()));
    }
    let cloud = VoterCloud::sample(&Region::Flag, samples, seed)?;
    let elections: Vec<FlagElection> = (0..configs)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, CANDIDATE_STREAM + i as u64);
            let k = rng.gen_range(2..=6);
            let candidates = loop {
                let c: Vec<Point> = (0..k).map(|_| uniform_point(&mut rng, &Region::Flag)).collect();
                if c.iter().any(|p| in_flag_zone(p)) {
                    break c;
                }
            };
            flag_election(&cloud, &candidates, margin_sigmas)
        })
        .collect::<Result<_, _>>()?;
    let conclusive = elections.iter().filter(|e| e.outcome.winner().is_some()).count();
    let escapes = elections.iter().filter(|e| e.escaped).count();
    let escape_examples = elections.into_iter().filter(|e| e.escaped).take(ESCAPE_EXAMPLES).collect();
    let area_seed = seed.wrapping_add(SEED_SPLIT);
    let triangle = box_area_estimate(&Region::Flag, samples, area_seed, in_flag_triangle)?;
    let flag = box_area_estimate(&Region::Flag, samples, area_seed, |p| Region::Flag.contains(p))?;
    let triangle_area = area_check(FLAG_TRIANGLE_AREA, triangle, margin_sigmas);
    let flag_area = area_check(FLAG_AREA, flag, margin_sigmas);
    let passed = escapes == 0 && triangle_area.passed && flag_area.passed;
    Ok(FlagReport {
        configs,
        samples: samples as u64,
        seed,
        margin_sigmas,
        conclusive,
        inconclusive: configs - conclusive,
        escapes,
        escape_examples,
        triangle_area,
        flag_area,
        passed,
    })
}
