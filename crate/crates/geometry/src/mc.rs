//! Monte-Carlo plurality shares and IRV outcomes.

use serde::Serialize;

use crate::ballots::{BallotTally, McIrvOutcome};
use crate::cloud::VoterCloud;
use crate::error::GeoError;
use crate::region::{Point, Scene};

/// Estimated plurality shares as fractions of the region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McShares {
    pub shares: Vec<f64>,
    /// Binomial standard error `sqrt(p (1 − p) / samples)` of each share.
    pub std_errors: Vec<f64>,
    pub samples: u64,
    pub seed: u64,
    /// Integer vote weights; `weights.iter().sum() == samples * unit`.
    pub weights: Vec<u64>,
    pub unit: u64,
}

impl McShares {
    pub(crate) fn from_tally(tally: &BallotTally, seed: u64) -> Self {
        let all = tally.all();
        let shares = tally.shares(all);
        let n = tally.voters() as f64;
        let std_errors = shares.iter().map(|p| (p * (1.0 - p) / n).sqrt()).collect();
        McShares {
            shares,
            std_errors,
            samples: tally.voters(),
            seed,
            weights: tally.weights(all),
            unit: tally.unit(),
        }
    }

    /// Whether the integer weights account for every sample exactly once.
    pub fn is_conserved(&self) -> bool {
        self.weights.iter().sum::<u64>() == self.samples * self.unit
    }
}

pub(crate) fn check_margin(margin_sigmas: f64) -> Result<(), GeoError> {
    if margin_sigmas.is_finite() && margin_sigmas >= 0.0 {
        Ok(())
    } else {
        Err(GeoError::Precondition(format!(
            "margin must be a finite non-negative number of standard errors (got {margin_sigmas})"
        )))
    }
}

/// Samples voters and ranks the candidates for each of them.
pub fn tally(
    scene: &Scene,
    candidates: &[Point],
    samples: usize,
    seed: u64,
) -> Result<BallotTally, GeoError> {
    scene.check_candidates(candidates)?;
    let cloud = VoterCloud::sample(&scene.region, samples, seed)?;
    Ok(BallotTally::new(scene.metric, &cloud, candidates))
}

/// Plurality shares from `samples` uniform voters; voters equidistant from
/// several nearest candidates split their vote evenly.
pub fn mc_vote_shares(
    scene: &Scene,
    candidates: &[Point],
    samples: usize,
    seed: u64,
) -> Result<McShares, GeoError> {
    Ok(McShares::from_tally(&tally(scene, candidates, samples, seed)?, seed))
}

/// IRV on sampled voters. A round eliminates its lowest candidate only when
/// that candidate sits at least `margin_sigmas` standard errors below every
/// other; otherwise the run stops as inconclusive.
pub fn mc_irv_outcome(
    scene: &Scene,
    candidates: &[Point],
    samples: usize,
    seed: u64,
    margin_sigmas: f64,
) -> Result<McIrvOutcome, GeoError> {
    check_margin(margin_sigmas)?;
    Ok(tally(scene, candidates, samples, seed)?.irv(margin_sigmas))
}
