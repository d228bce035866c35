//! Randomized approximation of the minimal exclusion zone.
//!
//! The zone is grown from full-slate IRV winners by repeatedly sampling a
//! configuration (a node `u` of the current set plus a uniformly random
//! subset of the other nodes), running IRV with random tiebreaks, and adding
//! any winner that escapes the set. The loop stops after a run of
//! `⌈ln(2/δ) / (2ε²)⌉` samples without an escape. Every node added is a
//! possible winner of a configuration meeting the current set, so the result
//! never exceeds the true minimal zone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Node;
use crate::irv::{random_tiebreak_winner, IrvError};
use crate::nodeset::NodeSet;
use crate::shares::Electorate;
use crate::zone::build_loss_graph;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApproxError {
    #[error("{name} must lie strictly between 0 and 1 (got {value})")]
    OutOfRange { name: &'static str, value: f64 },
    #[error(transparent)]
    Irv(#[from] IrvError),
}

/// Number of consecutive non-escaping samples required: `⌈ln(2/δ)/(2ε²)⌉`.
pub fn quiet_streak_target(epsilon: f64, delta: f64) -> Result<u64, ApproxError> {
    for (name, value) in [("epsilon", epsilon), ("delta", delta)] {
        if !(value > 0.0 && value < 1.0) {
            return Err(ApproxError::OutOfRange { name, value });
        }
    }
    Ok(((2.0 / delta).ln() / (2.0 * epsilon * epsilon)).ceil() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApproxOptions {
    /// Add the loss-graph closure of every new winner (on by default; turning
    /// it off is only useful for measuring its effect).
    pub loss_closure: bool,
}

impl Default for ApproxOptions {
    fn default() -> Self {
        ApproxOptions { loss_closure: true }
    }
}

/// One growth step of the working set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZoneUpdate {
    /// Sampling iteration (0-based) of the escape, or `None` for the
    /// full-slate seeding runs.
    pub iteration: Option<u64>,
    pub winner: Node,
    pub zone_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxZoneReport {
    pub zone: NodeSet,
    pub epsilon: f64,
    pub delta: f64,
    pub iterations_run: u64,
    pub quiet_streak_target: u64,
    pub certified_trivial: bool,
    pub rng_seed: u64,
    pub updates: Vec<ZoneUpdate>,
}

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws `{u} ∪ X` with `u` uniform in `s` and `X` a uniform subset of the
/// remaining nodes.
fn sample_configuration<R: Rng>(n: usize, s: &[Node], rng: &mut R) -> (Node, NodeSet) {
    let u = s[rng.gen_range(0..s.len())];
    let mut config = NodeSet::singleton(u);
    for v in (0..n).filter(|&v| v != u) {
        if rng.gen::<bool>() {
            config.insert(v);
        }
    }
    (u, config)
}

pub fn approx_minimal_zone(
    e: &Electorate,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<ApproxZoneReport, ApproxError> {
    approx_minimal_zone_with(e, epsilon, delta, seed, ApproxOptions::default())
}

/// Random stream `i` (for `i < n`) drives the `i`-th full-slate run; stream
/// `n + j` drives sampling iteration `j`.
pub fn approx_minimal_zone_with(
    e: &Electorate,
    epsilon: f64,
    delta: f64,
    seed: u64,
    opts: ApproxOptions,
) -> Result<ApproxZoneReport, ApproxError> {
    let target = quiet_streak_target(epsilon, delta)?;
    let n = e.n();
    let all = e.all_nodes();
    let loss = build_loss_graph(e);
    let mut zone = NodeSet::new();
    let mut updates = Vec::new();

    let mut absorb = |zone: &mut NodeSet, w: Node, iteration: Option<u64>| {
        zone.insert(w);
        if opts.loss_closure {
            zone.union_with(&loss.closure(&NodeSet::singleton(w)));
        }
        updates.push(ZoneUpdate {
            iteration,
            winner: w,
            zone_size: zone.len(),
        });
    };

    for i in 0..n as u64 {
        let w = random_tiebreak_winner(e, &all, &mut stream(seed, i))?;
        if !zone.contains(w) {
            absorb(&mut zone, w, None);
        }
    }

    let mut quiet = 0;
    let mut iterations = 0u64;
    let mut members = zone.to_vec();
    while quiet < target {
        let mut rng = stream(seed, n as u64 + iterations);
        let (_, config) = sample_configuration(n, &members, &mut rng);
        let w = random_tiebreak_winner(e, &config, &mut rng)?;
        if zone.contains(w) {
            quiet += 1;
        } else {
            absorb(&mut zone, w, Some(iterations));
            members = zone.to_vec();
            quiet = 0;
        }
        iterations += 1;
    }

    Ok(ApproxZoneReport {
        certified_trivial: zone.len() == n,
        zone,
        epsilon,
        delta,
        iterations_run: iterations,
        quiet_streak_target: target,
        rng_seed: seed,
        updates,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ApproxCheck {
    Pass {
        samples: u64,
    },
    Fail {
        sample_index: u64,
        configuration: NodeSet,
        winner: Node,
    },
}

/// Samples `⌈ln(2/δ)/(2ε²)⌉` configurations with the same sampler as
/// [`approx_minimal_zone`] restricted to `s`; passes iff no winner escapes
/// `s`. Sample `i` uses random stream `i`.
pub fn check_approx_zone(
    e: &Electorate,
    s: &NodeSet,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<ApproxCheck, ApproxError> {
    let target = quiet_streak_target(epsilon, delta)?;
    e.check_candidates(s).map_err(IrvError::from)?;
    if s.len() == e.n() {
        return Ok(ApproxCheck::Pass { samples: 0 });
    }
    let members = s.to_vec();
    for i in 0..target {
        let mut rng = stream(seed, i);
        let (_, config) = sample_configuration(e.n(), &members, &mut rng);
        let w = random_tiebreak_winner(e, &config, &mut rng)?;
        if !s.contains(w) {
            return Ok(ApproxCheck::Fail {
                sample_index: i,
                configuration: config,
                winner: w,
            });
        }
    }
    Ok(ApproxCheck::Pass { samples: target })
}
