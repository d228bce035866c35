//! Voters grouped by how they rank the candidates, and IRV on those groups
//! with statistical elimination decisions.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cloud::VoterCloud;
use crate::region::{Metric, TIE_TOLERANCE};

/// Largest supported candidate count.
pub const MAX_CANDIDATES: usize = 16;

/// Voters per parallel work unit when grouping ballots.
const CHUNK: usize = 1 << 17;

/// Candidates whose distances agree up to [`TIE_TOLERANCE`] share a level;
/// level 0 is nearest.
#[derive(Debug, Clone, Copy)]
struct Ballot {
    levels: [u8; MAX_CANDIDATES],
    count: u64,
}

/// The weak rankings of a voter cloud over a fixed candidate list.
#[derive(Debug, Clone)]
pub struct BallotTally {
    k: usize,
    voters: u64,
    /// Weight units per vote: `lcm(1..=k)`, so split votes stay integral.
    unit: u64,
    ballots: Vec<Ballot>,
}

fn lcm_upto(k: usize) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    (1..=k as u64).fold(1, |l, i| l / gcd(l, i) * i)
}

fn levels_of(metric: Metric, voter: &[f64], candidates: &[Vec<f64>], out: &mut [u8]) {
    let k = candidates.len();
    let mut d = [0.0f64; MAX_CANDIDATES];
    let mut order = [0usize; MAX_CANDIDATES];
    for i in 0..k {
        d[i] = metric.rank_distance(voter, &candidates[i]);
        order[i] = i;
        let mut j = i;
        while j > 0 && d[order[j - 1]] > d[i] {
            order[j] = order[j - 1];
            j -= 1;
        }
        order[j] = i;
    }
    let mut level = 0u8;
    out[order[0]] = 0;
    for w in 1..k {
        let (prev, cur) = (d[order[w - 1]], d[order[w]]);
        if cur - prev > TIE_TOLERANCE * cur.max(1.0) {
            level += 1;
        }
        out[order[w]] = level;
    }
}

/// Groups voters by ballot. Small candidate lists use a dense table indexed
/// by the levels in base `k`; larger ones a hash map keyed by packed levels.
fn group(metric: Metric, coords: &[f64], dim: usize, candidates: &[Vec<f64>]) -> Vec<Ballot> {
    let k = candidates.len();
    let mut levels = [0u8; MAX_CANDIDATES];
    let mut out = Vec::new();
    if k <= 6 {
        let size = k.pow(k as u32);
        let mut counts = vec![0u64; size];
        for v in coords.chunks_exact(dim) {
            levels_of(metric, v, candidates, &mut levels);
            let idx = levels[..k].iter().rev().fold(0, |a, &l| a * k + l as usize);
            counts[idx] += 1;
        }
        for (mut idx, &count) in counts.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let mut b = Ballot {
                levels: [0; MAX_CANDIDATES],
                count,
            };
            for l in b.levels.iter_mut().take(k) {
                *l = (idx % k) as u8;
                idx /= k;
            }
            out.push(b);
        }
    } else {
        let mut counts: HashMap<u64, u64> = HashMap::new();
        for v in coords.chunks_exact(dim) {
            levels_of(metric, v, candidates, &mut levels);
            let key = levels[..k].iter().rev().fold(0u64, |a, &l| a << 4 | l as u64);
            *counts.entry(key).or_insert(0) += 1;
        }
        for (mut key, count) in counts {
            let mut b = Ballot {
                levels: [0; MAX_CANDIDATES],
                count,
            };
            for l in b.levels.iter_mut().take(k) {
                *l = (key & 15) as u8;
                key >>= 4;
            }
            out.push(b);
        }
    }
    out
}

fn merge(mut all: Vec<Ballot>, k: usize) -> Vec<Ballot> {
    all.sort_unstable_by(|a, b| a.levels[..k].cmp(&b.levels[..k]));
    let mut out: Vec<Ballot> = Vec::with_capacity(all.len());
    for b in all {
        match out.last_mut() {
            Some(last) if last.levels[..k] == b.levels[..k] => last.count += b.count,
            _ => out.push(b),
        }
    }
    out
}

/// Set of candidate indices as a bitmask.
pub type Alive = u32;

pub(crate) fn members(alive: Alive) -> impl Iterator<Item = usize> {
    (0..MAX_CANDIDATES).filter(move |&i| alive >> i & 1 == 1)
}

impl BallotTally {
    /// Ranks every voter of `cloud`. Callers validate the candidates.
    pub fn new(metric: Metric, cloud: &VoterCloud, candidates: &[Vec<f64>]) -> Self {
        let k = candidates.len();
        assert!((1..=MAX_CANDIDATES).contains(&k), "candidate count out of range");
        let dim = cloud.dim();
        let mut parts: Vec<Vec<Ballot>> = cloud
            .par_chunks(CHUNK)
            .map(|chunk| group(metric, chunk, dim, candidates))
            .collect();
        parts.push(group(metric, cloud.remainder(CHUNK), dim, candidates));
        let ballots = if parts.iter().filter(|p| !p.is_empty()).count() == 1 {
            parts.into_iter().find(|p| !p.is_empty()).unwrap_or_default()
        } else {
            merge(parts.concat(), k)
        };
        BallotTally {
            k,
            voters: cloud.len() as u64,
            unit: lcm_upto(k),
            ballots,
        }
    }

    pub fn candidates(&self) -> usize {
        self.k
    }

    pub fn voters(&self) -> u64 {
        self.voters
    }

    pub fn all(&self) -> Alive {
        (1u32 << self.k) - 1
    }

    /// First-choice votes among `alive`, in units of `1/unit()` vote; split
    /// votes go evenly to every tied candidate. Entries outside `alive` are 0.
    pub fn weights(&self, alive: Alive) -> Vec<u64> {
        let mut w = vec![0u64; self.k];
        let mut tied = [0usize; MAX_CANDIDATES];
        for b in &self.ballots {
            let (best, count) = self.front(b, alive, &mut tied);
            let _ = best;
            let each = self.unit / count as u64 * b.count;
            for &c in &tied[..count] {
                w[c] += each;
            }
        }
        w
    }

    /// Weight units per vote.
    pub fn unit(&self) -> u64 {
        self.unit
    }

    fn front(&self, b: &Ballot, alive: Alive, tied: &mut [usize; MAX_CANDIDATES]) -> (u8, usize) {
        let mut best = u8::MAX;
        let mut count = 0;
        for c in members(alive) {
            let l = b.levels[c];
            if l < best {
                best = l;
                count = 0;
            }
            if l == best {
                tied[count] = c;
                count += 1;
            }
        }
        (best, count)
    }

    /// Vote shares (fractions of all voters) among `alive`.
    pub fn shares(&self, alive: Alive) -> Vec<f64> {
        let total = (self.voters * self.unit) as f64;
        self.weights(alive).iter().map(|&w| w as f64 / total).collect()
    }

    /// Standard error of the share difference `share(a) − share(b)`, from the
    /// per-voter variance of that difference.
    pub fn difference_se(&self, alive: Alive, a: usize, b: usize) -> f64 {
        let n = self.voters as f64;
        let mut tied = [0usize; MAX_CANDIDATES];
        let (mut sum, mut sq) = (0.0, 0.0);
        for ballot in &self.ballots {
            let (_, count) = self.front(ballot, alive, &mut tied);
            let part = 1.0 / count as f64;
            let ia = tied[..count].contains(&a);
            let ib = tied[..count].contains(&b);
            let diff = match (ia, ib) {
                (true, false) => part,
                (false, true) => -part,
                _ => 0.0,
            };
            sum += diff * ballot.count as f64;
            sq += diff * diff * ballot.count as f64;
        }
        let mean = sum / n;
        ((sq / n - mean * mean).max(0.0) / n).sqrt()
    }

    /// How many standard errors `b`'s share sits above `a`'s. Infinite when
    /// the difference is positive with no sampling variance; zero for an
    /// exact tie.
    pub fn separation(&self, alive: Alive, shares: &[f64], a: usize, b: usize) -> f64 {
        let diff = shares[b] - shares[a];
        let se = self.difference_se(alive, a, b);
        if se > 0.0 {
            diff / se
        } else if diff > 0.0 {
            f64::INFINITY
        } else if diff < 0.0 {
            f64::NEG_INFINITY
        } else {
            0.0
        }
    }

    /// Candidates that may be eliminated from `alive`: the lowest share plus
    /// every candidate not significantly above it at `margin` sigmas.
    pub fn eliminable(&self, alive: Alive, margin: f64) -> Alive {
        let shares = self.shares(alive);
        let low = members(alive)
            .min_by(|&a, &b| shares[a].total_cmp(&shares[b]))
            .expect("nonempty");
        members(alive)
            .filter(|&c| c == low || self.separation(alive, &shares, low, c) < margin)
            .fold(0, |m, c| m | 1 << c)
    }

    /// Every candidate that wins some IRV run from `alive` in which each
    /// elimination is of an eliminable candidate.
    pub fn possible_winners(&self, alive: Alive, margin: f64) -> Alive {
        let mut memo = HashMap::new();
        self.winners_from(alive, margin, &mut memo)
    }

    fn winners_from(&self, alive: Alive, margin: f64, memo: &mut HashMap<Alive, Alive>) -> Alive {
        if alive.count_ones() == 1 {
            return alive;
        }
        if let Some(&w) = memo.get(&alive) {
            return w;
        }
        let mut out = 0;
        for c in members(self.eliminable(alive, margin)) {
            out |= self.winners_from(alive & !(1 << c), margin, memo);
        }
        memo.insert(alive, out);
        out
    }

    /// IRV in which each elimination must be statistically clear: the lowest
    /// share must sit at least `margin` standard errors below every other.
    pub fn irv(&self, margin: f64) -> McIrvOutcome {
        let mut alive = self.all();
        let mut rounds = Vec::new();
        while alive.count_ones() > 1 {
            let shares = self.shares(alive);
            let remaining: Vec<usize> = members(alive).collect();
            let low = *remaining
                .iter()
                .min_by(|&&a, &&b| shares[a].total_cmp(&shares[b]))
                .expect("nonempty");
            let separation = remaining
                .iter()
                .filter(|&&c| c != low)
                .map(|&c| self.separation(alive, &shares, low, c))
                .fold(f64::INFINITY, f64::min);
            let round = McRound {
                shares: remaining.iter().map(|&c| (c, shares[c])).collect(),
                eliminated: (separation >= margin).then_some(low),
                separation_sigmas: separation.is_finite().then_some(separation),
            };
            rounds.push(round);
            if separation < margin {
                let ambiguous = members(self.eliminable(alive, margin)).collect();
                return McIrvOutcome::Inconclusive {
                    round: rounds.len(),
                    ambiguous,
                    rounds,
                };
            }
            alive &= !(1 << low);
        }
        McIrvOutcome::Winner {
            winner: members(alive).next().expect("one left"),
            rounds,
        }
    }
}

/// One round of a Monte-Carlo IRV run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McRound {
    /// `(candidate index, share)` for every remaining candidate.
    pub shares: Vec<(usize, f64)>,
    /// The candidate eliminated, or `None` if the round was ambiguous.
    pub eliminated: Option<usize>,
    /// Gap between the lowest share and the next lowest, in standard errors
    /// (`None` when the gap has no sampling variance).
    pub separation_sigmas: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum McIrvOutcome {
    Winner {
        winner: usize,
        rounds: Vec<McRound>,
    },
    /// Round `round` (1-based) had no statistically clear last place;
    /// `ambiguous` lists the candidates that might be last.
    Inconclusive {
        round: usize,
        ambiguous: Vec<usize>,
        rounds: Vec<McRound>,
    },
}

impl McIrvOutcome {
    pub fn winner(&self) -> Option<usize> {
        match self {
            McIrvOutcome::Winner { winner, .. } => Some(*winner),
            McIrvOutcome::Inconclusive { .. } => None,
        }
    }
}
