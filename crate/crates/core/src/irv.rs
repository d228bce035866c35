//! Instant-runoff elections with explicit tiebreak handling.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Node;
use crate::nodeset::NodeSet;
use crate::shares::{Electorate, TallyError, VoteShares};

/// State budget used by [`TiebreakPolicy::Branch`] elections.
pub const DEFAULT_BRANCH_BUDGET: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IrvError {
    #[error(transparent)]
    Tally(#[from] TallyError),
    #[error("tiebreak order must be a permutation of all {n} nodes")]
    BadOrder { n: usize },
    #[error("node {0} cannot win this election under any tiebreak")]
    TargetCannotWin(Node),
    #[error("branch search incomplete: more than {budget} candidate subsets explored")]
    Incomplete { budget: usize },
}

/// How IRV chooses among candidates tied for the smallest share.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TiebreakPolicy {
    /// Eliminate the tied candidate appearing earliest in this permutation of
    /// all nodes.
    FixedOrder(Vec<Node>),
    /// Eliminate a uniformly random tied candidate, drawn from a ChaCha8
    /// stream seeded with this value.
    Seeded(u64),
    /// Search over all elimination choices. With a target, return a run the
    /// target wins (or fail if none exists); without one, return the run that
    /// always eliminates the lowest-indexed tied candidate. Either way the
    /// outcome lists every possible winner.
    Branch(Option<Node>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Round {
    pub remaining: NodeSet,
    pub shares: VoteShares,
    pub eliminated: Node,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TieBreak {
    pub tied: NodeSet,
    pub eliminated: Node,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElectionOutcome {
    pub rounds: Vec<Round>,
    pub winner: Node,
    pub tiebreak_trace: Vec<TieBreak>,
    /// Every candidate that wins under some tiebreak sequence; only filled in
    /// by [`TiebreakPolicy::Branch`].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub possible_winners: Option<NodeSet>,
}

/// Plurality shares; see [`Electorate::shares`].
pub fn plurality_shares(e: &Electorate, candidates: &NodeSet) -> Result<VoteShares, IrvError> {
    Ok(e.shares(candidates)?)
}

/// Shares of `u` and `v` in their head-to-head contest.
pub fn pairwise_contest(
    e: &Electorate,
    u: Node,
    v: Node,
) -> Result<(num_rational::BigRational, num_rational::BigRational), IrvError> {
    Ok(e.pairwise(u, v)?)
}

/// Runs IRV, asking `choose` to pick the elimination whenever several
/// candidates tie for last.
pub fn run_irv_with<F>(
    e: &Electorate,
    candidates: &NodeSet,
    mut choose: F,
) -> Result<ElectionOutcome, IrvError>
where
    F: FnMut(&NodeSet) -> Node,
{
    e.check_candidates(candidates)?;
    let mut remaining = candidates.clone();
    let mut rounds = Vec::with_capacity(remaining.len().saturating_sub(1));
    let mut trace = Vec::new();
    while remaining.len() > 1 {
        let shares = e.shares(&remaining)?;
        let tied = shares.weakly_minimal();
        let eliminated = if tied.len() == 1 {
            tied.first().expect("nonempty")
        } else {
            let pick = choose(&tied);
            debug_assert!(tied.contains(pick));
            trace.push(TieBreak {
                tied,
                eliminated: pick,
            });
            pick
        };
        rounds.push(Round {
            remaining: remaining.clone(),
            shares,
            eliminated,
        });
        remaining.remove(eliminated);
    }
    Ok(ElectionOutcome {
        rounds,
        winner: remaining.first().expect("one candidate remains"),
        tiebreak_trace: trace,
        possible_winners: None,
    })
}

/// Uniform choice among tied candidates using `rng`.
pub(crate) fn random_choice<'a, R: Rng>(rng: &'a mut R) -> impl FnMut(&NodeSet) -> Node + 'a {
    move |tied: &NodeSet| {
        let i = rng.gen_range(0..tied.len());
        tied.iter().nth(i).expect("index in range")
    }
}

pub fn run_irv(
    e: &Electorate,
    candidates: &NodeSet,
    policy: &TiebreakPolicy,
) -> Result<ElectionOutcome, IrvError> {
    match policy {
        TiebreakPolicy::FixedOrder(order) => {
            let n = e.n();
            let mut rank = vec![usize::MAX; n];
            for (i, &v) in order.iter().enumerate() {
                if v >= n || rank[v] != usize::MAX {
                    return Err(IrvError::BadOrder { n });
                }
                rank[v] = i;
            }
            if order.len() != n {
                return Err(IrvError::BadOrder { n });
            }
            run_irv_with(e, candidates, |tied| {
                tied.iter().min_by_key(|&v| rank[v]).expect("nonempty")
            })
        }
        TiebreakPolicy::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            run_irv_with(e, candidates, random_choice(&mut rng))
        }
        TiebreakPolicy::Branch(target) => {
            e.check_candidates(candidates)?;
            let mut search = BranchSearch::new(e, DEFAULT_BRANCH_BUDGET);
            let winners = search.winners(candidates)?;
            if let Some(t) = *target {
                if !winners.contains(t) {
                    return Err(IrvError::TargetCannotWin(t));
                }
            }
            let mut outcome = match *target {
                Some(t) => guided_run(e, candidates, t, &mut search)?,
                None => run_irv_with(e, candidates, |tied| tied.first().expect("nonempty"))?,
            };
            outcome.possible_winners = Some(winners);
            Ok(outcome)
        }
    }
}

/// An IRV run in which `target` wins, steering every tie using the branch
/// search's memo.
fn guided_run(
    e: &Electorate,
    candidates: &NodeSet,
    target: Node,
    search: &mut BranchSearch<'_>,
) -> Result<ElectionOutcome, IrvError> {
    let mut remaining = candidates.clone();
    let mut rounds = Vec::new();
    let mut trace = Vec::new();
    while remaining.len() > 1 {
        let shares = e.shares(&remaining)?;
        let tied = shares.weakly_minimal();
        let mut chosen = None;
        for v in tied.iter().filter(|&v| v != target) {
            let mut rest = remaining.clone();
            rest.remove(v);
            if search.winners(&rest)?.contains(target) {
                chosen = Some(v);
                break;
            }
        }
        let eliminated = chosen.expect("target is a possible winner of this subtree");
        if tied.len() > 1 {
            trace.push(TieBreak {
                tied,
                eliminated,
            });
        }
        rounds.push(Round {
            remaining: remaining.clone(),
            shares,
            eliminated,
        });
        remaining.remove(eliminated);
    }
    Ok(ElectionOutcome {
        rounds,
        winner: target,
        tiebreak_trace: trace,
        possible_winners: None,
    })
}

/// Depth-first search over weakly-minimal eliminations, memoized on the set
/// of surviving candidates.
pub(crate) struct BranchSearch<'a> {
    e: &'a Electorate,
    budget: usize,
    memo: HashMap<NodeSet, NodeSet>,
    small: HashMap<u64, u64>,
}

impl<'a> BranchSearch<'a> {
    pub(crate) fn new(e: &'a Electorate, budget: usize) -> Self {
        BranchSearch {
            e,
            budget,
            memo: HashMap::new(),
            small: HashMap::new(),
        }
    }

    pub(crate) fn winners(&mut self, candidates: &NodeSet) -> Result<NodeSet, IrvError> {
        if self.e.has_mask_kernel() {
            let mask = candidates.to_u128().expect("small graph") as u64;
            return Ok(NodeSet::from_u128(self.winners_mask(mask)? as u128));
        }
        self.winners_general(candidates)
    }

    fn winners_mask(&mut self, mask: u64) -> Result<u64, IrvError> {
        if mask.count_ones() == 1 {
            return Ok(mask);
        }
        if let Some(&w) = self.small.get(&mask) {
            return Ok(w);
        }
        if self.small.len() >= self.budget {
            return Err(IrvError::Incomplete {
                budget: self.budget,
            });
        }
        let mut out = 0u64;
        let mut tied = self.e.mask_weakly_minimal(mask);
        while tied != 0 {
            let v = tied & tied.wrapping_neg();
            tied &= tied - 1;
            out |= self.winners_mask(mask & !v)?;
        }
        self.small.insert(mask, out);
        Ok(out)
    }

    fn winners_general(&mut self, candidates: &NodeSet) -> Result<NodeSet, IrvError> {
        if candidates.len() == 1 {
            return Ok(candidates.clone());
        }
        if let Some(w) = self.memo.get(candidates) {
            return Ok(w.clone());
        }
        if self.memo.len() >= self.budget {
            return Err(IrvError::Incomplete {
                budget: self.budget,
            });
        }
        let tied = self.e.shares(candidates)?.weakly_minimal();
        let mut out = NodeSet::new();
        for v in &tied {
            let mut rest = candidates.clone();
            rest.remove(v);
            out.union_with(&self.winners_general(&rest)?);
        }
        self.memo.insert(candidates.clone(), out.clone());
        Ok(out)
    }
}

/// Every candidate that wins under at least one tiebreak sequence.
///
/// `node_budget` caps the number of distinct surviving-candidate sets the
/// search may expand; exceeding it is an error, never a partial answer.
pub fn possible_winners(
    e: &Electorate,
    candidates: &NodeSet,
    node_budget: usize,
) -> Result<NodeSet, IrvError> {
    e.check_candidates(candidates)?;
    BranchSearch::new(e, node_budget).winners(candidates)
}

/// Winner of an IRV run with uniformly random tiebreaks, without recording
/// rounds.
pub(crate) fn random_tiebreak_winner<R: Rng>(
    e: &Electorate,
    candidates: &NodeSet,
    rng: &mut R,
) -> Result<Node, IrvError> {
    e.check_candidates(candidates)?;
    if e.has_mask_kernel() {
        let mut mask = candidates.to_u128().expect("small graph") as u64;
        while mask.count_ones() > 1 {
            let tied = e.mask_weakly_minimal(mask);
            let k = tied.count_ones();
            let pick = if k == 1 {
                tied
            } else {
                let mut t = tied;
                for _ in 0..rng.gen_range(0..k as usize) {
                    t &= t - 1;
                }
                t & t.wrapping_neg()
            };
            mask &= !pick;
        }
        return Ok(mask.trailing_zeros() as usize);
    }
    Ok(run_irv_with(e, candidates, random_choice(rng))?.winner)
}
