//! Exact exclusion-zone machinery.
//!
//! A node set `S` is an exclusion zone when every election with at least one
//! candidate in `S` is won inside `S` under every tiebreak. `S` fails exactly
//! when some `u` in `S` can be eliminated (is weakly last) in a plurality
//! round against some nonempty set `X` of outside candidates.

mod check;
mod gadget;
mod loss;
mod pruned;
mod search;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Node;
use crate::irv::IrvError;
use crate::nodeset::NodeSet;
use crate::shares::{Electorate, TallyError, VoteShares};

pub use check::{is_exclusion_zone, DEFAULT_CHECKER_CAP};
pub use gadget::{rx3c_gadget, GadgetError, Rx3cGadget, Rx3cInstance};
pub use loss::{build_loss_graph, condorcet_positions, loss_closure, LossGraph};
pub use pruned::{is_exclusion_zone_pruned, DEFAULT_PRUNED_BUDGET};
pub use search::{all_exclusion_zones, minimal_exclusion_zone, SearchLimits};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZoneError {
    #[error("the candidate zone must be nonempty")]
    EmptySet,
    #[error(transparent)]
    Tally(#[from] TallyError),
    #[error(transparent)]
    Irv(#[from] IrvError),
    #[error(
        "complement has {c} nodes, above the exact checker cap of {cap}; \
         use the pruned checker or the approximate zone tools"
    )]
    CapExceeded { c: usize, cap: usize },
    #[error("exact search exceeded its budget of {budget} {what}")]
    BudgetExceeded { what: &'static str, budget: usize },
    #[error("graph has {n} nodes; the subset scan is limited to {max_n}")]
    TooLarge { n: usize, max_n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    IsZone,
    NotZone,
}

/// A configuration defeating a candidate zone: `eliminated` (a member of the
/// zone) is weakly last when running against `opponents` (all outside it).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub eliminated: Node,
    pub opponents: NodeSet,
    pub shares: VoteShares,
}

impl Counterexample {
    /// The full candidate configuration `{eliminated} ∪ opponents`.
    pub fn configuration(&self) -> NodeSet {
        let mut c = self.opponents.clone();
        c.insert(self.eliminated);
        c
    }

    /// Recomputes the round and confirms the named node is eliminable.
    pub fn replays(&self, e: &Electorate) -> bool {
        e.shares(&self.configuration())
            .map(|s| s == self.shares && s.is_weakly_minimal(self.eliminated))
            .unwrap_or(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZoneCheckResult {
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
}

impl ZoneCheckResult {
    pub fn is_zone(&self) -> bool {
        self.verdict == Verdict::IsZone
    }

    fn pass() -> Self {
        ZoneCheckResult {
            verdict: Verdict::IsZone,
            counterexample: None,
        }
    }

    fn fail(cx: Counterexample) -> Self {
        ZoneCheckResult {
            verdict: Verdict::NotZone,
            counterexample: Some(cx),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZoneKind {
    /// The smallest exclusion zone, strictly smaller than the node set.
    Minimal,
    /// A set certified as an exclusion zone without a minimality claim.
    Exact,
    /// The only exclusion zone is the whole node set.
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZoneReport {
    pub zone: NodeSet,
    pub kind: ZoneKind,
    pub seed_winners: NodeSet,
    pub condorcet_winners: NodeSet,
    pub condorcet_losers: NodeSet,
}

fn validate_zone(e: &Electorate, s: &NodeSet) -> Result<(), ZoneError> {
    if s.is_empty() {
        return Err(ZoneError::EmptySet);
    }
    e.check_candidates(s)?;
    Ok(())
}
