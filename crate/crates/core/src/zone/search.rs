use std::collections::{BTreeSet, HashSet};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::{
    build_loss_graph, condorcet_positions, is_exclusion_zone, ZoneError, ZoneKind, ZoneReport,
    DEFAULT_CHECKER_CAP,
};
use crate::irv::possible_winners;
use crate::nodeset::NodeSet;
use crate::shares::Electorate;

/// Budgets for the exact minimal-zone search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest complement the exact checker may scan.
    pub checker_cap: usize,
    /// State budget for the full-slate possible-winner search.
    pub winner_budget: usize,
    /// Number of loss-closed candidate sets the search may test.
    pub superset_budget: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            checker_cap: DEFAULT_CHECKER_CAP,
            winner_budget: 1 << 22,
            superset_budget: 1 << 16,
        }
    }
}

/// Candidate zones ordered by size, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BySize(NodeSet);

impl Ord for BySize {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.cmp_lex(&other.0)
    }
}

impl PartialOrd for BySize {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// The unique smallest exclusion zone.
///
/// Every zone contains every full-slate possible winner and is closed under
/// reachability in the loss graph, and zones are nested, so the smallest
/// loss-closed superset of the seed that passes the exact check is minimal.
/// Loss-closed supersets are unions of strongly connected components of the
/// loss graph, grown one component at a time in order of size.
pub fn minimal_exclusion_zone(
    e: &Electorate,
    limits: SearchLimits,
) -> Result<ZoneReport, ZoneError> {
    let n = e.n();
    let all = e.all_nodes();
    let loss = build_loss_graph(e);
    let (condorcet_winners, condorcet_losers) = condorcet_positions(e);
    let seed_winners = possible_winners(e, &all, limits.winner_budget)?;
    let seed = loss.closure(&seed_winners);

    let mut dg = DiGraph::<(), ()>::with_capacity(n, 0);
    let ids: Vec<_> = (0..n).map(|_| dg.add_node(())).collect();
    for (u, v) in loss.arcs() {
        dg.add_edge(ids[u], ids[v], ());
    }
    let components: Vec<NodeSet> = tarjan_scc(&dg)
        .into_iter()
        .map(|c| c.into_iter().map(|i| i.index()).collect())
        .collect();
    // Everything a component points to, itself excluded.
    let reach: Vec<NodeSet> = components
        .iter()
        .map(|c| {
            let mut out = NodeSet::new();
            for u in c {
                out.union_with(loss.successors(u));
            }
            out.difference(c)
        })
        .collect();

    let mut queue = BTreeSet::from([BySize(seed.clone())]);
    let mut seen = HashSet::from([seed]);
    let mut tested = 0;
    while let Some(BySize(t)) = queue.pop_first() {
        tested += 1;
        if tested > limits.superset_budget {
            return Err(ZoneError::BudgetExceeded {
                what: "candidate zones",
                budget: limits.superset_budget,
            });
        }
        if is_exclusion_zone(e, &t, limits.checker_cap)?.is_zone() {
            let kind = if t.len() == n {
                ZoneKind::Trivial
            } else {
                ZoneKind::Minimal
            };
            return Ok(ZoneReport {
                zone: t,
                kind,
                seed_winners,
                condorcet_winners,
                condorcet_losers,
            });
        }
        for (c, r) in components.iter().zip(&reach) {
            if c.is_subset(&t) || !r.is_subset(&t) {
                continue;
            }
            let bigger = t.union(c);
            if seen.insert(bigger.clone()) {
                queue.insert(BySize(bigger));
            }
        }
    }
    unreachable!("the full node set is loss-closed and always an exclusion zone")
}

/// Every exclusion zone, by scanning all nonempty subsets, sorted by size
/// then lexicographically.
pub fn all_exclusion_zones(e: &Electorate, max_n: usize) -> Result<Vec<NodeSet>, ZoneError> {
    let n = e.n();
    if n > max_n || n > 20 {
        return Err(ZoneError::TooLarge {
            n,
            max_n: max_n.min(20),
        });
    }
    let mut zones = Vec::new();
    for mask in 1u128..(1u128 << n) {
        let s = NodeSet::from_u128(mask);
        if is_exclusion_zone(e, &s, n)?.is_zone() {
            zones.push(s);
        }
    }
    zones.sort_by(|a, b| a.cmp_lex(b));
    Ok(zones)
}
