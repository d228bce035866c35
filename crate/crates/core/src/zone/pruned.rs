use std::collections::BTreeMap;

use num_rational::BigRational;

use super::{validate_zone, Counterexample, ZoneCheckResult, ZoneError};
use crate::graph::Node;
use crate::nodeset::NodeSet;
use crate::shares::Electorate;

/// Default search-node budget of [`is_exclusion_zone_pruned`].
pub const DEFAULT_PRUNED_BUDGET: usize = 50_000_000;

/// Exact exclusion-zone check by branch and bound, for complements too large
/// for the `2^c` scan.
///
/// For each `u` in `s` it searches for an opponent set `X` outside `s` that
/// leaves `u` weakly last, deciding outside nodes nearest-to-`u` first. Two
/// facts keep the search small:
///
/// * Adding candidates never raises a present candidate's share. With `I` the
///   nodes already put in `X` and `U` the undecided ones, every `x` in `I`
///   has at most its share in `{u} ∪ I` and `u` has at least its share in
///   `{u} ∪ I ∪ U`; if some `x` is already below that bound, no completion
///   of `I` works.
/// * Outside nodes with identical neighbourhoods (twins) are interchangeable,
///   so only the number taken from each twin class matters.
///
/// The verdict equals [`super::is_exclusion_zone`]'s; the counterexample may
/// differ but always replays.
pub fn is_exclusion_zone_pruned(
    e: &Electorate,
    s: &NodeSet,
    budget: usize,
) -> Result<ZoneCheckResult, ZoneError> {
    validate_zone(e, s)?;
    let outside = e.all_nodes().difference(s);
    if outside.is_empty() {
        return Ok(ZoneCheckResult::pass());
    }
    let twins = twin_classes(e, &outside);
    let mut search = Search {
        e,
        budget,
        visited: 0,
    };
    for u in s {
        let mut classes = twins.clone();
        let dist = e.distances().row(u);
        classes.sort_by_key(|c| (c.iter().map(|&v| dist[v]).min(), c[0]));
        if let Some(x) = search.run(u, &classes)? {
            let mut config = x.clone();
            config.insert(u);
            let shares = e.shares(&config)?;
            return Ok(ZoneCheckResult::fail(Counterexample {
                eliminated: u,
                opponents: x,
                shares,
            }));
        }
    }
    Ok(ZoneCheckResult::pass())
}

/// Partition of `nodes` into classes of false twins (equal open
/// neighbourhoods) or true twins (equal closed neighbourhoods).
fn twin_classes(e: &Electorate, nodes: &NodeSet) -> Vec<Vec<Node>> {
    let g = e.graph();
    let mut open: BTreeMap<Vec<Node>, Vec<Node>> = BTreeMap::new();
    for v in nodes {
        open.entry(g.neighbors(v).to_vec()).or_default().push(v);
    }
    let mut classes = Vec::new();
    let mut closed: BTreeMap<Vec<Node>, Vec<Node>> = BTreeMap::new();
    for (_, class) in open {
        if class.len() > 1 {
            classes.push(class);
        } else {
            let v = class[0];
            let mut key = g.neighbors(v).to_vec();
            key.push(v);
            key.sort_unstable();
            closed.entry(key).or_default().push(v);
        }
    }
    classes.extend(closed.into_values());
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort();
    classes
}

struct Search<'a> {
    e: &'a Electorate,
    budget: usize,
    visited: usize,
}

impl Search<'_> {
    fn run(&mut self, u: Node, classes: &[Vec<Node>]) -> Result<Option<NodeSet>, ZoneError> {
        let undecided: NodeSet = classes.iter().flatten().copied().collect();
        self.dfs(u, classes, NodeSet::new(), undecided)
    }

    fn share(&self, config: &NodeSet, c: Node) -> Result<BigRational, ZoneError> {
        Ok(self.e.shares(config)?.share(c).expect("candidate"))
    }

    fn dfs(
        &mut self,
        u: Node,
        classes: &[Vec<Node>],
        chosen: NodeSet,
        undecided: NodeSet,
    ) -> Result<Option<NodeSet>, ZoneError> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(ZoneError::BudgetExceeded {
                what: "branch-and-bound nodes",
                budget: self.budget,
            });
        }
        if !chosen.is_empty() {
            let mut config = chosen.clone();
            config.insert(u);
            let here = self.e.shares(&config)?;
            if here.is_weakly_minimal(u) {
                return Ok(Some(chosen));
            }
            if !undecided.is_empty() {
                config.union_with(&undecided);
                let floor = self.share(&config, u)?;
                if chosen.iter().any(|x| here.share(x).expect("candidate") < floor) {
                    return Ok(None);
                }
            } else {
                return Ok(None);
            }
        }
        let Some((class, rest)) = classes.split_first() else {
            return Ok(None);
        };
        let remaining = undecided.difference(&class.iter().copied().collect());
        let mut taken = chosen;
        for k in 0..=class.len() {
            if k > 0 {
                taken.insert(class[k - 1]);
            }
            if let Some(x) = self.dfs(u, rest, taken.clone(), remaining.clone())? {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }
}
