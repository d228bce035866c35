use std::collections::VecDeque;

use crate::graph::Node;
use crate::nodeset::NodeSet;
use crate::shares::Electorate;

/// Pairwise loss graph: an arc `u -> v` whenever `u` loses to or ties `v`
/// head-to-head. Exclusion zones are closed under reachability in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LossGraph {
    out: Vec<NodeSet>,
}

impl LossGraph {
    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn has_arc(&self, u: Node, v: Node) -> bool {
        self.out[u].contains(v)
    }

    pub fn successors(&self, u: Node) -> &NodeSet {
        &self.out[u]
    }

    pub fn arcs(&self) -> Vec<(Node, Node)> {
        (0..self.n())
            .flat_map(|u| self.out[u].iter().map(move |v| (u, v)))
            .collect()
    }

    /// `s` together with every node reachable from it.
    pub fn closure(&self, s: &NodeSet) -> NodeSet {
        let mut seen = s.clone();
        let mut queue: VecDeque<Node> = s.iter().collect();
        while let Some(u) = queue.pop_front() {
            for v in &self.out[u] {
                if seen.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}

/// Resolves all pairwise contests. In a contest the voters equidistant from
/// both candidates split evenly, so `u` loses or ties exactly when no more
/// voters strictly prefer `u` than strictly prefer `v`.
pub fn build_loss_graph(e: &Electorate) -> LossGraph {
    let n = e.n();
    let mut out = vec![NodeSet::new(); n];
    for u in 0..n {
        for v in u + 1..n {
            let (a, b) = (e.closer_count(u, v), e.closer_count(v, u));
            if a <= b {
                out[u].insert(v);
            }
            if b <= a {
                out[v].insert(u);
            }
        }
    }
    LossGraph { out }
}

pub fn loss_closure(l: &LossGraph, s: &NodeSet) -> NodeSet {
    l.closure(s)
}

/// Weak Condorcet winners (at least half the vote against every opponent)
/// and weak Condorcet losers (at most half against every opponent).
pub fn condorcet_positions(e: &Electorate) -> (NodeSet, NodeSet) {
    let n = e.n();
    let mut winners = NodeSet::full(n);
    let mut losers = NodeSet::full(n);
    for u in 0..n {
        for v in u + 1..n {
            let (a, b) = (e.closer_count(u, v), e.closer_count(v, u));
            if a < b {
                winners.remove(u);
                losers.remove(v);
            } else if b < a {
                winners.remove(v);
                losers.remove(u);
            }
        }
    }
    (winners, losers)
}
