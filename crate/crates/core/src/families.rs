//! Graph families whose minimal exclusion zones have closed forms.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, Node};
use crate::nodeset::NodeSet;
use crate::shares::Electorate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "param", rename_all = "snake_case")]
pub enum FamilySpec {
    /// Path on `n` nodes, indexed along the path.
    Path(usize),
    /// Two adjacent hubs (nodes 0 and 1) with this many leaves each; the
    /// leaves of hub 0 come first.
    Bistar(usize),
    /// Perfect binary tree of the given height in heap order (children of
    /// node `i` are `2i+1` and `2i+2`).
    PerfectBinaryTree(u32),
    Cycle(usize),
    Complete(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid family parameters: {0}")]
    Invalid(String),
    #[error("cannot parse family {0:?}; expected e.g. path:6, bistar:3, binary-tree:2, cycle:5, complete:4")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyZone {
    Nodes(NodeSet),
    Trivial,
}

impl FamilySpec {
    pub fn node_count(&self) -> usize {
        match *self {
            FamilySpec::Path(n) | FamilySpec::Cycle(n) | FamilySpec::Complete(n) => n,
            FamilySpec::Bistar(k) => 2 * k + 2,
            FamilySpec::PerfectBinaryTree(h) => (1usize << (h + 1)) - 1,
        }
    }

    fn validate(&self) -> Result<(), FamilyError> {
        let bad = |m: &str| Err(FamilyError::Invalid(m.to_string()));
        match *self {
            FamilySpec::Path(0) | FamilySpec::Complete(0) => bad("n must be at least 1"),
            FamilySpec::Cycle(n) if n < 3 => bad("a simple cycle needs at least 3 nodes"),
            FamilySpec::Bistar(0) => bad("each hub needs at least one leaf"),
            FamilySpec::PerfectBinaryTree(h) if h > 20 => bad("height above 20 is not supported"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Path(n) => write!(f, "path:{n}"),
            FamilySpec::Bistar(k) => write!(f, "bistar:{k}"),
            FamilySpec::PerfectBinaryTree(h) => write!(f, "binary-tree:{h}"),
            FamilySpec::Cycle(n) => write!(f, "cycle:{n}"),
            FamilySpec::Complete(n) => write!(f, "complete:{n}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, FamilyError> {
        let err = || FamilyError::Parse(s.to_string());
        let (kind, param) = s.split_once(':').ok_or_else(err)?;
        let p: usize = param.trim().parse().map_err(|_| err())?;
        let spec = match kind.trim() {
            "path" => FamilySpec::Path(p),
            "bistar" => FamilySpec::Bistar(p),
            "binary-tree" | "perfect-binary-tree" => {
                FamilySpec::PerfectBinaryTree(u32::try_from(p).map_err(|_| err())?)
            }
            "cycle" => FamilySpec::Cycle(p),
            "complete" => FamilySpec::Complete(p),
            _ => return Err(err()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn build_family(spec: FamilySpec) -> Result<Graph, FamilyError> {
    spec.validate()?;
    let n = spec.node_count();
    let edges: Vec<(Node, Node)> = match spec {
        FamilySpec::Path(n) => (1..n).map(|i| (i - 1, i)).collect(),
        FamilySpec::Bistar(k) => {
            let mut e = vec![(0, 1)];
            e.extend((0..k).map(|i| (0, 2 + i)));
            e.extend((0..k).map(|i| (1, 2 + k + i)));
            e
        }
        FamilySpec::PerfectBinaryTree(_) => (1..n).map(|i| ((i - 1) / 2, i)).collect(),
        FamilySpec::Cycle(n) => (0..n).map(|i| (i, (i + 1) % n)).collect(),
        FamilySpec::Complete(n) => (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect(),
    };
    Ok(Graph::new(n, &edges).expect("family constructions are connected"))
}

/// The known minimal exclusion zone, computed from the parameters alone.
///
/// * Path: nodes `⌈n/6 + 1/2⌉ ..= n − ⌈n/6 + 1/2⌉ + 1` (1-based).
/// * Bistar: the two hubs.
/// * Perfect binary tree: trivial for odd height and for height 0; the
///   internal nodes for even positive height.
/// * Cycle, complete graph: trivial (every pairwise contest is a tie).
pub fn family_zone(spec: FamilySpec) -> Result<FamilyZone, FamilyError> {
    spec.validate()?;
    let n = spec.node_count();
    let zone: NodeSet = match spec {
        FamilySpec::Path(n) => {
            // ⌈n/6 + 1/2⌉ = ⌈(n + 3)/6⌉
            let lo = (n + 3).div_ceil(6);
            let hi = n - lo + 1;
            (lo - 1..hi).collect()
        }
        FamilySpec::Bistar(_) => NodeSet::from_iter([0, 1]),
        FamilySpec::PerfectBinaryTree(h) if h > 0 && h % 2 == 0 => (0..(1 << h) - 1).collect(),
        FamilySpec::PerfectBinaryTree(_) | FamilySpec::Cycle(_) | FamilySpec::Complete(_) => {
            NodeSet::full(n)
        }
    };
    Ok(if zone.len() == n {
        FamilyZone::Trivial
    } else {
        FamilyZone::Nodes(zone)
    })
}

/// Whether every pairwise contest is an exact tie, in which case every node
/// can win a two-candidate election and the minimal zone is trivial.
pub fn is_all_pairwise_ties(e: &Electorate) -> bool {
    let n = e.n();
    (0..n).all(|u| (u + 1..n).all(|v| e.closer_count(u, v) == e.closer_count(v, u)))
}
