//! Exact Split-IRV plurality tallies.
//!
//! Every voter node splits one vote evenly among its closest candidates, so a
//! share is a sum of unit fractions. Shares are kept as numerators over a
//! common denominator (the lcm of the tie sizes that occur), which makes every
//! comparison an integer comparison.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{all_pairs_distances, DistanceMatrix, Graph, GraphError, Node};
use crate::nodeset::NodeSet;

/// Largest graph handled by the fixed-denominator bitmask kernel.
pub(crate) const MASK_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TallyError {
    #[error("candidate set is empty")]
    EmptyCandidates,
    #[error("candidate {node} is not a node of the {n}-node graph")]
    CandidateOutOfRange { node: Node, n: usize },
    #[error("a pairwise contest needs two distinct nodes (got {0} twice)")]
    SameNode(Node),
}

/// A connected graph together with its hop-distance matrix: the voters and
/// the possible candidate positions of a graph election.
#[derive(Debug, Clone)]
pub struct Electorate {
    graph: Graph,
    dist: DistanceMatrix,
    kernel: Option<MaskKernel>,
}

/// Precomputed distance layers for graphs with at most [`MASK_LIMIT`] nodes:
/// `layers[v][d]` is the bitmask of nodes at distance `d` from voter `v`.
#[derive(Debug, Clone)]
struct MaskKernel {
    layers: Vec<Vec<u64>>,
    /// lcm(1..=n); every tie size divides it.
    unit: u128,
    /// `portion[k] = unit / k`.
    portion: Vec<u128>,
}

impl Electorate {
    pub fn new(graph: Graph) -> Result<Self, GraphError> {
        let dist = all_pairs_distances(&graph)?;
        Ok(Self::from_parts(graph, dist))
    }

    /// Pairs a graph with its precomputed distance matrix.
    pub fn from_parts(graph: Graph, dist: DistanceMatrix) -> Self {
        assert_eq!(graph.n(), dist.n(), "distance matrix does not match graph");
        let kernel = (graph.n() <= MASK_LIMIT).then(|| MaskKernel::new(&dist));
        Electorate {
            graph,
            dist,
            kernel,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn distances(&self) -> &DistanceMatrix {
        &self.dist
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.n())
    }

    pub(crate) fn check_candidates(&self, candidates: &NodeSet) -> Result<(), TallyError> {
        if candidates.is_empty() {
            return Err(TallyError::EmptyCandidates);
        }
        if candidates.bound() > self.n() {
            return Err(TallyError::CandidateOutOfRange {
                node: candidates.bound() - 1,
                n: self.n(),
            });
        }
        Ok(())
    }

    /// Plurality shares of `candidates`.
    pub fn shares(&self, candidates: &NodeSet) -> Result<VoteShares, TallyError> {
        self.check_candidates(candidates)?;
        Ok(match &self.kernel {
            Some(k) => {
                let mask = candidates.to_u128().expect("small graph") as u64;
                let mut numer = [0u128; MASK_LIMIT];
                k.tally(mask, &mut numer);
                let cands = candidates.to_vec();
                let values = cands.iter().map(|&c| numer[c]).collect();
                VoteShares::small(cands, k.unit, values)
            }
            None => self.tally_general(candidates),
        })
    }

    /// Shares of `u` and `v` in their head-to-head contest.
    pub fn pairwise(&self, u: Node, v: Node) -> Result<(BigRational, BigRational), TallyError> {
        if u == v {
            return Err(TallyError::SameNode(u));
        }
        let s = self.shares(&NodeSet::from_iter([u, v]))?;
        Ok((s.share(u).expect("u"), s.share(v).expect("v")))
    }

    /// Number of voters strictly closer to `u` than to `v`.
    pub(crate) fn closer_count(&self, u: Node, v: Node) -> usize {
        let (ru, rv) = (self.dist.row(u), self.dist.row(v));
        ru.iter().zip(rv).filter(|(a, b)| a < b).count()
    }

    fn tally_general(&self, candidates: &NodeSet) -> VoteShares {
        let cands = candidates.to_vec();
        let n = self.n();
        // Pass 1: tie size per voter.
        let mut tie = vec![0u32; n];
        let mut nearest = vec![u32::MAX; n];
        for v in 0..n {
            let row = self.dist.row(v);
            for &c in &cands {
                let d = row[c];
                match d.cmp(&nearest[v]) {
                    Ordering::Less => {
                        nearest[v] = d;
                        tie[v] = 1;
                    }
                    Ordering::Equal => tie[v] += 1,
                    Ordering::Greater => {}
                }
            }
        }
        let mut sizes: Vec<u32> = tie.clone();
        sizes.sort_unstable();
        sizes.dedup();
        let unit = sizes
            .iter()
            .fold(BigUint::from(1u32), |acc, &k| acc.lcm(&BigUint::from(k)));
        // Pass 2: distribute.
        let fits = unit
            .to_u128()
            .filter(|u| u.checked_mul(n as u128).is_some());
        let pos = |c: Node| cands.binary_search(&c).expect("candidate");
        match fits {
            Some(unit) => {
                let mut numer = vec![0u128; cands.len()];
                for v in 0..n {
                    let part = unit / tie[v] as u128;
                    let row = self.dist.row(v);
                    for &c in cands.iter().filter(|&&c| row[c] == nearest[v]) {
                        numer[pos(c)] += part;
                    }
                }
                VoteShares::small(cands, unit, numer)
            }
            None => {
                let mut numer = vec![BigUint::zero(); cands.len()];
                for v in 0..n {
                    let part = &unit / tie[v];
                    let row = self.dist.row(v);
                    for &c in cands.iter().filter(|&&c| row[c] == nearest[v]) {
                        numer[pos(c)] += &part;
                    }
                }
                VoteShares {
                    candidates: cands,
                    scaled: Scaled::Big { unit, numer },
                }
            }
        }
    }

    /// Bitmask kernel, available when the graph has at most 64 nodes.
    pub(crate) fn mask_tally(&self, mask: u64, numer: &mut [u128; MASK_LIMIT]) -> bool {
        match &self.kernel {
            Some(k) => {
                k.tally(mask, numer);
                true
            }
            None => false,
        }
    }

    pub(crate) fn has_mask_kernel(&self) -> bool {
        self.kernel.is_some()
    }

    /// Members of `mask` holding the smallest share.
    pub(crate) fn mask_weakly_minimal(&self, mask: u64) -> u64 {
        let mut numer = [0u128; MASK_LIMIT];
        let k = self.kernel.as_ref().expect("mask kernel");
        k.tally(mask, &mut numer);
        let mut min = u128::MAX;
        let mut out = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let c = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            match numer[c].cmp(&min) {
                Ordering::Less => {
                    min = numer[c];
                    out = 1 << c;
                }
                Ordering::Equal => out |= 1 << c,
                Ordering::Greater => {}
            }
        }
        out
    }
}

impl MaskKernel {
    fn new(dist: &DistanceMatrix) -> Self {
        let n = dist.n();
        let layers = (0..n)
            .map(|v| {
                let row = dist.row(v);
                let depth = *row.iter().max().unwrap_or(&0) as usize;
                let mut l = vec![0u64; depth + 1];
                for (c, &d) in row.iter().enumerate() {
                    l[d as usize] |= 1 << c;
                }
                l
            })
            .collect();
        let unit = (1..=n as u128).fold(1u128, |acc, k| acc.lcm(&k));
        let portion = (0..=n as u128)
            .map(|k| unit.checked_div(k).unwrap_or(0))
            .collect();
        MaskKernel {
            layers,
            unit,
            portion,
        }
    }

    fn tally(&self, mask: u64, numer: &mut [u128; MASK_LIMIT]) {
        let mut rest = mask;
        while rest != 0 {
            let c = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            numer[c] = 0;
        }
        for layers in &self.layers {
            let tie = layers
                .iter()
                .map(|l| l & mask)
                .find(|&t| t != 0)
                .expect("connected graph reaches every candidate");
            let part = self.portion[tie.count_ones() as usize];
            let mut t = tie;
            while t != 0 {
                let c = t.trailing_zeros() as usize;
                t &= t - 1;
                numer[c] += part;
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Scaled {
    Small { unit: u128, numer: Vec<u128> },
    Big { unit: BigUint, numer: Vec<BigUint> },
}

/// Exact plurality shares of a candidate set. Shares sum to the number of
/// voters.
#[derive(Debug, Clone)]
pub struct VoteShares {
    candidates: Vec<Node>,
    scaled: Scaled,
}

impl VoteShares {
    fn small(candidates: Vec<Node>, unit: u128, numer: Vec<u128>) -> Self {
        VoteShares {
            candidates,
            scaled: Scaled::Small { unit, numer },
        }
    }

    /// Candidates in increasing node order.
    pub fn candidates(&self) -> &[Node] {
        &self.candidates
    }

    fn position(&self, c: Node) -> Option<usize> {
        self.candidates.binary_search(&c).ok()
    }

    fn ratio_at(&self, i: usize) -> BigRational {
        match &self.scaled {
            Scaled::Small { unit, numer } => {
                BigRational::new(BigInt::from(numer[i]), BigInt::from(*unit))
            }
            Scaled::Big { unit, numer } => {
                BigRational::new(BigInt::from(numer[i].clone()), BigInt::from(unit.clone()))
            }
        }
    }

    /// The exact share of `c`, or `None` if `c` is not a candidate.
    pub fn share(&self, c: Node) -> Option<BigRational> {
        self.position(c).map(|i| self.ratio_at(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Node, BigRational)> + '_ {
        (0..self.candidates.len()).map(|i| (self.candidates[i], self.ratio_at(i)))
    }

    pub fn share_f64(&self, c: Node) -> Option<f64> {
        self.share(c).and_then(|r| r.to_f64())
    }

    /// Sum of all shares (always the number of voters).
    pub fn total(&self) -> BigRational {
        self.iter().map(|(_, s)| s).sum()
    }

    fn cmp_pos(&self, i: usize, j: usize) -> Ordering {
        match &self.scaled {
            Scaled::Small { numer, .. } => numer[i].cmp(&numer[j]),
            Scaled::Big { numer, .. } => numer[i].cmp(&numer[j]),
        }
    }

    /// Compares the shares of two candidates.
    pub fn compare(&self, a: Node, b: Node) -> Option<Ordering> {
        Some(self.cmp_pos(self.position(a)?, self.position(b)?))
    }

    /// Candidates tied for the smallest share (those IRV may eliminate).
    pub fn weakly_minimal(&self) -> NodeSet {
        let mut best = 0;
        let mut out = vec![0];
        for i in 1..self.candidates.len() {
            match self.cmp_pos(i, best) {
                Ordering::Less => {
                    best = i;
                    out.clear();
                    out.push(i);
                }
                Ordering::Equal => out.push(i),
                Ordering::Greater => {}
            }
        }
        out.into_iter().map(|i| self.candidates[i]).collect()
    }

    pub fn is_weakly_minimal(&self, c: Node) -> bool {
        match self.position(c) {
            Some(i) => (0..self.candidates.len()).all(|j| self.cmp_pos(i, j).is_le()),
            None => false,
        }
    }
}

impl PartialEq for VoteShares {
    fn eq(&self, other: &Self) -> bool {
        self.candidates == other.candidates && self.iter().eq(other.iter())
    }
}

impl Eq for VoteShares {}

impl fmt::Display for VoteShares {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, s)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}: {s}")?;
        }
        Ok(())
    }
}

/// Serialized as a list of `{ "node": index, "share": "p/q" }` records.
impl Serialize for VoteShares {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            node: Node,
            share: String,
        }
        let mut seq = serializer.serialize_seq(Some(self.candidates.len()))?;
        for (node, s) in self.iter() {
            seq.serialize_element(&Entry {
                node,
                share: s.to_string(),
            })?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn path(n: usize) -> Electorate {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Electorate::new(Graph::new(n, &edges).unwrap()).unwrap()
    }

    fn q(x: f64) -> BigRational {
        BigRational::from_f64(x).unwrap()
    }

    #[test]
    fn path_examples() {
        let p3 = path(3);
        let s = p3.shares(&NodeSet::from_iter([0, 2])).unwrap();
        assert_eq!(s.share(0), Some(q(1.5)));
        assert_eq!(s.share(2), Some(q(1.5)));

        let p6 = path(6);
        let s = p6.shares(&NodeSet::from_iter([1, 2, 4])).unwrap();
        assert_eq!(s.share(1), Some(q(2.0)));
        assert_eq!(s.share(2), Some(q(1.5)));
        assert_eq!(s.share(4), Some(q(2.5)));
        assert_eq!(s.weakly_minimal(), NodeSet::singleton(2));
    }

    #[test]
    fn pairwise_contests() {
        let p3 = path(3);
        assert_eq!(p3.pairwise(0, 1).unwrap(), (q(1.0), q(2.0)));
        assert_eq!(p3.pairwise(0, 2).unwrap(), (q(1.5), q(1.5)));
        assert_eq!(path(6).pairwise(0, 5).unwrap(), (q(3.0), q(3.0)));
        assert_eq!(p3.pairwise(1, 1), Err(TallyError::SameNode(1)));
    }

    #[test]
    fn rejects_bad_candidate_sets() {
        let p3 = path(3);
        assert_eq!(
            p3.shares(&NodeSet::new()).unwrap_err(),
            TallyError::EmptyCandidates
        );
        assert!(matches!(
            p3.shares(&NodeSet::singleton(3)),
            Err(TallyError::CandidateOutOfRange { node: 3, n: 3 })
        ));
    }

    #[test]
    fn kernel_and_general_tallies_agree() {
        let e = path(9);
        let general = Electorate {
            kernel: None,
            ..e.clone()
        };
        for mask in 1u64..(1 << 9) {
            let c = NodeSet::from_u128(mask as u128);
            let a = e.shares(&c).unwrap();
            let b = general.shares(&c).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.total(), q(9.0));
            let wm = e.mask_weakly_minimal(mask);
            assert_eq!(NodeSet::from_u128(wm as u128), a.weakly_minimal());
        }
    }

    #[test]
    fn large_denominators_fall_back_to_big_integers() {
        // Voter hubs hanging off a root, hub i owning p_i candidate leaves for
        // the primes p_i up to 113. Hub i splits its vote p_i ways, and the
        // product of those primes exceeds u128.
        let primes: Vec<usize> = (2..=113)
            .filter(|&p| (2..p).all(|d| p % d != 0))
            .collect();
        let mut edges = Vec::new();
        let mut cands = NodeSet::new();
        let mut next = 1;
        for &p in &primes {
            let hub = next;
            edges.push((0, hub));
            next += 1;
            for _ in 0..p {
                edges.push((hub, next));
                cands.insert(next);
                next += 1;
            }
        }
        let e = Electorate::new(Graph::new(next, &edges).unwrap()).unwrap();
        let s = e.shares(&cands).unwrap();
        assert!(matches!(s.scaled, Scaled::Big { .. }));
        assert_eq!(s.total(), BigRational::from_integer(next.into()));
        // The first leaf of the 2-leaf hub gets itself, half its hub, and a
        // share of the root, which is equidistant from all 1593 leaves.
        assert_eq!(
            s.share(2),
            Some(q(1.5) + BigRational::new(1.into(), 1593.into()))
        );
    }
}
