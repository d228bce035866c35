//! Graphs built from restricted exact-cover-by-3-sets (RX3C) instances, in
//! which the two "winning" nodes form an exclusion zone exactly when the
//! instance has no exact cover.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Graph, Node};
use crate::nodeset::NodeSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("instance header: {0}")]
    Header(String),
    #[error("set on line {line} must list three distinct items")]
    BadSet { line: usize },
    #[error("expected {expected} sets, found {found}")]
    SetCount { expected: usize, found: usize },
    #[error("expected {expected} distinct items, found {found}")]
    ItemCount { expected: usize, found: usize },
    #[error("item {item} appears in {count} sets instead of 3")]
    Coverage { item: String, count: usize },
    #[error("the gadget needs an odd n so that (5n-1)/2 is an integer (got n = {0})")]
    EvenN(usize),
}

/// An RX3C instance: `3n` items, `3n` three-element sets, every item in
/// exactly three sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rx3cInstance {
    items: Vec<String>,
    sets: Vec<[usize; 3]>,
}

impl Rx3cInstance {
    /// Validates and builds an instance; items are indexed in sorted order.
    pub fn new<S: AsRef<str>>(sets: &[[S; 3]]) -> Result<Self, GadgetError> {
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        for set in sets {
            for item in set {
                index.insert(item.as_ref().to_string(), 0);
            }
        }
        for (i, v) in index.values_mut().enumerate() {
            *v = i;
        }
        let mut out = Vec::with_capacity(sets.len());
        for (line, set) in sets.iter().enumerate() {
            let mut s = set.each_ref().map(|x| index[x.as_ref()]);
            s.sort_unstable();
            if s[0] == s[1] || s[1] == s[2] {
                return Err(GadgetError::BadSet { line: line + 2 });
            }
            out.push(s);
        }
        let items: Vec<String> = index.into_keys().collect();
        if !sets.len().is_multiple_of(3) || sets.is_empty() {
            return Err(GadgetError::SetCount {
                expected: sets.len().div_ceil(3).max(1) * 3,
                found: sets.len(),
            });
        }
        if items.len() != sets.len() {
            return Err(GadgetError::ItemCount {
                expected: sets.len(),
                found: items.len(),
            });
        }
        let mut count = vec![0; items.len()];
        for s in &out {
            for &x in s {
                count[x] += 1;
            }
        }
        if let Some(x) = count.iter().position(|&c| c != 3) {
            return Err(GadgetError::Coverage {
                item: items[x].clone(),
                count: count[x],
            });
        }
        Ok(Rx3cInstance { items, sets: out })
    }

    /// Parses the text format: a line with `n`, then `3n` lines of three
    /// whitespace-separated item labels. Blank lines and `#` comments are
    /// ignored.
    pub fn parse(text: &str) -> Result<Self, GadgetError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| GadgetError::Header("missing n".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| GadgetError::Header(format!("{header:?} is not a positive integer")))?;
        if n == 0 {
            return Err(GadgetError::Header("n must be positive".into()));
        }
        let mut sets = Vec::new();
        for (line, l) in lines {
            let tokens: Vec<&str> = l.split_whitespace().collect();
            let [a, b, c] = tokens[..] else {
                return Err(GadgetError::BadSet { line });
            };
            sets.push([a, b, c]);
        }
        if sets.len() != 3 * n {
            return Err(GadgetError::SetCount {
                expected: 3 * n,
                found: sets.len(),
            });
        }
        Self::new(&sets)
    }

    /// The `n` of the instance (a third of the item count).
    pub fn n(&self) -> usize {
        self.items.len() / 3
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    /// Sets as sorted triples of item indices.
    pub fn sets(&self) -> &[[usize; 3]] {
        &self.sets
    }

    /// All exact covers, each as sorted set indices.
    pub fn exact_covers(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        self.cover_from(0, &mut vec![false; self.items.len()], &mut chosen, &mut out);
        out
    }

    fn cover_from(
        &self,
        item: usize,
        used: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some(first_free) = (item..self.items.len()).find(|&x| !used[x]) else {
            let mut c = chosen.clone();
            c.sort_unstable();
            out.push(c);
            return;
        };
        for (i, set) in self.sets.iter().enumerate() {
            if set.contains(&first_free) && set.iter().all(|&x| !used[x]) {
                set.iter().for_each(|&x| used[x] = true);
                chosen.push(i);
                self.cover_from(first_free + 1, used, chosen, out);
                chosen.pop();
                set.iter().for_each(|&x| used[x] = false);
            }
        }
    }
}

/// The constructed graph with its designated node roles.
#[derive(Debug, Clone)]
pub struct Rx3cGadget {
    pub graph: Graph,
    pub s1: Node,
    pub s2: Node,
    /// One node per set, in set order.
    pub set_nodes: Vec<Node>,
}

impl Rx3cGadget {
    /// The designated pair `{s1, s2}`.
    pub fn winning_pair(&self) -> NodeSet {
        NodeSet::from_iter([self.s1, self.s2])
    }
}

/// Builds the gadget graph. Nodes are laid out as `s1, s2`, the set nodes
/// `c_i`, the item copies, the set-item nodes `y_{i,x}`, then the bonus nodes
/// (one per set node, then one each for `s1` and `s2`).
pub fn rx3c_gadget(inst: &Rx3cInstance) -> Result<Rx3cGadget, GadgetError> {
    let n = inst.n();
    if n.is_multiple_of(2) {
        return Err(GadgetError::EvenN(n));
    }
    let k = inst.sets.len();
    let copies = (5 * n - 1) / 2;
    let mut labels: Vec<String> = vec!["s1".into(), "s2".into()];
    let (s1, s2) = (0, 1);
    let set_nodes: Vec<Node> = (0..k).map(|i| 2 + i).collect();
    labels.extend((0..k).map(|i| format!("c{}", i + 1)));
    let item_base = labels.len();
    for x in &inst.items {
        labels.extend((1..=copies).map(|j| format!("x{x}_{j}")));
    }
    let item_copies = |x: usize| (0..copies).map(move |j| item_base + x * copies + j);

    let mut edges = Vec::new();
    // Set nodes to every copy of their items.
    for (i, set) in inst.sets.iter().enumerate() {
        for &x in set {
            edges.extend(item_copies(x).map(|v| (set_nodes[i], v)));
        }
    }
    // Set-item nodes: adjacent to their set node and both winning nodes.
    for (i, set) in inst.sets.iter().enumerate() {
        for &x in set {
            let y = labels.len();
            labels.push(format!("y{}_{}", i + 1, inst.items[x]));
            edges.extend([(set_nodes[i], y), (s1, y), (s2, y)]);
        }
    }
    // Clique on set nodes and winning nodes.
    let clique: Vec<Node> = [s1, s2].into_iter().chain(set_nodes.iter().copied()).collect();
    for (a, &u) in clique.iter().enumerate() {
        edges.extend(clique[a + 1..].iter().map(|&v| (u, v)));
    }
    // Bonus nodes.
    for (i, &c) in set_nodes.iter().enumerate() {
        let b = labels.len();
        labels.push(format!("b{}", i + 1));
        edges.push((c, b));
    }
    for (j, s) in [s1, s2].into_iter().enumerate() {
        let b = labels.len();
        labels.push(format!("b{}", k + 1 + j));
        edges.push((s, b));
    }
    let graph = Graph::new(labels.len(), &edges)
        .expect("gadget is connected through the clique")
        .with_labels(labels)
        .expect("one label per node");
    Ok(Rx3cGadget {
        graph,
        s1,
        s2,
        set_nodes,
    })
}
