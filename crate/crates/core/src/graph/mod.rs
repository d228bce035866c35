//! Undirected simple graphs, hop distances, and text formats.

mod edgelist;
mod graph6;

use std::collections::VecDeque;

use thiserror::Error;

pub use edgelist::{parse_edge_list, EdgeListOptions};
pub use graph6::{parse_graph6, parse_graph6_with, to_graph6};

pub type Node = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    Empty,
    #[error("edge ({u}, {v}) references a node outside 0..{n}")]
    NodeOutOfRange { u: Node, v: Node, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(String),
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("label list has {got} entries for {n} nodes")]
    LabelCount { got: usize, n: usize },
    #[error("graph6: {0}")]
    Graph6(String),
    #[error("edge list line {line}: cannot parse {text:?}")]
    Unparsable { line: usize, text: String },
}

/// An undirected simple graph on nodes `0..n`, optionally carrying the
/// original string labels of its nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Node>>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a connected graph. Duplicate edges are merged.
    pub fn new(n: usize, edges: &[(Node, Node)]) -> Result<Self, GraphError> {
        let g = Self::new_allow_disconnected(n, edges)?;
        g.require_connected()?;
        Ok(g)
    }

    /// Builds a graph without the connectivity requirement. Such graphs can be
    /// inspected and split into components but cannot host elections.
    pub fn new_allow_disconnected(n: usize, edges: &[(Node, Node)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::NodeOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop((u + 1).to_string()));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n() {
            return Err(GraphError::LabelCount {
                got: labels.len(),
                n: self.n(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: Node) -> &[Node] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Node) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Node, v: Node) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Node, Node)> {
        let mut out = Vec::with_capacity(self.m());
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The display label of `v`: its original label, or its 1-based index.
    pub fn label(&self, v: Node) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => (v + 1).to_string(),
        }
    }

    /// Resolves a display label (see [`Graph::label`]) back to an index.
    pub fn node_by_label(&self, label: &str) -> Option<Node> {
        match &self.labels {
            Some(l) => l.iter().position(|x| x == label),
            None => label
                .parse::<usize>()
                .ok()
                .filter(|&i| i >= 1 && i <= self.n())
                .map(|i| i - 1),
        }
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Node>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    fn require_connected(&self) -> Result<(), GraphError> {
        match self.components().len() {
            1 => Ok(()),
            components => Err(GraphError::Disconnected { components }),
        }
    }

    /// The subgraph induced by `nodes` (given in the order they should be
    /// indexed), keeping display labels.
    pub fn induced(&self, nodes: &[Node]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in nodes.iter().enumerate() {
            index[v] = i;
        }
        let adj = nodes
            .iter()
            .map(|&v| {
                let mut list: Vec<Node> = self.adj[v]
                    .iter()
                    .filter(|&&w| index[w] != usize::MAX)
                    .map(|&w| index[w])
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Graph {
            adj,
            labels: Some(nodes.iter().map(|&v| self.label(v)).collect()),
        }
    }

    /// The largest connected component; ties go to the component holding the
    /// smallest node index.
    pub fn largest_component(&self) -> Graph {
        let comps = self.components();
        let best = comps
            .iter()
            .enumerate()
            .max_by_key(|(i, c)| (c.len(), std::cmp::Reverse(*i)))
            .map(|(_, c)| c.clone())
            .expect("graph has at least one node");
        if best.len() == self.n() {
            self.clone()
        } else {
            self.induced(&best)
        }
    }

    /// Relabels nodes so that old node `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[Node]) -> Graph {
        let n = self.n();
        let mut adj = vec![Vec::new(); n];
        for (u, list) in self.adj.iter().enumerate() {
            adj[perm[u]] = list.iter().map(|&v| perm[v]).collect();
            adj[perm[u]].sort_unstable();
        }
        let labels = self.labels.as_ref().map(|l| {
            let mut out = vec![String::new(); n];
            for (u, lab) in l.iter().enumerate() {
                out[perm[u]] = lab.clone();
            }
            out
        });
        Graph { adj, labels }
    }
}

/// All-pairs hop distances of a connected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: Node, v: Node) -> u32 {
        self.d[u * self.n + v]
    }

    pub fn row(&self, u: Node) -> &[u32] {
        &self.d[u * self.n..(u + 1) * self.n]
    }

    pub fn diameter(&self) -> u32 {
        self.d.iter().copied().max().unwrap_or(0)
    }
}

/// Breadth-first hop distances between every pair of nodes.
pub fn all_pairs_distances(g: &Graph) -> Result<DistanceMatrix, GraphError> {
    let n = g.n();
    let mut d = vec![u32::MAX; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for s in 0..n {
        let row = &mut d[s * n..(s + 1) * n];
        row[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if row[v] == u32::MAX {
                    row[v] = row[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if row.contains(&u32::MAX) {
            return Err(GraphError::Disconnected {
                components: g.components().len(),
            });
        }
    }
    Ok(DistanceMatrix { n, d })
}
