use std::collections::{BTreeMap, BTreeSet};

use super::{Graph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeListOptions {
    /// Treat every line as an undirected edge. When false, a line `u v` is
    /// read as a directed nomination and only reciprocated pairs become edges.
    pub symmetrize: bool,
    /// Keep only the largest connected component instead of rejecting
    /// disconnected input.
    pub largest_component: bool,
}

impl Default for EdgeListOptions {
    fn default() -> Self {
        EdgeListOptions {
            symmetrize: true,
            largest_component: false,
        }
    }
}

/// Parses lines of `u v` pairs (separated by whitespace and/or a comma).
///
/// `#` starts a comment. Nodes are indexed in sorted label order (numerically
/// when every label is an integer), so the result does not depend on the
/// order of the input lines.
pub fn parse_edge_list(text: &str, opts: EdgeListOptions) -> Result<Graph, GraphError> {
    let mut arcs: BTreeSet<(String, String)> = BTreeSet::new();
    let mut labels: BTreeSet<String> = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        let [u, v] = tokens[..] else {
            return Err(GraphError::Unparsable {
                line: i + 1,
                text: raw.to_string(),
            });
        };
        if u == v {
            return Err(GraphError::SelfLoop(u.to_string()));
        }
        labels.insert(u.to_string());
        labels.insert(v.to_string());
        arcs.insert((u.to_string(), v.to_string()));
    }
    if labels.is_empty() {
        return Err(GraphError::Empty);
    }

    let mut ordered: Vec<String> = labels.into_iter().collect();
    if ordered.iter().all(|l| l.parse::<i64>().is_ok()) {
        ordered.sort_by_key(|l| l.parse::<i64>().expect("checked above"));
    }
    let index: BTreeMap<&str, usize> = ordered
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();

    let mut edges = Vec::new();
    for (u, v) in &arcs {
        let keep = opts.symmetrize || arcs.contains(&(v.clone(), u.clone()));
        if keep {
            edges.push((index[u.as_str()], index[v.as_str()]));
        }
    }
    let g = Graph::new_allow_disconnected(ordered.len(), &edges)?.with_labels(ordered)?;
    if g.is_connected() {
        Ok(g)
    } else if opts.largest_component {
        Ok(g.largest_component())
    } else {
        Err(GraphError::Disconnected {
            components: g.components().len(),
        })
    }
}
