//! Minimal-zone statistics over every graph (or tree) of a given order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::enumerate::{enumerate_connected_graphs, enumerate_trees, EnumerationError};
use crate::graph::{to_graph6, Graph};
use crate::shares::Electorate;
use crate::zone::{minimal_exclusion_zone, SearchLimits, ZoneError, ZoneReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusKind {
    Graphs,
    Trees,
}

impl FromStr for CensusKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "graphs" => Ok(CensusKind::Graphs),
            "trees" => Ok(CensusKind::Trees),
            _ => Err(format!("unknown census kind {s:?} (expected graphs or trees)")),
        }
    }
}

impl fmt::Display for CensusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CensusKind::Graphs => "graphs",
            CensusKind::Trees => "trees",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub n: usize,
    pub universe: usize,
    pub nontrivial: usize,
    pub two_node: usize,
}

impl CensusRow {
    pub const CSV_HEADER: &'static str = "n,universe,nontrivial,two_node";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{}",
            self.n, self.universe, self.nontrivial, self.two_node
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error("graph {graph6}: {source}")]
    Graph {
        graph6: String,
        #[source]
        source: ZoneError,
    },
}

/// A graph with its minimal-zone report.
#[derive(Debug, Clone)]
pub struct CensusEntry {
    pub graph: Graph,
    pub report: ZoneReport,
}

/// Full census of a collection: the summary row, how many graphs have a
/// minimal zone of each size, and the per-graph reports in input order.
#[derive(Debug, Clone)]
pub struct Census {
    pub row: CensusRow,
    pub zone_sizes: BTreeMap<usize, usize>,
    pub entries: Vec<CensusEntry>,
}

pub fn graphs_of(kind: CensusKind, n: usize) -> Result<Vec<Graph>, EnumerationError> {
    Ok(match kind {
        CensusKind::Graphs => enumerate_connected_graphs(n)?.collect(),
        CensusKind::Trees => enumerate_trees(n)?.collect(),
    })
}

/// Runs the exact minimal-zone search on every graph (in parallel) and
/// tallies the results. The row does not depend on the input order; `n` is
/// taken from the first graph (0 for an empty collection).
pub fn census_of(graphs: Vec<Graph>, limits: SearchLimits) -> Result<Census, CensusError> {
    let n = graphs.first().map_or(0, Graph::n);
    let entries = graphs
        .into_par_iter()
        .map(|graph| {
            let e = Electorate::new(graph.clone()).expect("enumerated graphs are connected");
            minimal_exclusion_zone(&e, limits)
                .map(|report| CensusEntry { graph, report })
                .map_err(|source| CensusError::Graph {
                    graph6: to_graph6(e.graph()),
                    source,
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut zone_sizes = BTreeMap::new();
    let mut row = CensusRow {
        n,
        universe: entries.len(),
        nontrivial: 0,
        two_node: 0,
    };
    for entry in &entries {
        let size = entry.report.zone.len();
        *zone_sizes.entry(size).or_insert(0) += 1;
        if size < entry.graph.n() {
            row.nontrivial += 1;
        }
        if size == 2 {
            row.two_node += 1;
        }
    }
    Ok(Census {
        row,
        zone_sizes,
        entries,
    })
}

pub fn zone_census(
    kind: CensusKind,
    n: usize,
    limits: SearchLimits,
) -> Result<CensusRow, CensusError> {
    Ok(census_of(graphs_of(kind, n)?, limits)?.row)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_rows() {
        let l = SearchLimits::default();
        assert_eq!(
            zone_census(CensusKind::Graphs, 3, l).unwrap(),
            CensusRow {
                n: 3,
                universe: 2,
                nontrivial: 0,
                two_node: 0
            }
        );
        assert_eq!(
            zone_census(CensusKind::Trees, 4, l).unwrap().to_csv(),
            "4,2,1,1"
        );
    }
}
