//! Graph sources and node-label handling.

use std::path::{Path, PathBuf};

use clap::Args;
use irvzone::families::{build_family, FamilySpec};
use irvzone::graph::{parse_edge_list, parse_graph6, EdgeListOptions, Graph};
use irvzone::{Electorate, Node, NodeSet};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Graph file: graph6 (`.g6`) or edge list (`.edges`).
    #[arg(long, value_name = "FILE", required_unless_present = "family", conflicts_with = "family")]
    pub graph: Option<PathBuf>,
    /// Built-in family instead of a file, e.g. `path:6`, `bistar:3`,
    /// `binary-tree:2`, `cycle:5`, `complete:4`.
    #[arg(long, value_name = "SPEC")]
    pub family: Option<String>,
    /// Edge lists: keep only reciprocated pairs instead of symmetrizing.
    #[arg(long)]
    pub mutual: bool,
    /// Edge lists: keep the largest connected component.
    #[arg(long)]
    pub largest_component: bool,
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

impl GraphArgs {
    pub fn load(&self) -> Result<Graph, CliError> {
        if let Some(spec) = &self.family {
            let spec: FamilySpec = spec.parse()?;
            return Ok(build_family(spec)?);
        }
        let path = self.graph.as_ref().expect("clap requires a source");
        let text = read_file(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("g6") => {
                let line = text
                    .lines()
                    .map(str::trim)
                    .find(|l| !l.is_empty())
                    .ok_or_else(|| CliError::Input(format!("{} is empty", path.display())))?;
                Ok(parse_graph6(line)?)
            }
            Some("edges") => Ok(parse_edge_list(
                &text,
                EdgeListOptions {
                    symmetrize: !self.mutual,
                    largest_component: self.largest_component,
                },
            )?),
            _ => Err(CliError::Usage(format!(
                "cannot tell the format of {}: use a .g6 or .edges extension",
                path.display()
            ))),
        }
    }

    pub fn electorate(&self) -> Result<Electorate, CliError> {
        Ok(Electorate::new(self.load()?)?)
    }
}

/// Converts between node indices and the labels users see. Labels print as
/// JSON numbers when every label of the graph is an integer.
pub struct Labels<'a> {
    graph: &'a Graph,
    numeric: bool,
}

impl<'a> Labels<'a> {
    pub fn new(graph: &'a Graph) -> Self {
        let numeric = (0..graph.n()).all(|v| graph.label(v).parse::<i64>().is_ok());
        Labels { graph, numeric }
    }

    pub fn text(&self, v: Node) -> String {
        self.graph.label(v)
    }

    pub fn node(&self, v: Node) -> Value {
        let l = self.graph.label(v);
        if self.numeric {
            Value::from(l.parse::<i64>().expect("checked numeric"))
        } else {
            Value::from(l)
        }
    }

    pub fn set(&self, s: &NodeSet) -> Value {
        Value::Array(s.iter().map(|v| self.node(v)).collect())
    }

    pub fn set_text(&self, s: &NodeSet) -> String {
        format!("{{{}}}", s.iter().map(|v| self.text(v)).collect::<Vec<_>>().join(","))
    }

    pub fn resolve(&self, label: &str) -> Result<Node, CliError> {
        let label = label.trim();
        self.graph
            .node_by_label(label)
            .ok_or_else(|| CliError::Input(format!("no node labelled {label:?}")))
    }

    /// Parses a comma-separated label list.
    pub fn resolve_set(&self, list: &str) -> Result<NodeSet, CliError> {
        let set: NodeSet = list
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| self.resolve(t))
            .collect::<Result<_, _>>()?;
        if set.is_empty() {
            return Err(CliError::Input("the node list is empty".into()));
        }
        Ok(set)
    }
}
