//! JSON graph files.
//!
//! ```json
//! {"name": "E8", "vertices": [{"id": 0, "weight": -2}, ...], "edges": [[0, 1], ...]}
//! ```
//!
//! `name` is optional. Ids may be any distinct non-negative integers; they are
//! renumbered densely in increasing order when parsed.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, PlumbingGraph};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{path}: {message} (line {line}, column {column})")]
    Json {
        path: String,
        message: String,
        line: usize,
        column: usize,
    },
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<[u32; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: u32,
    pub weight: i64,
}

impl GraphFile {
    pub fn from_graph(g: &PlumbingGraph) -> Self {
        GraphFile {
            name: g.name().map(str::to_owned),
            vertices: g
                .weights()
                .iter()
                .enumerate()
                .map(|(id, &weight)| VertexEntry {
                    id: id as u32,
                    weight,
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|&(u, v)| [u as u32, v as u32])
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<PlumbingGraph, GraphError> {
        let vertices: Vec<(i64, i64)> = self
            .vertices
            .iter()
            .map(|v| (v.id as i64, v.weight))
            .collect();
        let edges: Vec<(i64, i64)> = self
            .edges
            .iter()
            .map(|e| (e[0] as i64, e[1] as i64))
            .collect();
        let g = PlumbingGraph::from_labeled(&vertices, &edges)?;
        Ok(match &self.name {
            Some(name) => g.with_name(name.clone()),
            None => g,
        })
    }
}

pub fn parse_graph(text: &str) -> Result<PlumbingGraph, ParseError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: GraphFile = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        ParseError::Json {
            path,
            message: inner.to_string(),
            line: inner.line(),
            column: inner.column(),
        }
    })?;
    Ok(file.to_graph()?)
}

/// Pretty-printed canonical form: vertices by id, edges `[lo, hi]` sorted.
pub fn to_json_pretty(g: &PlumbingGraph) -> String {
    let mut s = serde_json::to_string_pretty(&GraphFile::from_graph(g)).expect("graph serializes");
    s.push('\n');
    s
}

/// Compact canonical form, ignoring the name. Equal graphs give equal strings.
pub fn canonical_string(g: &PlumbingGraph) -> String {
    let mut file = GraphFile::from_graph(g);
    file.name = None;
    serde_json::to_string(&file).expect("graph serializes")
}
