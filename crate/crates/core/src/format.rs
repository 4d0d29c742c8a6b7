//! The graph file format (JSON).
//!
//! ```json
//! {
//!   "rank": 2,
//!   "vertices": ["v0", "v1"],
//!   "edges": [
//!     {"id": "a", "ends": ["v0", "v1"], "label": [1, -1]},
//!     {"id": "b", "ends": ["v0", "v1"], "label": [1, 1]}
//!   ],
//!   "quaternionic": {
//!     "weights": {"v0": [2, 0], "v1": [0, 2]},
//!     "pairs": {"v0": [["a", "b"]], "v1": [["a", "b"]]}
//!   }
//! }
//! ```
//!
//! Labels and weights may be given by either lift; `pairs` is optional and
//! inferred from the weights on GKM₃ graphs. Written files are canonical
//! (sorted ids, canonical representatives), so saving a loaded file is
//! byte-stable.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::QuaternionicInput;
use crate::graph::{check_gkm_level, EdgeData, GkmGraph, GraphData, ValidationReport};
use crate::lattice::WeightVector;
use crate::quaternionic::{weights_from_vectors, QuaternionicError, QuaternionicStructure};

/// Largest accepted absolute value of a coordinate; keeps all derived
/// short combinations of weights far inside `i64`.
pub const MAX_COORDINATE: i64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: String,
    pub ends: [String; 2],
    pub label: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuaternionicRecord {
    pub weights: BTreeMap<String, Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<BTreeMap<String, Vec<[String; 2]>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub rank: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quaternionic: Option<QuaternionicRecord>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("coordinate {value} at {field} exceeds the supported bound 2^31")]
    CoordinateTooLarge { field: String, value: i64 },
    #[error("invalid graph: {}", .0.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(ValidationReport),
    #[error("invalid quaternionic data at {field}: {message}")]
    Quaternionic { field: String, message: String },
}

impl LoadError {
    /// Exit code of the command-line contract: 2 for unreadable or
    /// malformed input, 1 for well-formed input that fails a check.
    pub fn exit_code(&self) -> i32 {
        match self {
            LoadError::Io(_) | LoadError::Parse { .. } => 2,
            _ => 1,
        }
    }
}

/// A validated graph with optional (unchecked) quaternionic data.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub graph: GkmGraph,
    pub quaternionic: Option<QuaternionicInput>,
}

impl Loaded {
    /// Builds the quaternionic structure: explicit pairs if given, otherwise
    /// pairs inferred from the weights (GKM₃ graphs only).
    pub fn structure(&self) -> Option<Result<QuaternionicStructure, QuaternionicError>> {
        let q = self.quaternionic.as_ref()?;
        let g = &self.graph;
        Some(weights_from_vectors(g, &q.weights).and_then(|w| match &q.pairs {
            Some(p) => QuaternionicStructure::new(g, w, p),
            None if check_gkm_level(g, 3).holds => QuaternionicStructure::infer(g, w),
            None => Err(QuaternionicError::NotAMatching {
                vertex: g.vertex_id(0).to_string(),
                reason: "graph is not GKM₃, pairs must be given explicitly".into(),
            }),
        }))
    }
}

pub fn parse_str(text: &str) -> Result<GraphFile, LoadError> {
    serde_json::from_str(text).map_err(|e| LoadError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn check_bound(field: String, v: &[i64]) -> Result<(), LoadError> {
    match v.iter().find(|x| x.unsigned_abs() > MAX_COORDINATE as u64) {
        Some(&value) => Err(LoadError::CoordinateTooLarge { field, value }),
        None => Ok(()),
    }
}

impl GraphFile {
    pub fn graph_data(&self) -> Result<GraphData, LoadError> {
        for e in &self.edges {
            check_bound(format!("edges[{}].label", e.id), &e.label)?;
        }
        Ok(GraphData {
            rank: self.rank,
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeData { id: e.id.clone(), ends: e.ends.clone(), label: WeightVector::new(e.label.clone()) })
                .collect(),
        })
    }

    /// Validates and resolves ids against the graph.
    pub fn load(&self) -> Result<Loaded, LoadError> {
        let graph = GkmGraph::from_data(&self.graph_data()?).map_err(LoadError::Validation)?;
        let quaternionic = match &self.quaternionic {
            None => None,
            Some(q) => Some(resolve(&graph, q)?),
        };
        Ok(Loaded { graph, quaternionic })
    }

    /// The canonical file of a graph and optional structure.
    pub fn from_graph(g: &GkmGraph, q: Option<&QuaternionicStructure>) -> GraphFile {
        let data = g.to_data();
        GraphFile {
            rank: data.rank,
            vertices: data.vertices,
            edges: data
                .edges
                .into_iter()
                .map(|e| EdgeRecord { id: e.id, ends: e.ends, label: e.label.coords().to_vec() })
                .collect(),
            quaternionic: q.map(|q| QuaternionicRecord {
                weights: (0..g.vertex_count())
                    .map(|v| (g.vertex_id(v).to_string(), q.weight(v).rep().coords().to_vec()))
                    .collect(),
                pairs: Some(
                    (0..g.vertex_count())
                        .map(|v| {
                            let ps = q
                                .pairs(g, v)
                                .into_iter()
                                .map(|(a, b)| [g.edge(a.edge()).id.clone(), g.edge(b.edge()).id.clone()])
                                .collect();
                            (g.vertex_id(v).to_string(), ps)
                        })
                        .collect(),
                ),
            }),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph files serialize");
        s.push('\n');
        s
    }
}

fn resolve(g: &GkmGraph, q: &QuaternionicRecord) -> Result<QuaternionicInput, LoadError> {
    let bad = |field: String, message: &str| LoadError::Quaternionic { field, message: message.to_string() };
    for (v, w) in &q.weights {
        if g.vertex_index(v).is_none() {
            return Err(bad(format!("weights.{v}"), "unknown vertex"));
        }
        check_bound(format!("weights.{v}"), w)?;
    }
    let mut weights = Vec::with_capacity(g.vertex_count());
    for v in g.vertex_ids() {
        match q.weights.get(v) {
            Some(w) => weights.push(WeightVector::new(w.clone())),
            None => return Err(bad(format!("weights.{v}"), "missing weight")),
        }
    }
    let pairs = match &q.pairs {
        None => None,
        Some(map) => {
            let mut per_vertex = vec![Vec::new(); g.vertex_count()];
            for (v, list) in map {
                let Some(vi) = g.vertex_index(v) else {
                    return Err(bad(format!("pairs.{v}"), "unknown vertex"));
                };
                for [a, b] in list {
                    let dart = |id: &str| g.edge_index(id).and_then(|k| g.dart_from(k, vi));
                    match (dart(a), dart(b)) {
                        (Some(x), Some(y)) => per_vertex[vi].push((x, y)),
                        _ => return Err(bad(format!("pairs.{v}"), "edge id unknown or not incident")),
                    }
                }
            }
            Some(per_vertex)
        }
    };
    Ok(QuaternionicInput { weights, pairs })
}

/// Parses and validates a document.
pub fn load_str(text: &str) -> Result<Loaded, LoadError> {
    parse_str(text)?.load()
}
