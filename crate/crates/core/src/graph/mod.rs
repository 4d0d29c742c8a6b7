//! Abstract GKM graphs: data model, validation and GKM levels.
//!
//! Raw input lives in [`GraphData`] (string ids, unchecked). A [`GkmGraph`]
//! is only built from data that passes [`validate_graph`]: no loops, nonzero
//! labels of the declared rank, constant valence and pairwise independent
//! labels at every vertex (GKM₂). Vertices and edges are stored sorted by id
//! (natural order), so every derived object is independent of input order.

mod connection;
mod faces;

pub use connection::{find_connection, Connection, ConnectionError, ConnectionKind};
pub use faces::{enumerate_faces, FaceError, TwoFace};

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::lattice::{canonicalize, rank_over_q, UnsignedWeight, WeightVector};

/// One edge of a raw graph description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeData {
    pub id: String,
    pub ends: [String; 2],
    pub label: WeightVector,
}

/// An unvalidated graph description, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphData {
    pub rank: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeData>,
}

/// Ways in which raw data fails to be an abstract GKM graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Violation {
    RankZero,
    DuplicateVertex { vertex: String },
    DuplicateEdge { edge: String },
    UnknownEndpoint { edge: String, vertex: String },
    LabelLength { edge: String, expected: usize, found: usize },
    Loop { edge: String },
    ZeroLabel { edge: String },
    UnequalValence { vertex: String, valence: usize, expected: usize },
    ProportionalLabels { vertex: String, edges: [String; 2] },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RankZero => write!(f, "rank must be positive"),
            Violation::DuplicateVertex { vertex } => write!(f, "duplicate vertex id {vertex}"),
            Violation::DuplicateEdge { edge } => write!(f, "duplicate edge id {edge}"),
            Violation::UnknownEndpoint { edge, vertex } => {
                write!(f, "edge {edge}: unknown endpoint {vertex}")
            }
            Violation::LabelLength { edge, expected, found } => {
                write!(f, "edge {edge}: label has length {found}, expected {expected}")
            }
            Violation::Loop { edge } => write!(f, "edge {edge}: loop"),
            Violation::ZeroLabel { edge } => write!(f, "edge {edge}: zero label"),
            Violation::UnequalValence { vertex, valence, expected } => {
                write!(f, "vertex {vertex}: valence {valence}, expected {expected}")
            }
            Violation::ProportionalLabels { vertex, edges } => write!(
                f,
                "vertex {vertex}: labels of edges {} and {} are proportional",
                edges[0], edges[1]
            ),
        }
    }
}

/// Conditions that do not make a graph invalid but matter downstream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Warning {
    /// Odd valence: no vertex star admits a perfect matching into pairs.
    OddValence { valence: usize },
    Disconnected { components: usize },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::OddValence { valence } => {
                write!(f, "valence {valence} is odd: no quaternionic pairing exists")
            }
            Warning::Disconnected { components } => {
                write!(f, "graph has {components} connected components")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
    pub valence: Option<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares ids so that embedded digit runs sort numerically (`e2 < e10`).
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(&cb) {
        let ord = match (x, y) {
            ((true, p), (true, q)) => {
                let (p, q) = (p.trim_start_matches('0'), q.trim_start_matches('0'));
                p.len().cmp(&q.len()).then_with(|| p.cmp(q))
            }
            ((_, p), (_, q)) => p.cmp(q),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

/// Checks every axiom of an abstract GKM graph and lists all violations.
pub fn validate_graph(data: &GraphData) -> ValidationReport {
    let mut violations = Vec::new();
    let mut warnings = Vec::new();
    if data.rank == 0 {
        violations.push(Violation::RankZero);
    }
    let mut seen = HashSet::new();
    for v in &data.vertices {
        if !seen.insert(v.as_str()) {
            violations.push(Violation::DuplicateVertex { vertex: v.clone() });
        }
    }
    let mut edge_ids = HashSet::new();
    let mut star: HashMap<&str, Vec<&EdgeData>> =
        data.vertices.iter().map(|v| (v.as_str(), Vec::new())).collect();
    for e in &data.edges {
        if !edge_ids.insert(e.id.as_str()) {
            violations.push(Violation::DuplicateEdge { edge: e.id.clone() });
        }
        let mut usable = true;
        for end in &e.ends {
            if !seen.contains(end.as_str()) {
                violations.push(Violation::UnknownEndpoint { edge: e.id.clone(), vertex: end.clone() });
                usable = false;
            }
        }
        if e.label.len() != data.rank {
            violations.push(Violation::LabelLength {
                edge: e.id.clone(),
                expected: data.rank,
                found: e.label.len(),
            });
            usable = false;
        } else if e.label.is_zero() {
            violations.push(Violation::ZeroLabel { edge: e.id.clone() });
            usable = false;
        }
        if e.ends[0] == e.ends[1] {
            violations.push(Violation::Loop { edge: e.id.clone() });
            usable = false;
        }
        if usable {
            for end in &e.ends {
                star.get_mut(end.as_str()).expect("endpoint checked").push(e);
            }
        }
    }

    let mut order: Vec<&String> = data.vertices.iter().collect();
    order.sort_by(|a, b| natural_cmp(a, b));
    order.dedup();
    let mut valence = None;
    if let Some(first) = order.first() {
        let expected = star[first.as_str()].len();
        valence = Some(expected);
        for v in &order {
            let n = star[v.as_str()].len();
            if n != expected {
                violations.push(Violation::UnequalValence {
                    vertex: (*v).clone(),
                    valence: n,
                    expected,
                });
            }
        }
        if expected % 2 == 1 {
            warnings.push(Warning::OddValence { valence: expected });
        }
    }
    for v in &order {
        let mut edges = star[v.as_str()].clone();
        edges.sort_by(|a, b| natural_cmp(&a.id, &b.id));
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                if edges[i].label.is_proportional_to(&edges[j].label) {
                    violations.push(Violation::ProportionalLabels {
                        vertex: (*v).clone(),
                        edges: [edges[i].id.clone(), edges[j].id.clone()],
                    });
                }
            }
        }
    }
    if violations.is_empty() {
        let components = count_components(data);
        if components > 1 {
            warnings.push(Warning::Disconnected { components });
        }
    }
    ValidationReport { violations, warnings, valence }
}

fn count_components(data: &GraphData) -> usize {
    let index: HashMap<&str, usize> =
        data.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let mut parent: Vec<usize> = (0..data.vertices.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for e in &data.edges {
        let (a, b) = (index[e.ends[0].as_str()], index[e.ends[1].as_str()]);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    (0..parent.len()).filter(|&x| find(&mut parent, x) == x).count()
}

/// Index of a vertex in a [`GkmGraph`].
pub type VertexIdx = usize;
/// Index of an (unoriented) edge in a [`GkmGraph`].
pub type EdgeIdx = usize;

/// An oriented edge: `2k` runs from `ends[0]` to `ends[1]` of edge `k`,
/// `2k + 1` the other way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Dart(pub usize);

impl Dart {
    pub fn new(edge: EdgeIdx, backwards: bool) -> Self {
        Dart(2 * edge + usize::from(backwards))
    }

    pub fn edge(self) -> EdgeIdx {
        self.0 / 2
    }

    pub fn reversed(self) -> Dart {
        Dart(self.0 ^ 1)
    }

    pub fn is_backwards(self) -> bool {
        self.0 & 1 == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    /// Endpoints with `ends[0] < ends[1]`.
    pub ends: [VertexIdx; 2],
    pub label: UnsignedWeight,
}

/// A validated abstract GKM graph (GKM₂, constant valence, no loops).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkmGraph {
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    star: Vec<Vec<Dart>>,
    position: Vec<usize>,
    valence: usize,
}

impl GkmGraph {
    pub fn from_data(data: &GraphData) -> Result<GkmGraph, ValidationReport> {
        let report = validate_graph(data);
        if !report.is_valid() {
            return Err(report);
        }
        let mut vertices = data.vertices.clone();
        vertices.sort_by(|a, b| natural_cmp(a, b));
        let index: HashMap<&str, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut raw: Vec<&EdgeData> = data.edges.iter().collect();
        raw.sort_by(|a, b| natural_cmp(&a.id, &b.id));
        let edges: Vec<Edge> = raw
            .into_iter()
            .map(|e| {
                let (a, b) = (index[e.ends[0].as_str()], index[e.ends[1].as_str()]);
                Edge {
                    id: e.id.clone(),
                    ends: [a.min(b), a.max(b)],
                    label: canonicalize(e.label.clone()).expect("validated nonzero"),
                }
            })
            .collect();
        let mut star = vec![Vec::new(); vertices.len()];
        for (k, e) in edges.iter().enumerate() {
            star[e.ends[0]].push(Dart::new(k, false));
            star[e.ends[1]].push(Dart::new(k, true));
        }
        let mut position = vec![0; 2 * edges.len()];
        for s in &star {
            for (i, d) in s.iter().enumerate() {
                position[d.0] = i;
            }
        }
        Ok(GkmGraph {
            rank: data.rank,
            valence: report.valence.unwrap_or(0),
            vertices,
            edges,
            star,
            position,
        })
    }

    /// The raw description of this graph (canonical order, canonical labels).
    pub fn to_data(&self) -> GraphData {
        GraphData {
            rank: self.rank,
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeData {
                    id: e.id.clone(),
                    ends: [self.vertices[e.ends[0]].clone(), self.vertices[e.ends[1]].clone()],
                    label: e.label.rep().clone(),
                })
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn valence(&self) -> usize {
        self.valence
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, v: VertexIdx) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<VertexIdx> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, k: EdgeIdx) -> &Edge {
        &self.edges[k]
    }

    pub fn edge_index(&self, id: &str) -> Option<EdgeIdx> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Oriented edges starting at `v`, in edge order.
    pub fn star(&self, v: VertexIdx) -> &[Dart] {
        &self.star[v]
    }

    /// Position of `d` within the star of its tail.
    pub fn position(&self, d: Dart) -> usize {
        self.position[d.0]
    }

    pub fn dart_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> {
        (0..self.dart_count()).map(Dart)
    }

    pub fn tail(&self, d: Dart) -> VertexIdx {
        self.edges[d.edge()].ends[usize::from(d.is_backwards())]
    }

    pub fn head(&self, d: Dart) -> VertexIdx {
        self.edges[d.edge()].ends[usize::from(!d.is_backwards())]
    }

    pub fn label(&self, d: Dart) -> &UnsignedWeight {
        &self.edges[d.edge()].label
    }

    /// The oriented edge of edge `k` leaving `v`, if `v` is an endpoint.
    pub fn dart_from(&self, k: EdgeIdx, v: VertexIdx) -> Option<Dart> {
        let e = &self.edges[k];
        if e.ends[0] == v {
            Some(Dart::new(k, false))
        } else if e.ends[1] == v {
            Some(Dart::new(k, true))
        } else {
            None
        }
    }

    /// Vertices adjacent to `v` (with multiplicity removed), sorted.
    pub fn neighbours(&self, v: VertexIdx) -> Vec<VertexIdx> {
        let mut out: Vec<VertexIdx> = self.star[v].iter().map(|&d| self.head(d)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Human-readable `u->v` rendering of an oriented edge.
    pub fn dart_name(&self, d: Dart) -> String {
        format!(
            "{}:{}->{}",
            self.edges[d.edge()].id,
            self.vertices[self.tail(d)],
            self.vertices[self.head(d)]
        )
    }

    /// Connected components, each a sorted vertex list; components ordered by
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexIdx>> {
        let mut comp = vec![usize::MAX; self.vertices.len()];
        let mut out = Vec::new();
        for s in 0..self.vertices.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = Vec::new();
            while let Some(v) = stack.pop() {
                members.push(v);
                for &d in &self.star[v] {
                    let w = self.head(d);
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

/// Outcome of a GKM_k test; on failure names a vertex and `k` edges whose
/// labels are linearly dependent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GkmLevelReport {
    pub k: usize,
    pub holds: bool,
    pub witness: Option<GkmWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GkmWitness {
    pub vertex: String,
    pub edges: Vec<String>,
}

/// Tests whether every `k` labels at every vertex are linearly independent.
/// Vacuous at vertices of valence below `k`.
pub fn check_gkm_level(g: &GkmGraph, k: usize) -> GkmLevelReport {
    assert!(k >= 2, "GKM level must be at least 2");
    for v in 0..g.vertex_count() {
        let star = g.star(v);
        if star.len() < k {
            continue;
        }
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            let labels: Vec<&WeightVector> = subset.iter().map(|&i| g.label(star[i]).rep()).collect();
            if rank_over_q(labels) < k {
                return GkmLevelReport {
                    k,
                    holds: false,
                    witness: Some(GkmWitness {
                        vertex: g.vertex_id(v).to_string(),
                        edges: subset.iter().map(|&i| g.edge(star[i].edge()).id.clone()).collect(),
                    }),
                };
            }
            if !next_subset(&mut subset, star.len()) {
                break;
            }
        }
    }
    GkmLevelReport { k, holds: true, witness: None }
}

/// Advances `subset` to the next `k`-subset of `0..n` in lexicographic order.
pub(crate) fn next_subset(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Largest `k` (at least 2) for which the graph is GKM_k, capped at the valence.
pub fn gkm_level(g: &GkmGraph) -> usize {
    let mut k = 2;
    while k < g.valence() && check_gkm_level(g, k + 1).holds {
        k += 1;
    }
    k
}

/// Groups edges by unordered endpoint pair: `(u, v) -> edge indices`.
pub fn parallel_classes(g: &GkmGraph) -> BTreeMap<(VertexIdx, VertexIdx), Vec<EdgeIdx>> {
    let mut out: BTreeMap<(VertexIdx, VertexIdx), Vec<EdgeIdx>> = BTreeMap::new();
    for (k, e) in g.edges().iter().enumerate() {
        out.entry((e.ends[0], e.ends[1])).or_default().push(k);
    }
    out
}
