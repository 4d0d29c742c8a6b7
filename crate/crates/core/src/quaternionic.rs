//! Quaternionic structures on GKM graphs.
//!
//! A structure assigns to every vertex `v` a weight `λ(v) ∈ Z^m/±1` and
//! splits the star `E_v` into pairs `(e, f)` with `±α(e) ± α(f) = ±λ(v)`.
//! Choosing a lift of `λ(v)` fixes lifts of all labels at `v` (a
//! [`LiftChart`]); transport along edges relates the charts of neighbours.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{check_gkm_level, Connection, ConnectionKind, Dart, GkmGraph, TwoFace, VertexIdx};
use crate::lattice::{canonicalize, UnsignedWeight, WeightVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuaternionicError {
    #[error("expected {expected} quaternionic weights, found {found}")]
    WeightCount { expected: usize, found: usize },
    #[error("vertex {vertex}: quaternionic weight has the wrong length")]
    WeightLength { vertex: String },
    #[error("vertex {vertex}: quaternionic weight is zero")]
    ZeroWeight { vertex: String },
    #[error("valence {valence} is odd: edge stars have no perfect matching")]
    OddValence { valence: usize },
    #[error("vertex {vertex}: pairs do not form a perfect matching of the edge star ({reason})")]
    NotAMatching { vertex: String, reason: String },
    #[error("vertex {vertex}: edge {edge} has no admissible quaternionic partner")]
    NoPartner { vertex: String, edge: String },
    #[error("vertex {vertex}: edge {edge} has several admissible partners ({candidates:?})")]
    AmbiguousPartner { vertex: String, edge: String, candidates: Vec<String> },
    #[error("vertex {vertex}: no sign choice makes the pair ({}, {}) sum to the lifted weight", edges[0], edges[1])]
    InconsistentPair { vertex: String, edges: [String; 2] },
}

/// Weights `λ(v)` and the pairing of every edge star.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternionicStructure {
    weights: Vec<UnsignedWeight>,
    partner: Vec<Dart>,
}

/// Converts raw per-vertex weight vectors (in vertex order) to classes.
pub fn weights_from_vectors(
    g: &GkmGraph,
    ws: &[WeightVector],
) -> Result<Vec<UnsignedWeight>, QuaternionicError> {
    if ws.len() != g.vertex_count() {
        return Err(QuaternionicError::WeightCount { expected: g.vertex_count(), found: ws.len() });
    }
    ws.iter()
        .enumerate()
        .map(|(v, w)| {
            let vertex = g.vertex_id(v).to_string();
            if w.len() != g.rank() {
                return Err(QuaternionicError::WeightLength { vertex });
            }
            canonicalize(w.clone()).map_err(|_| QuaternionicError::ZeroWeight { vertex })
        })
        .collect()
}

impl QuaternionicStructure {
    /// A structure with explicitly given pairs.
    pub fn new(
        g: &GkmGraph,
        weights: Vec<UnsignedWeight>,
        pairs: &[Vec<(Dart, Dart)>],
    ) -> Result<Self, QuaternionicError> {
        check_weights(g, &weights)?;
        let mut partner = vec![Dart(usize::MAX); g.dart_count()];
        if pairs.len() != g.vertex_count() {
            return Err(QuaternionicError::WeightCount { expected: g.vertex_count(), found: pairs.len() });
        }
        for (v, list) in pairs.iter().enumerate() {
            let bad = |reason: &str| QuaternionicError::NotAMatching {
                vertex: g.vertex_id(v).to_string(),
                reason: reason.to_string(),
            };
            for &(a, b) in list {
                if a.0 >= g.dart_count() || b.0 >= g.dart_count() || g.tail(a) != v || g.tail(b) != v {
                    return Err(bad("pair uses an edge not at this vertex"));
                }
                if a == b {
                    return Err(bad("edge paired with itself"));
                }
                if partner[a.0].0 != usize::MAX || partner[b.0].0 != usize::MAX {
                    return Err(bad("edge used twice"));
                }
                partner[a.0] = b;
                partner[b.0] = a;
            }
            if g.star(v).iter().any(|d| partner[d.0].0 == usize::MAX) {
                return Err(bad("edge left unpaired"));
            }
        }
        Ok(QuaternionicStructure { weights, partner })
    }

    /// A structure whose pairs are inferred from the weights (GKM₃ inputs).
    pub fn infer(g: &GkmGraph, weights: Vec<UnsignedWeight>) -> Result<Self, QuaternionicError> {
        check_weights(g, &weights)?;
        let partner = infer_pairs(g, &weights)?;
        Ok(QuaternionicStructure { weights, partner })
    }

    pub fn weight(&self, v: VertexIdx) -> &UnsignedWeight {
        &self.weights[v]
    }

    pub fn weights(&self) -> &[UnsignedWeight] {
        &self.weights
    }

    pub fn partner(&self, d: Dart) -> Dart {
        self.partner[d.0]
    }

    pub fn is_pair(&self, a: Dart, b: Dart) -> bool {
        self.partner[a.0] == b
    }

    /// Pairs at `v` as `(a, b)` with `a < b`, sorted.
    pub fn pairs(&self, g: &GkmGraph, v: VertexIdx) -> Vec<(Dart, Dart)> {
        g.star(v)
            .iter()
            .filter(|&&a| a < self.partner[a.0])
            .map(|&a| (a, self.partner[a.0]))
            .collect()
    }

    /// A copy with the weight at `v` replaced (pairs unchanged).
    pub fn with_weight(&self, v: VertexIdx, w: UnsignedWeight) -> Self {
        let mut out = self.clone();
        out.weights[v] = w;
        out
    }
}

fn check_weights(g: &GkmGraph, weights: &[UnsignedWeight]) -> Result<(), QuaternionicError> {
    if g.valence() % 2 == 1 {
        return Err(QuaternionicError::OddValence { valence: g.valence() });
    }
    if weights.len() != g.vertex_count() {
        return Err(QuaternionicError::WeightCount { expected: g.vertex_count(), found: weights.len() });
    }
    for (v, w) in weights.iter().enumerate() {
        if w.len() != g.rank() {
            return Err(QuaternionicError::WeightLength { vertex: g.vertex_id(v).to_string() });
        }
    }
    Ok(())
}

/// True iff `±a ± b = ±λ` for some choice of signs.
pub fn pair_sum_holds(lambda: &UnsignedWeight, a: &UnsignedWeight, b: &UnsignedWeight) -> bool {
    let (a, b) = (a.rep(), b.rep());
    [a + b, a - b].iter().any(|s| lambda.is_lifted_by(s))
}

/// Edges at the tail of `e` that could be its quaternionic partner.
pub fn admissible_partners(g: &GkmGraph, weights: &[UnsignedWeight], e: Dart) -> Vec<Dart> {
    let v = g.tail(e);
    g.star(v)
        .iter()
        .copied()
        .filter(|&f| f != e && pair_sum_holds(&weights[v], g.label(e), g.label(f)))
        .collect()
}

/// Recovers the pairing from the weights: every edge must have exactly one
/// admissible partner. Returns the partner of every dart.
pub fn infer_pairs(g: &GkmGraph, weights: &[UnsignedWeight]) -> Result<Vec<Dart>, QuaternionicError> {
    let mut partner = vec![Dart(usize::MAX); g.dart_count()];
    for v in 0..g.vertex_count() {
        for &e in g.star(v) {
            let cands = admissible_partners(g, weights, e);
            let vertex = g.vertex_id(v).to_string();
            let edge = g.edge(e.edge()).id.clone();
            match cands.as_slice() {
                [] => return Err(QuaternionicError::NoPartner { vertex, edge }),
                [f] => partner[e.0] = *f,
                _ => {
                    return Err(QuaternionicError::AmbiguousPartner {
                        vertex,
                        edge,
                        candidates: cands.iter().map(|f| g.edge(f.edge()).id.clone()).collect(),
                    })
                }
            }
        }
    }
    Ok(partner)
}

/// Quaternionically compatible lifts at one vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftChart {
    pub vertex: VertexIdx,
    pub lambda: WeightVector,
    /// Lifts of the labels, aligned with the star of `vertex`.
    pub lifts: Vec<WeightVector>,
}

impl LiftChart {
    pub fn lift(&self, g: &GkmGraph, d: Dart) -> &WeightVector {
        debug_assert_eq!(g.tail(d), self.vertex);
        &self.lifts[g.position(d)]
    }

    pub fn negated(&self) -> LiftChart {
        LiftChart {
            vertex: self.vertex,
            lambda: -&self.lambda,
            lifts: self.lifts.iter().map(|w| -w).collect(),
        }
    }
}

/// The chart at `v` with `λ̃(v) = seed · rep(λ(v))`, `seed = ±1`.
pub fn lift_chart(
    g: &GkmGraph,
    q: &QuaternionicStructure,
    v: VertexIdx,
    seed: i64,
) -> Result<LiftChart, QuaternionicError> {
    assert!(seed == 1 || seed == -1, "seed must be a sign");
    lift_chart_from(g, q, v, q.weight(v).rep().scale(seed))
}

/// The chart at `v` for a given lift `lambda` of `λ(v)`.
pub fn lift_chart_from(
    g: &GkmGraph,
    q: &QuaternionicStructure,
    v: VertexIdx,
    lambda: WeightVector,
) -> Result<LiftChart, QuaternionicError> {
    debug_assert!(q.weight(v).is_lifted_by(&lambda));
    let star = g.star(v);
    let mut lifts = vec![WeightVector::zeros(0); star.len()];
    for (a, b) in q.pairs(g, v) {
        let (x, y) = (g.label(a).rep(), g.label(b).rep());
        let mut solutions = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
            .into_iter()
            .filter(|&(s, t)| x.scale(s).add_scaled(y, t) == lambda);
        match (solutions.next(), solutions.next()) {
            (Some((s, t)), None) => {
                lifts[g.position(a)] = x.scale(s);
                lifts[g.position(b)] = y.scale(t);
            }
            _ => {
                return Err(QuaternionicError::InconsistentPair {
                    vertex: g.vertex_id(v).to_string(),
                    edges: [g.edge(a.edge()).id.clone(), g.edge(b.edge()).id.clone()],
                })
            }
        }
    }
    Ok(LiftChart { vertex: v, lambda, lifts })
}

/// The lifts of `w` congruent to `base` modulo `a`.
fn congruent_lifts(w: &UnsignedWeight, base: &WeightVector, a: &WeightVector) -> Vec<WeightVector> {
    w.lifts()
        .into_iter()
        .filter(|l| l.add_scaled(base, -1).integer_multiple_of(a).is_some())
        .collect()
}

/// The unique lift of `w` congruent to `base` modulo `a`, if unique.
pub fn congruent_lift(w: &UnsignedWeight, base: &WeightVector, a: &WeightVector) -> Option<WeightVector> {
    let mut ls = congruent_lifts(w, base, a);
    (ls.len() == 1).then(|| ls.pop().expect("one element"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureFailure {
    pub vertex: String,
    pub edges: Vec<String>,
    pub message: String,
}

impl fmt::Display for StructureFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}", self.vertex)?;
        if !self.edges.is_empty() {
            write!(f, " (edges {})", self.edges.join(", "))?;
        }
        write!(f, ": {}", self.message)
    }
}

/// Cross-check of explicit pairs against the pairs forced by the weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "camelCase")]
pub enum InferenceCheck {
    Agrees,
    Disagrees { failure: StructureFailure },
    /// Not GKM₃: pairs are not determined by the weights, nothing to compare.
    Skipped,
}

/// Result of [`verify_structure`]: first failure per category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StructureReport {
    pub pair_sum: Option<StructureFailure>,
    pub pairs_respected: Option<StructureFailure>,
    pub transport: Option<StructureFailure>,
    pub inference: InferenceCheck,
    /// Only the computed connection is checked; for a non-unique connection
    /// another one might respect the structure.
    pub connection: ConnectionKind,
}

impl StructureReport {
    pub fn is_valid(&self) -> bool {
        self.pair_sum.is_none()
            && self.pairs_respected.is_none()
            && self.transport.is_none()
            && !matches!(self.inference, InferenceCheck::Disagrees { .. })
    }

    pub fn first_failure(&self) -> Option<&StructureFailure> {
        self.pair_sum
            .as_ref()
            .or(self.pairs_respected.as_ref())
            .or(self.transport.as_ref())
            .or(match &self.inference {
                InferenceCheck::Disagrees { failure } => Some(failure),
                _ => None,
            })
    }
}

fn failure(g: &GkmGraph, v: VertexIdx, darts: &[Dart], message: impl Into<String>) -> StructureFailure {
    StructureFailure {
        vertex: g.vertex_id(v).to_string(),
        edges: darts.iter().map(|d| g.edge(d.edge()).id.clone()).collect(),
        message: message.into(),
    }
}

/// Checks the axioms of a quaternionic structure against a connection:
/// (a) pair sums, (b) `∇` maps pairs to pairs, (c) transport of lift charts
/// along every oriented edge, plus agreement with inferred pairs on GKM₃
/// graphs.
pub fn verify_structure(g: &GkmGraph, q: &QuaternionicStructure, con: &Connection) -> StructureReport {
    let mut pair_sum = None;
    'outer: for v in 0..g.vertex_count() {
        for (a, b) in q.pairs(g, v) {
            if !pair_sum_holds(q.weight(v), g.label(a), g.label(b)) {
                pair_sum = Some(failure(g, v, &[a, b], format!("labels do not sum to ±{}", q.weight(v).rep())));
                break 'outer;
            }
        }
    }

    let mut pairs_respected = None;
    'outer: for e in g.darts() {
        for &f in g.star(g.tail(e)) {
            let lhs = q.partner(con.apply(g, e, f));
            let rhs = con.apply(g, e, q.partner(f));
            if lhs != rhs {
                pairs_respected = Some(failure(
                    g,
                    g.tail(e),
                    &[e, f],
                    format!("transport along {} does not map pairs to pairs", g.dart_name(e)),
                ));
                break 'outer;
            }
        }
    }

    let transport = if pair_sum.is_none() { check_transport(g, q, con) } else { None };

    let inference = if check_gkm_level(g, 3).holds {
        match infer_pairs(g, q.weights()) {
            Ok(p) => match g.darts().find(|d| p[d.0] != q.partner(*d)) {
                None => InferenceCheck::Agrees,
                Some(d) => InferenceCheck::Disagrees {
                    failure: failure(g, g.tail(d), &[d], "explicit partner differs from the inferred one"),
                },
            },
            Err(err) => InferenceCheck::Disagrees {
                failure: StructureFailure { vertex: String::new(), edges: Vec::new(), message: err.to_string() },
            },
        }
    } else {
        InferenceCheck::Skipped
    };

    StructureReport { pair_sum, pairs_respected, transport, inference, connection: con.kind() }
}

fn check_transport(g: &GkmGraph, q: &QuaternionicStructure, con: &Connection) -> Option<StructureFailure> {
    let mut charts = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() {
        match lift_chart(g, q, v, 1) {
            Ok(c) => charts.push(c),
            Err(e) => return Some(failure(g, v, &[], e.to_string())),
        }
    }
    for e in g.darts() {
        let (v, w) = (g.tail(e), g.head(e));
        let chart = &charts[v];
        let a = chart.lift(g, e);
        let mu = match congruent_lifts(q.weight(w), &chart.lambda, a).as_slice() {
            [mu] => mu.clone(),
            [] => {
                return Some(failure(
                    g,
                    v,
                    &[e],
                    format!("no lift of λ({}) is congruent to {} mod {}", g.vertex_id(w), chart.lambda, a),
                ))
            }
            _ => {
                return Some(failure(
                    g,
                    v,
                    &[e],
                    format!("both lifts of λ({}) are congruent mod {}", g.vertex_id(w), a),
                ))
            }
        };
        let there = match lift_chart_from(g, q, w, mu.clone()) {
            Ok(c) => c,
            Err(err) => return Some(failure(g, w, &[e], err.to_string())),
        };
        if *there.lift(g, e.reversed()) != -a {
            return Some(failure(
                g,
                w,
                &[e],
                format!(
                    "transported weight {} is not compatible with {} on the reversed edge",
                    mu,
                    -a
                ),
            ));
        }
        for &f in g.star(v) {
            if f == e {
                continue;
            }
            let h = con.apply(g, e, f);
            let Some(beta) = congruent_lift(g.label(h), chart.lift(g, f), a) else {
                return Some(failure(g, v, &[e, f], "transported label has no unique congruent lift"));
            };
            if *there.lift(g, h) != beta {
                return Some(failure(
                    g,
                    w,
                    &[e, h],
                    format!("transported lift {beta} is not compatible with the transported weight {mu}"),
                ));
            }
        }
    }
    None
}

/// Shape of a 2-face relative to a quaternionic structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum FaceKind {
    QuaternionicBiangle,
    /// Quaternionic triangle whose third label is `λ` (transport constant 0).
    NoncomplexTriangle,
    /// Quaternionic triangle whose third label is `λ − 2α` (constant −2).
    ComplexTriangleFace,
    OtherQuaternionic { length: usize },
    ComplexTriangle,
    ComplexQuadrangle { opposite_equal: bool },
    OtherComplex { length: usize },
}

impl fmt::Display for FaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceKind::QuaternionicBiangle => write!(f, "quaternionic biangle"),
            FaceKind::NoncomplexTriangle => write!(f, "noncomplex triangle"),
            FaceKind::ComplexTriangleFace => write!(f, "quaternionic triangle of complex type"),
            FaceKind::OtherQuaternionic { length } => write!(f, "quaternionic {length}-gon"),
            FaceKind::ComplexTriangle => write!(f, "complex triangle"),
            FaceKind::ComplexQuadrangle { opposite_equal: true } => {
                write!(f, "complex quadrangle (opposite labels equal)")
            }
            FaceKind::ComplexQuadrangle { opposite_equal: false } => {
                write!(f, "complex quadrangle (opposite labels differ)")
            }
            FaceKind::OtherComplex { length } => write!(f, "complex {length}-gon"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FaceClassification {
    pub face: TwoFace,
    pub kind: FaceKind,
    pub quaternionic: bool,
    /// For quaternionic triangles: `c` with third label `λ̃ + c·α̃`.
    pub triangle_constant: Option<i64>,
}

/// True iff opposite edges of a quadrangle carry equal unsigned labels.
pub fn quadrangle_opposite_equal(g: &GkmGraph, face: &TwoFace) -> bool {
    let d = face.darts();
    d.len() == 4 && g.label(d[0]) == g.label(d[2]) && g.label(d[1]) == g.label(d[3])
}

/// Decides quaternionic vs complex and the shape of a face.
pub fn classify_face(
    face: &TwoFace,
    g: &GkmGraph,
    q: &QuaternionicStructure,
    _con: &Connection,
) -> FaceClassification {
    let l = face.len();
    let quaternionic = (0..l).all(|i| {
        let (a, b) = face.corner(i);
        q.is_pair(a, b)
    });
    let mut triangle_constant = None;
    let kind = if quaternionic {
        match l {
            2 => FaceKind::QuaternionicBiangle,
            3 => {
                triangle_constant = triangle_constant_at(face, g, q);
                match triangle_constant {
                    Some(0) => FaceKind::NoncomplexTriangle,
                    Some(-2) => FaceKind::ComplexTriangleFace,
                    _ => FaceKind::OtherQuaternionic { length: 3 },
                }
            }
            _ => FaceKind::OtherQuaternionic { length: l },
        }
    } else {
        match l {
            3 => FaceKind::ComplexTriangle,
            4 => FaceKind::ComplexQuadrangle { opposite_equal: quadrangle_opposite_equal(g, face) },
            _ => FaceKind::OtherComplex { length: l },
        }
    };
    FaceClassification { face: face.clone(), kind, quaternionic, triangle_constant }
}

/// At `v = i(g1)` with chart lifts `α̃(g1) = α` and `α̃(ḡ3) = λ̃ − α`, the lift
/// of `α(g2)` congruent to `λ̃ − α` modulo `α` is `λ̃ + c·α`; returns `c`.
fn triangle_constant_at(face: &TwoFace, g: &GkmGraph, q: &QuaternionicStructure) -> Option<i64> {
    let d = face.darts();
    let chart = lift_chart(g, q, g.tail(d[0]), 1).ok()?;
    let alpha = chart.lift(g, d[0]);
    let rest = chart.lift(g, d[2].reversed());
    let beta = congruent_lift(g.label(d[1]), rest, alpha)?;
    beta.add_scaled(&chart.lambda, -1).integer_multiple_of(alpha)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignError {
    #[error("a biangle admits no signed structure")]
    Biangle,
    #[error("the face is quaternionic, not complex")]
    QuaternionicFace,
    #[error(transparent)]
    Chart(#[from] QuaternionicError),
    #[error("transport along {edge} failed: {message}")]
    Transport { edge: String, message: String },
    #[error("lifts do not close up at {vertex}: {message}")]
    ClosureFailure { vertex: String, message: String },
}

/// Lifts `α̃(e_i)` of the labels of a complex face with `α̃(ē) = −α̃(e)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SignedFaceStructure {
    pub face: TwoFace,
    /// `α̃(e_i)` for the face darts in order.
    pub lifts: Vec<WeightVector>,
    /// The transported lift of `λ(v_i)`, `v_i = i(e_i)`.
    pub lambdas: Vec<WeightVector>,
    /// `c_i` with `α̃(e_{i+1}) = −α̃(e_{i−1}) + c_i·α̃(e_i)` for `i = 2..ℓ`.
    pub propagation: Vec<i64>,
    /// The same coefficient for `i = 1`, which closes the cycle.
    pub closure: i64,
}

impl SignedFaceStructure {
    /// The lift of a face dart or of its reverse.
    pub fn lift_of(&self, d: Dart) -> Option<WeightVector> {
        let darts = self.face.darts();
        if let Some(i) = darts.iter().position(|&x| x == d) {
            return Some(self.lifts[i].clone());
        }
        darts.iter().position(|&x| x == d.reversed()).map(|i| -&self.lifts[i])
    }
}

/// Signs the labels of a complex face: seed a chart at the first vertex,
/// carry `λ̃` along the face by congruence and read each next lift from the
/// chart there; on return the lifts must close up.
pub fn sign_face(
    face: &TwoFace,
    g: &GkmGraph,
    q: &QuaternionicStructure,
    _con: &Connection,
) -> Result<SignedFaceStructure, SignError> {
    let l = face.len();
    if l == 2 {
        return Err(SignError::Biangle);
    }
    if (0..l).any(|i| {
        let (a, b) = face.corner(i);
        q.is_pair(a, b)
    }) {
        return Err(SignError::QuaternionicFace);
    }
    let d = face.darts();
    let v1 = g.tail(d[0]);
    let first = lift_chart(g, q, v1, 1)?;
    let mut lifts = vec![first.lift(g, d[0]).clone()];
    let mut lambdas = vec![first.lambda.clone()];
    let mut chart = first.clone();
    for i in 0..l {
        let s = lifts[i].clone();
        let w = g.head(d[i]);
        let Some(mu) = congruent_lift(q.weight(w), &chart.lambda, &s) else {
            return Err(SignError::Transport {
                edge: g.dart_name(d[i]),
                message: format!("no unique lift of λ({}) congruent to {}", g.vertex_id(w), chart.lambda),
            });
        };
        if i + 1 == l {
            if mu != first.lambda {
                return Err(SignError::ClosureFailure {
                    vertex: g.vertex_id(v1).to_string(),
                    message: format!("transported weight {mu} differs from the seed {}", first.lambda),
                });
            }
            if *first.lift(g, d[i].reversed()) != -&s {
                return Err(SignError::ClosureFailure {
                    vertex: g.vertex_id(v1).to_string(),
                    message: format!("last edge returns with lift {}", -first.lift(g, d[i].reversed())),
                });
            }
            break;
        }
        let next = lift_chart_from(g, q, w, mu.clone())?;
        if *next.lift(g, d[i].reversed()) != -&s {
            return Err(SignError::Transport {
                edge: g.dart_name(d[i]),
                message: "reversed edge is not lifted to the negative".into(),
            });
        }
        lifts.push(next.lift(g, d[i + 1]).clone());
        lambdas.push(mu);
        chart = next;
    }
    let coefficient = |i: usize| -> Result<i64, SignError> {
        let (prev, cur, next) = (&lifts[(i + l - 1) % l], &lifts[i], &lifts[(i + 1) % l]);
        (next + prev).integer_multiple_of(cur).ok_or_else(|| SignError::Transport {
            edge: g.dart_name(d[i]),
            message: format!("{next} is not congruent to {} modulo {cur}", -prev),
        })
    };
    let propagation = (1..l).map(coefficient).collect::<Result<Vec<_>, _>>()?;
    let closure = coefficient(0)?;
    Ok(SignedFaceStructure { face: face.clone(), lifts, lambdas, propagation, closure })
}
