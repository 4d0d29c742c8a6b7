//! Recognition of the model graphs of `HP^n` and `Gr_2(C^n)`.
//!
//! A connected quaternionic GKM₃ graph whose quaternionic 2-faces are
//! biangles or noncomplex triangles and whose complex 2-faces are triangles
//! or quadrangles is one of the two models. The classifier checks these
//! hypotheses, reads the model parameters off a single vertex, regenerates
//! the model and accepts only an exact match.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::graph::{
    check_gkm_level, enumerate_faces, find_connection, Connection, Dart, GkmGraph, TwoFace, VertexIdx,
};
use crate::lattice::{UnsignedWeight, WeightVector};
use crate::models::{generate_gr2, generate_hpn, gr2_vertex, hpn_vertex, Gr2Params, HpnParams, Model};
use crate::quaternionic::{
    classify_face, lift_chart, verify_structure, weights_from_vectors, FaceClassification, FaceKind,
    QuaternionicStructure,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReasonCode {
    OddValence,
    Disconnected,
    NotGkm3,
    NoConnection,
    StructureInvalid,
    FaceShapeViolation,
    ReconstructionMismatch,
}

impl fmt::Display for ReasonCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Witness {
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "camelCase")]
pub enum ClassificationResult {
    #[serde(rename = "HPn", rename_all = "camelCase")]
    Hpn {
        n: usize,
        lambda: WeightVector,
        alpha: Vec<WeightVector>,
        vertex_map: BTreeMap<String, String>,
    },
    /// `alpha[0]` is `α_3`.
    #[serde(rename = "Gr2", rename_all = "camelCase")]
    Gr2 {
        n: usize,
        lambda: WeightVector,
        alpha: Vec<WeightVector>,
        vertex_map: BTreeMap<String, String>,
    },
    #[serde(rename_all = "camelCase")]
    NotClassified { reason: ReasonCode, witness: Witness },
}

impl ClassificationResult {
    pub fn is_classified(&self) -> bool {
        !matches!(self, ClassificationResult::NotClassified { .. })
    }

    pub fn reason(&self) -> Option<ReasonCode> {
        match self {
            ClassificationResult::NotClassified { reason, .. } => Some(*reason),
            _ => None,
        }
    }

    fn refuse(reason: ReasonCode, witness: Witness) -> Self {
        ClassificationResult::NotClassified { reason, witness }
    }
}

/// Quaternionic data as supplied by a user: weights in vertex order and
/// optionally explicit pairs (inferred otherwise).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternionicInput {
    pub weights: Vec<WeightVector>,
    pub pairs: Option<Vec<Vec<(Dart, Dart)>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HypothesisReport {
    pub gkm3: bool,
    pub faces: Vec<FaceClassification>,
    /// Index into `faces` of the first face of a forbidden shape.
    pub violation: Option<usize>,
}

impl HypothesisReport {
    pub fn passes(&self) -> bool {
        self.gkm3 && self.violation.is_none()
    }
}

fn allowed(kind: FaceKind) -> bool {
    matches!(
        kind,
        FaceKind::QuaternionicBiangle
            | FaceKind::NoncomplexTriangle
            | FaceKind::ComplexTriangle
            | FaceKind::ComplexQuadrangle { .. }
    )
}

/// GKM₃ plus the face-shape hypotheses.
pub fn check_hypotheses(
    g: &GkmGraph,
    q: &QuaternionicStructure,
    con: &Connection,
    faces: &[TwoFace],
) -> HypothesisReport {
    let gkm3 = check_gkm_level(g, 3).holds;
    let faces: Vec<FaceClassification> = faces.iter().map(|f| classify_face(f, g, q, con)).collect();
    let violation = faces.iter().position(|c| !allowed(c.kind));
    HypothesisReport { gkm3, faces, violation }
}

fn face_witness(g: &GkmGraph, face: &TwoFace, detail: String) -> Witness {
    Witness {
        vertices: face.vertices(g).iter().map(|&v| g.vertex_id(v).to_string()).collect(),
        edges: face.darts().iter().map(|d| g.edge(d.edge()).id.clone()).collect(),
        detail,
    }
}

fn detail(detail: impl Into<String>) -> Witness {
    Witness { detail: detail.into(), ..Witness::default() }
}

/// Builds the structure from user data and classifies.
pub fn classify_input(g: &GkmGraph, input: &QuaternionicInput) -> ClassificationResult {
    if let Some(r) = precheck(g) {
        return r;
    }
    let structure = weights_from_vectors(g, &input.weights).and_then(|w| match &input.pairs {
        Some(p) => QuaternionicStructure::new(g, w, p),
        None => QuaternionicStructure::infer(g, w),
    });
    match structure {
        Ok(q) => classify(g, &q),
        Err(e) => ClassificationResult::refuse(ReasonCode::StructureInvalid, detail(e.to_string())),
    }
}

fn precheck(g: &GkmGraph) -> Option<ClassificationResult> {
    if g.valence() % 2 == 1 {
        return Some(ClassificationResult::refuse(
            ReasonCode::OddValence,
            detail(format!("valence {} is odd", g.valence())),
        ));
    }
    let comps = g.components();
    if comps.len() > 1 {
        return Some(ClassificationResult::refuse(
            ReasonCode::Disconnected,
            Witness {
                vertices: comps.iter().map(|c| g.vertex_id(c[0]).to_string()).collect(),
                edges: Vec::new(),
                detail: format!("{} connected components", comps.len()),
            },
        ));
    }
    let gkm3 = check_gkm_level(g, 3);
    if let Some(w) = gkm3.witness {
        return Some(ClassificationResult::refuse(
            ReasonCode::NotGkm3,
            Witness { vertices: vec![w.vertex], edges: w.edges, detail: "three dependent labels".into() },
        ));
    }
    None
}

/// The full decision procedure on a graph with a quaternionic structure.
pub fn classify(g: &GkmGraph, q: &QuaternionicStructure) -> ClassificationResult {
    if let Some(r) = precheck(g) {
        return r;
    }
    let con = match find_connection(g) {
        Ok(c) => c,
        Err(e) => return ClassificationResult::refuse(ReasonCode::NoConnection, detail(e.to_string())),
    };
    let report = verify_structure(g, q, &con);
    if let Some(f) = report.first_failure() {
        return ClassificationResult::refuse(
            ReasonCode::StructureInvalid,
            Witness {
                vertices: vec![f.vertex.clone()],
                edges: f.edges.clone(),
                detail: f.message.clone(),
            },
        );
    }
    let faces = match enumerate_faces(g, &con) {
        Ok(f) => f,
        Err(e) => return ClassificationResult::refuse(ReasonCode::FaceShapeViolation, detail(e.to_string())),
    };
    let hyp = check_hypotheses(g, q, &con, &faces);
    if let Some(i) = hyp.violation {
        let c = &hyp.faces[i];
        let what = if c.quaternionic { "quaternionic face" } else { "complex face" };
        return ClassificationResult::refuse(
            ReasonCode::FaceShapeViolation,
            face_witness(g, &c.face, format!("{what} of forbidden shape: {}", c.kind)),
        );
    }
    let has_biangle = hyp.faces.iter().any(|c| c.kind == FaceKind::QuaternionicBiangle);
    let attempt = if has_biangle { reconstruct_hpn(g, q) } else { reconstruct_gr2(g, q) };
    match attempt {
        Ok(r) => r,
        Err(w) => ClassificationResult::refuse(ReasonCode::ReconstructionMismatch, w),
    }
}

fn reconstruct_hpn(g: &GkmGraph, q: &QuaternionicStructure) -> Result<ClassificationResult, Witness> {
    let v0 = 0;
    let chart = lift_chart(g, q, v0, 1).map_err(|e| detail(e.to_string()))?;
    let pairs = q.pairs(g, v0);
    let n = pairs.len();
    if g.vertex_count() != n + 1 {
        return Err(detail(format!("{} vertices, expected {} for HP^{n}", g.vertex_count(), n + 1)));
    }
    let mut vertex_map = BTreeMap::new();
    vertex_map.insert(g.vertex_id(v0).to_string(), hpn_vertex(0));
    let mut alpha = Vec::with_capacity(n);
    for (k, &(a, b)) in pairs.iter().enumerate() {
        if g.head(a) != g.head(b) {
            return Err(Witness {
                vertices: vec![g.vertex_id(v0).to_string()],
                edges: vec![g.edge(a.edge()).id.clone(), g.edge(b.edge()).id.clone()],
                detail: "pair at the base vertex is not a biangle".into(),
            });
        }
        let first = if a.edge() < b.edge() { a } else { b };
        alpha.push(chart.lift(g, first).clone());
        vertex_map.insert(g.vertex_id(g.head(a)).to_string(), hpn_vertex(k + 1));
    }
    let params = HpnParams { n, lambda: chart.lambda.clone(), alpha };
    let model = generate_hpn(&params).map_err(|e| detail(e.to_string()))?;
    match_model(g, q, &model, &vertex_map)?;
    Ok(ClassificationResult::Hpn { n, lambda: params.lambda, alpha: params.alpha, vertex_map })
}

fn reconstruct_gr2(g: &GkmGraph, q: &QuaternionicStructure) -> Result<ClassificationResult, Witness> {
    let n = g.valence() / 2 + 2;
    if g.vertex_count() != n * (n - 1) / 2 {
        return Err(detail(format!(
            "{} vertices, expected {} for Gr_2(C^{n})",
            g.vertex_count(),
            n * (n - 1) / 2
        )));
    }
    let v12 = 0;
    let chart = lift_chart(g, q, v12, 1).map_err(|e| detail(e.to_string()))?;
    let pairs = q.pairs(g, v12);
    // one[k], two[k]: the vertices playing v_1k and v_2k (k = 3..n at index k-3).
    let mut one = Vec::with_capacity(n - 2);
    let mut two = Vec::with_capacity(n - 2);
    let mut alpha = Vec::with_capacity(n - 2);
    for (i, &(a, b)) in pairs.iter().enumerate() {
        let (x, y) = (g.head(a), g.head(b));
        let to_one = if i == 0 {
            if a.edge() < b.edge() {
                a
            } else {
                b
            }
        } else {
            let v13 = one[0];
            let (ax, ay) = (g.neighbours(x).contains(&v13), g.neighbours(y).contains(&v13));
            match (ax, ay) {
                (true, false) => a,
                (false, true) => b,
                _ => {
                    return Err(Witness {
                        vertices: [v12, x, y].iter().map(|&v| g.vertex_id(v).to_string()).collect(),
                        edges: Vec::new(),
                        detail: "cannot tell v_1k from v_2k by adjacency to v_13".into(),
                    })
                }
            }
        };
        let to_two = if to_one == a { b } else { a };
        one.push(g.head(to_one));
        two.push(g.head(to_two));
        alpha.push(chart.lift(g, to_one).clone());
    }
    let mut vertex_map = BTreeMap::new();
    let mut claim = |v: VertexIdx, name: String| -> Result<(), Witness> {
        if vertex_map.insert(g.vertex_id(v).to_string(), name).is_some() {
            return Err(Witness {
                vertices: vec![g.vertex_id(v).to_string()],
                edges: Vec::new(),
                detail: "vertex assigned twice".into(),
            });
        }
        Ok(())
    };
    claim(v12, gr2_vertex(n, 1, 2))?;
    for k in 3..=n {
        claim(one[k - 3], gr2_vertex(n, 1, k))?;
        claim(two[k - 3], gr2_vertex(n, 2, k))?;
    }
    for k in 3..=n {
        for l in k + 1..=n {
            let corners = [one[k - 3], one[l - 3], two[k - 3], two[l - 3]];
            let sets: Vec<HashSet<VertexIdx>> =
                corners.iter().map(|&c| g.neighbours(c).into_iter().collect()).collect();
            let common: Vec<VertexIdx> = (0..g.vertex_count())
                .filter(|&v| v != v12 && sets.iter().all(|s| s.contains(&v)))
                .collect();
            let [vkl] = common.as_slice() else {
                return Err(Witness {
                    vertices: corners.iter().map(|&v| g.vertex_id(v).to_string()).collect(),
                    edges: Vec::new(),
                    detail: format!("{} candidates for v_{k}{l}", common.len()),
                });
            };
            claim(*vkl, gr2_vertex(n, k, l))?;
        }
    }
    let params = Gr2Params { n, lambda: chart.lambda.clone(), alpha };
    let model = generate_gr2(&params).map_err(|e| detail(e.to_string()))?;
    match_model(g, q, &model, &vertex_map)?;
    Ok(ClassificationResult::Gr2 { n, lambda: params.lambda, alpha: params.alpha, vertex_map })
}

/// Exact comparison of `g, q` with a generated model under `vertex_map`:
/// edges with multiplicities and labels, weights and pairs.
pub fn match_model(
    g: &GkmGraph,
    q: &QuaternionicStructure,
    model: &Model,
    vertex_map: &BTreeMap<String, String>,
) -> Result<(), Witness> {
    let h = &model.graph;
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() || g.rank() != h.rank() {
        return Err(detail("sizes differ from the model"));
    }
    let mut image = vec![usize::MAX; g.vertex_count()];
    let mut hit = vec![false; h.vertex_count()];
    for v in 0..g.vertex_count() {
        let target = vertex_map.get(g.vertex_id(v)).and_then(|t| h.vertex_index(t));
        let Some(t) = target else {
            return Err(Witness { vertices: vec![g.vertex_id(v).to_string()], ..detail("vertex not mapped") });
        };
        if std::mem::replace(&mut hit[t], true) {
            return Err(Witness { vertices: vec![g.vertex_id(v).to_string()], ..detail("map not injective") });
        }
        image[v] = t;
    }
    // Model edges by (endpoints, label); labels at a vertex are distinct.
    let key = |a: usize, b: usize, l: &UnsignedWeight| (a.min(b), a.max(b), l.clone());
    let model_edges: HashMap<(usize, usize, UnsignedWeight), usize> = h
        .edges()
        .iter()
        .enumerate()
        .map(|(k, e)| (key(e.ends[0], e.ends[1], &e.label), k))
        .collect();
    let mut edge_image = vec![usize::MAX; g.edge_count()];
    let mut used = vec![false; h.edge_count()];
    for (k, e) in g.edges().iter().enumerate() {
        let found = model_edges.get(&key(image[e.ends[0]], image[e.ends[1]], &e.label));
        match found {
            Some(&t) if !used[t] => {
                used[t] = true;
                edge_image[k] = t;
            }
            _ => {
                return Err(Witness {
                    vertices: e.ends.iter().map(|&v| g.vertex_id(v).to_string()).collect(),
                    edges: vec![e.id.clone()],
                    detail: format!("edge label {} has no counterpart in the model", e.label),
                })
            }
        }
    }
    for v in 0..g.vertex_count() {
        if q.weight(v) != model.structure.weight(image[v]) {
            return Err(Witness {
                vertices: vec![g.vertex_id(v).to_string()],
                edges: Vec::new(),
                detail: format!(
                    "weight {} differs from the model weight {}",
                    q.weight(v),
                    model.structure.weight(image[v])
                ),
            });
        }
        for &d in g.star(v) {
            let p = q.partner(d);
            let md = h.dart_from(edge_image[d.edge()], image[v]).expect("incident");
            let mp = h.dart_from(edge_image[p.edge()], image[v]).expect("incident");
            if model.structure.partner(md) != mp {
                return Err(Witness {
                    vertices: vec![g.vertex_id(v).to_string()],
                    edges: vec![g.edge(d.edge()).id.clone(), g.edge(p.edge()).id.clone()],
                    detail: "pair differs from the model".into(),
                });
            }
        }
    }
    Ok(())
}

/// Outcome of a lemma diagnostic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeReport {
    pub name: String,
    pub holds: bool,
    /// Number of faces the premise applied to.
    pub checked: usize,
    pub witness: Option<Witness>,
}

/// Every complex triangle with one edge in a quaternionic biangle has all
/// three edges in quaternionic biangles.
pub fn probe_biangle_propagation(g: &GkmGraph, faces: &[FaceClassification]) -> ProbeReport {
    let in_biangle: HashSet<usize> = faces
        .iter()
        .filter(|c| c.kind == FaceKind::QuaternionicBiangle)
        .flat_map(|c| c.face.darts().iter().map(|d| d.edge()))
        .collect();
    let mut checked = 0;
    for c in faces.iter().filter(|c| c.kind == FaceKind::ComplexTriangle) {
        let edges: Vec<usize> = c.face.darts().iter().map(|d| d.edge()).collect();
        if !edges.iter().any(|e| in_biangle.contains(e)) {
            continue;
        }
        checked += 1;
        if !edges.iter().all(|e| in_biangle.contains(e)) {
            return ProbeReport {
                name: "biangle propagation".into(),
                holds: false,
                checked,
                witness: Some(face_witness(g, &c.face, "triangle edge outside every biangle".into())),
            };
        }
    }
    ProbeReport { name: "biangle propagation".into(), holds: true, checked, witness: None }
}

/// If a complex quadrangle exists: its opposite labels agree, there is no
/// quaternionic biangle, and no edge joins opposite corners.
pub fn probe_quadrangle_rigidity(g: &GkmGraph, faces: &[FaceClassification]) -> ProbeReport {
    let name = "quadrangle rigidity".to_string();
    let quads: Vec<&FaceClassification> =
        faces.iter().filter(|c| matches!(c.kind, FaceKind::ComplexQuadrangle { .. })).collect();
    let fail = |face: &TwoFace, what: &str| ProbeReport {
        name: name.clone(),
        holds: false,
        checked: quads.len(),
        witness: Some(face_witness(g, face, what.to_string())),
    };
    if quads.is_empty() {
        return ProbeReport { name, holds: true, checked: 0, witness: None };
    }
    if let Some(b) = faces.iter().find(|c| c.kind == FaceKind::QuaternionicBiangle) {
        return fail(&b.face, "quaternionic biangle next to a complex quadrangle");
    }
    for c in &quads {
        if c.kind != (FaceKind::ComplexQuadrangle { opposite_equal: true }) {
            return fail(&c.face, "opposite edges carry different labels");
        }
        let vs = c.face.vertices(g);
        for (x, y) in [(vs[0], vs[2]), (vs[1], vs[3])] {
            if g.neighbours(x).contains(&y) {
                return fail(&c.face, "an edge joins opposite corners");
            }
        }
    }
    ProbeReport { name, holds: true, checked: quads.len(), witness: None }
}

/// Runs both lemma probes (face shapes computed from scratch).
pub fn run_probes(g: &GkmGraph, q: &QuaternionicStructure) -> Vec<ProbeReport> {
    let Ok(con) = find_connection(g) else { return Vec::new() };
    let Ok(faces) = enumerate_faces(g, &con) else { return Vec::new() };
    let classified: Vec<FaceClassification> = faces.iter().map(|f| classify_face(f, g, q, &con)).collect();
    vec![probe_biangle_propagation(g, &classified), probe_quadrangle_rigidity(g, &classified)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::*;

    #[test]
    fn models_round_trip() {
        for n in 1..=4 {
            let m = generate_hpn(&standard_hpn(n)).unwrap();
            let r = classify(&m.graph, &m.structure);
            assert!(matches!(r, ClassificationResult::Hpn { n: k, .. } if k == n), "{r:?}");
        }
        for n in 3..=5 {
            let m = generate_gr2(&standard_gr2(n)).unwrap();
            let r = classify(&m.graph, &m.structure);
            assert!(matches!(r, ClassificationResult::Gr2 { n: k, .. } if k == n), "{r:?}");
        }
    }

    #[test]
    fn kahler_triangle_is_refused() {
        let (l, a) = (WeightVector::new(vec![1, 0]), WeightVector::new(vec![0, 1]));
        let m = kahler_cp2_triangle(&l, &a).unwrap();
        assert_eq!(classify(&m.graph, &m.structure).reason(), Some(ReasonCode::FaceShapeViolation));
        let m = noncomplex_triangle(&l, &a).unwrap();
        assert!(matches!(classify(&m.graph, &m.structure), ClassificationResult::Gr2 { n: 3, .. }));
    }
}
