//! Model graphs: `HP^n` and `Gr_2(C^n)` with their quaternionic structures,
//! plus small standalone faces.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{natural_cmp, EdgeData, GkmGraph, GraphData, Violation};
use crate::lattice::{canonicalize, WeightVector};
use crate::quaternionic::{QuaternionicError, QuaternionicStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("degenerate parameters: {reason}")]
    DegenerateParams { vertex: Option<String>, edges: Vec<String>, reason: String },
    #[error("n = {n} is out of range (need n >= {min})")]
    OutOfRange { n: usize, min: usize },
    #[error("expected {expected} alpha vectors, found {found}")]
    AlphaCount { expected: usize, found: usize },
    #[error("parameter vectors have different lengths")]
    LengthMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ModelKind {
    Hpn,
    Gr2,
}

/// Parameters of `HP^n`: `λ` and `α_1..α_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HpnParams {
    pub n: usize,
    pub lambda: WeightVector,
    pub alpha: Vec<WeightVector>,
}

/// Parameters of `Gr_2(C^n)`: `λ` and `α_3..α_n` (`alpha[0]` is `α_3`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gr2Params {
    pub n: usize,
    pub lambda: WeightVector,
    pub alpha: Vec<WeightVector>,
}

impl Gr2Params {
    /// `α_k` for `3 <= k <= n`.
    pub fn alpha_k(&self, k: usize) -> &WeightVector {
        &self.alpha[k - 3]
    }
}

/// A generated graph with its quaternionic structure.
#[derive(Debug, Clone)]
pub struct Model {
    pub graph: GkmGraph,
    pub structure: QuaternionicStructure,
    /// Raw quaternionic weights in vertex order of `graph` (signed as generated).
    pub weight_lifts: Vec<WeightVector>,
}

/// Standard torus parameters: `HP^n` in rank `n+1` with `λ = 2e_0`,
/// `α_k = e_0 − e_k`.
pub fn standard_hpn(n: usize) -> HpnParams {
    let m = n + 1;
    HpnParams {
        n,
        lambda: WeightVector::unit(m, 0).scale(2),
        alpha: (1..=n).map(|k| &WeightVector::unit(m, 0) - &WeightVector::unit(m, k)).collect(),
    }
}

/// Standard torus parameters: `Gr_2(C^n)` in rank `n` with `λ = e_1 − e_2`,
/// `α_k = e_k − e_2` (coordinates indexed from 1).
pub fn standard_gr2(n: usize) -> Gr2Params {
    let e = |i: usize| WeightVector::unit(n, i - 1);
    Gr2Params { n, lambda: &e(1) - &e(2), alpha: (3..=n).map(|k| &e(k) - &e(2)).collect() }
}

pub fn hpn_vertex(k: usize) -> String {
    format!("v{k}")
}

/// `v{i}{j}`, with an underscore separator once indices reach two digits.
pub fn gr2_vertex(n: usize, i: usize, j: usize) -> String {
    if n >= 10 {
        format!("v{i}_{j}")
    } else {
        format!("v{i}{j}")
    }
}

fn check_lengths(lambda: &WeightVector, alpha: &[WeightVector]) -> Result<(), ModelError> {
    if lambda.is_empty() || alpha.iter().any(|a| a.len() != lambda.len()) {
        return Err(ModelError::LengthMismatch);
    }
    Ok(())
}

fn build(
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<EdgeData>,
    weights: Vec<(String, WeightVector)>,
    pairs: Vec<(String, [String; 2])>,
) -> Result<Model, ModelError> {
    let data = GraphData { rank, vertices, edges };
    let graph = GkmGraph::from_data(&data).map_err(|report| {
        let v = report.violations.into_iter().next().expect("invalid report has a violation");
        match &v {
            Violation::ProportionalLabels { vertex, edges } => ModelError::DegenerateParams {
                vertex: Some(vertex.clone()),
                edges: edges.to_vec(),
                reason: v.to_string(),
            },
            Violation::ZeroLabel { edge } => ModelError::DegenerateParams {
                vertex: None,
                edges: vec![edge.clone()],
                reason: v.to_string(),
            },
            _ => ModelError::DegenerateParams { vertex: None, edges: Vec::new(), reason: v.to_string() },
        }
    })?;
    let mut weight_lifts = vec![WeightVector::zeros(0); graph.vertex_count()];
    for (v, w) in weights {
        weight_lifts[graph.vertex_index(&v).expect("generated vertex")] = w;
    }
    let mut classes = Vec::with_capacity(weight_lifts.len());
    for (v, w) in weight_lifts.iter().enumerate() {
        classes.push(canonicalize(w.clone()).map_err(|_| ModelError::DegenerateParams {
            vertex: Some(graph.vertex_id(v).to_string()),
            edges: Vec::new(),
            reason: "quaternionic weight is zero".into(),
        })?);
    }
    let mut per_vertex = vec![Vec::new(); graph.vertex_count()];
    for (v, [a, b]) in pairs {
        let vi = graph.vertex_index(&v).expect("generated vertex");
        let da = graph.dart_from(graph.edge_index(&a).expect("generated edge"), vi).expect("incident");
        let db = graph.dart_from(graph.edge_index(&b).expect("generated edge"), vi).expect("incident");
        per_vertex[vi].push((da, db));
    }
    let structure = QuaternionicStructure::new(&graph, classes, &per_vertex).map_err(|e: QuaternionicError| {
        ModelError::DegenerateParams { vertex: None, edges: Vec::new(), reason: e.to_string() }
    })?;
    Ok(Model { graph, structure, weight_lifts })
}

/// `HP^n`: vertices `v0..vn`, a biangle `{α_k, λ−α_k}` between `v0` and `v_k`,
/// a biangle `{α_k−α_l, λ−α_k−α_l}` between `v_k` and `v_l`; weights `λ` at
/// `v0` and `λ−2α_k` at `v_k`; pairs are the biangles.
pub fn generate_hpn(p: &HpnParams) -> Result<Model, ModelError> {
    if p.n < 1 {
        return Err(ModelError::OutOfRange { n: p.n, min: 1 });
    }
    if p.alpha.len() != p.n {
        return Err(ModelError::AlphaCount { expected: p.n, found: p.alpha.len() });
    }
    check_lengths(&p.lambda, &p.alpha)?;
    let n = p.n;
    let lam = &p.lambda;
    let vertices: Vec<String> = (0..=n).map(hpn_vertex).collect();
    let mut edges = Vec::new();
    let mut pairs = Vec::new();
    let mut biangle = |i: usize, j: usize, a: WeightVector, b: WeightVector| {
        let (vi, vj) = (hpn_vertex(i), hpn_vertex(j));
        let (ia, ib) = (format!("{vi}-{vj}a"), format!("{vi}-{vj}b"));
        edges.push(EdgeData { id: ia.clone(), ends: [vi.clone(), vj.clone()], label: a });
        edges.push(EdgeData { id: ib.clone(), ends: [vi.clone(), vj.clone()], label: b });
        pairs.push((vi, [ia.clone(), ib.clone()]));
        pairs.push((vj, [ia, ib]));
    };
    for k in 1..=n {
        let a = &p.alpha[k - 1];
        biangle(0, k, a.clone(), lam - a);
    }
    for k in 1..=n {
        for l in k + 1..=n {
            let (a, b) = (&p.alpha[k - 1], &p.alpha[l - 1]);
            biangle(k, l, a - b, &(lam - a) - b);
        }
    }
    let mut weights = vec![(hpn_vertex(0), lam.clone())];
    for k in 1..=n {
        weights.push((hpn_vertex(k), lam.add_scaled(&p.alpha[k - 1], -2)));
    }
    build(lam.len(), vertices, edges, weights, pairs)
}

/// `Gr_2(C^n)`: vertices `v_ij` (`i < j`), an edge between index sets
/// sharing exactly one index. With `t_1 = λ`, `t_2 = 0`, `t_k = α_k`, the
/// edge `v_ij — v_ik` is labelled `t_j − t_k` and `v_ij` carries the weight
/// `t_i − t_j`; the pairs at `v_ij` are `{v_ij—v_ix, v_ij—v_jx}`.
pub fn generate_gr2(p: &Gr2Params) -> Result<Model, ModelError> {
    if p.n < 3 {
        return Err(ModelError::OutOfRange { n: p.n, min: 3 });
    }
    if p.alpha.len() != p.n - 2 {
        return Err(ModelError::AlphaCount { expected: p.n - 2, found: p.alpha.len() });
    }
    check_lengths(&p.lambda, &p.alpha)?;
    let n = p.n;
    let m = p.lambda.len();
    let t = |k: usize| -> WeightVector {
        match k {
            1 => p.lambda.clone(),
            2 => WeightVector::zeros(m),
            _ => p.alpha_k(k).clone(),
        }
    };
    let name = |i: usize, j: usize| gr2_vertex(n, i.min(j), i.max(j));
    let mut sets = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            sets.push((i, j));
        }
    }
    let edge_id = |a: &str, b: &str| {
        if natural_cmp(a, b).is_lt() {
            format!("{a}-{b}")
        } else {
            format!("{b}-{a}")
        }
    };
    let mut edges = Vec::new();
    for (x, &(i, j)) in sets.iter().enumerate() {
        for &(k, l) in &sets[x + 1..] {
            let shared: Vec<usize> = [i, j].into_iter().filter(|s| *s == k || *s == l).collect();
            if shared.len() != 1 {
                continue;
            }
            let s = shared[0];
            let a = if i == s { j } else { i };
            let b = if k == s { l } else { k };
            let (u, v) = (name(i, j), name(k, l));
            edges.push(EdgeData { id: edge_id(&u, &v), label: &t(a) - &t(b), ends: [u, v] });
        }
    }
    let mut weights = Vec::new();
    let mut pairs = Vec::new();
    for &(i, j) in &sets {
        let v = name(i, j);
        weights.push((v.clone(), &t(i) - &t(j)));
        for x in (1..=n).filter(|&x| x != i && x != j) {
            pairs.push((v.clone(), [edge_id(&v, &name(i, x)), edge_id(&v, &name(j, x))]));
        }
    }
    let vertices = sets.iter().map(|&(i, j)| name(i, j)).collect();
    build(m, vertices, edges, weights, pairs)
}

/// A single quaternionic triangle with labels `α`, `λ−α` at the top vertex;
/// the third label is `λ` (noncomplex) or `λ − 2α` (Kähler `CP^2`).
fn triangle(lambda: &WeightVector, alpha: &WeightVector, kahler: bool) -> Result<Model, ModelError> {
    check_lengths(lambda, std::slice::from_ref(alpha))?;
    let vs = ["v", "x", "y"].map(String::from);
    let third = if kahler { lambda.add_scaled(alpha, -2) } else { lambda.clone() };
    let edges = vec![
        EdgeData { id: "vx".into(), ends: [vs[0].clone(), vs[1].clone()], label: alpha.clone() },
        EdgeData { id: "vy".into(), ends: [vs[0].clone(), vs[2].clone()], label: lambda - alpha },
        EdgeData { id: "xy".into(), ends: [vs[1].clone(), vs[2].clone()], label: third },
    ];
    let weights = if kahler {
        vec![
            (vs[0].clone(), lambda.clone()),
            (vs[1].clone(), lambda.add_scaled(alpha, -3)),
            (vs[2].clone(), alpha.scale(3).add_scaled(lambda, -2)),
        ]
    } else {
        vec![(vs[0].clone(), lambda.clone()), (vs[1].clone(), lambda - alpha), (vs[2].clone(), alpha.clone())]
    };
    let pairs = vec![
        (vs[0].clone(), ["vx".to_string(), "vy".to_string()]),
        (vs[1].clone(), ["vx".to_string(), "xy".to_string()]),
        (vs[2].clone(), ["vy".to_string(), "xy".to_string()]),
    ];
    build(lambda.len(), vs.to_vec(), edges, weights, pairs)
}

/// The quaternion-Kähler `CP^2` triangle: labels `α, λ−α, λ`, weights `λ, λ−α, α`.
pub fn noncomplex_triangle(lambda: &WeightVector, alpha: &WeightVector) -> Result<Model, ModelError> {
    triangle(lambda, alpha, false)
}

/// The Kähler `CP^2` triangle: labels `α, λ−α, λ−2α`, weights `λ, λ−3α, 3α−2λ`.
pub fn kahler_cp2_triangle(lambda: &WeightVector, alpha: &WeightVector) -> Result<Model, ModelError> {
    triangle(lambda, alpha, true)
}

/// A 4-cycle with Hirzebruch-surface labels `α, β, −α−dβ, −β` (bare graph).
pub fn hirzebruch_quadrangle(alpha: &WeightVector, beta: &WeightVector, d: i64) -> Result<GkmGraph, ModelError> {
    check_lengths(alpha, std::slice::from_ref(beta))?;
    let vs: Vec<String> = (1..=4).map(|i| format!("p{i}")).collect();
    let labels = [alpha.clone(), beta.clone(), (-alpha).add_scaled(beta, -d), -beta];
    let edges = (0..4)
        .map(|i| EdgeData {
            id: format!("q{}", i + 1),
            ends: [vs[i].clone(), vs[(i + 1) % 4].clone()],
            label: labels[i].clone(),
        })
        .collect();
    GkmGraph::from_data(&GraphData { rank: alpha.len(), vertices: vs, edges }).map_err(|r| {
        ModelError::DegenerateParams { vertex: None, edges: Vec::new(), reason: r.violations[0].to_string() }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::check_gkm_level;

    #[test]
    fn standard_parameters() {
        let p = standard_hpn(1);
        assert_eq!(p.lambda, WeightVector::new(vec![2, 0]));
        assert_eq!(p.alpha, vec![WeightVector::new(vec![1, -1])]);
        let p = standard_gr2(3);
        assert_eq!(p.lambda, WeightVector::new(vec![1, -1, 0]));
        assert_eq!(p.alpha, vec![WeightVector::new(vec![0, -1, 1])]);
        let p = standard_gr2(4);
        assert_eq!(p.lambda, WeightVector::new(vec![1, -1, 0, 0]));
        assert_eq!(p.alpha_k(4), &WeightVector::new(vec![0, -1, 0, 1]));
    }

    #[test]
    fn hp1_biangle() {
        let m = generate_hpn(&standard_hpn(1)).unwrap();
        assert_eq!(m.graph.vertex_count(), 2);
        assert_eq!(m.structure.weight(1).rep(), &WeightVector::new(vec![0, 2]));
    }

    #[test]
    fn degenerate_hpn() {
        let p = HpnParams {
            n: 2,
            lambda: WeightVector::new(vec![2, 0, 0]),
            alpha: vec![WeightVector::new(vec![1, -1, 0]); 2],
        };
        assert!(matches!(generate_hpn(&p), Err(ModelError::DegenerateParams { .. })));
    }

    #[test]
    fn gr2_sizes() {
        for n in 3..=7 {
            let m = generate_gr2(&standard_gr2(n)).unwrap();
            assert_eq!(m.graph.vertex_count(), n * (n - 1) / 2);
            assert_eq!(m.graph.valence(), 2 * n - 4);
            assert!(check_gkm_level(&m.graph, 3).holds);
        }
        let oct = generate_gr2(&standard_gr2(4)).unwrap();
        let (v12, v34) = (oct.graph.vertex_index("v12").unwrap(), oct.graph.vertex_index("v34").unwrap());
        assert!(!oct.graph.neighbours(v12).contains(&v34));
    }

    #[test]
    fn degenerate_gr2() {
        let mut p = standard_gr2(4);
        p.alpha[1] = p.alpha[0].clone();
        assert!(matches!(generate_gr2(&p), Err(ModelError::DegenerateParams { .. })));
    }

    #[test]
    fn gr2_vertex_names() {
        assert_eq!(gr2_vertex(5, 1, 2), "v12");
        assert_eq!(gr2_vertex(10, 3, 10), "v3_10");
    }
}
