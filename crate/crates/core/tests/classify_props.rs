mod common;

use std::collections::{BTreeMap, HashMap};

use proptest::prelude::*;
use rand::Rng;

use common::{random_gr2, random_hpn, random_vector, rng, wv};
use quatgkm::classify::{
    classify, classify_input, probe_biangle_propagation, probe_quadrangle_rigidity, run_probes,
    ClassificationResult, QuaternionicInput, ReasonCode,
};
use quatgkm::graph::{enumerate_faces, find_connection, GkmGraph};
use quatgkm::lattice::UnsignedWeight;
use quatgkm::models::{
    generate_gr2, generate_hpn, hirzebruch_quadrangle, kahler_cp2_triangle, noncomplex_triangle, Gr2Params,
    HpnParams, Model,
};
use quatgkm::quaternionic::{quadrangle_opposite_equal, FaceClassification, FaceKind};

/// Edges as a multiset of (mapped endpoints, label), plus mapped weights.
fn signature(
    g: &GkmGraph,
    weights: &[UnsignedWeight],
    map: &dyn Fn(&str) -> String,
) -> (Vec<(String, String, UnsignedWeight)>, BTreeMap<String, UnsignedWeight>) {
    let mut edges: Vec<_> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (map(g.vertex_id(e.ends[0])), map(g.vertex_id(e.ends[1])));
            (a.clone().min(b.clone()), a.max(b), e.label.clone())
        })
        .collect();
    edges.sort();
    let ws = (0..g.vertex_count()).map(|v| (map(g.vertex_id(v)), weights[v].clone())).collect();
    (edges, ws)
}

/// Checks the result reproduces the input under its vertex map, independently
/// of the classifier's own model matching.
fn assert_identifies(m: &Model, result: &ClassificationResult, lambda: &quatgkm::lattice::WeightVector) {
    let (regen, out_lambda, map) = match result {
        ClassificationResult::Hpn { n, lambda, alpha, vertex_map } => (
            generate_hpn(&HpnParams { n: *n, lambda: lambda.clone(), alpha: alpha.clone() }).unwrap(),
            lambda,
            vertex_map,
        ),
        ClassificationResult::Gr2 { n, lambda, alpha, vertex_map } => (
            generate_gr2(&Gr2Params { n: *n, lambda: lambda.clone(), alpha: alpha.clone() }).unwrap(),
            lambda,
            vertex_map,
        ),
        other => panic!("not classified: {other:?}"),
    };
    assert!(out_lambda == lambda || out_lambda == &-lambda, "lambda {out_lambda} vs {lambda}");
    let mut targets: Vec<&String> = map.values().collect();
    targets.sort();
    targets.dedup();
    assert_eq!(targets.len(), m.graph.vertex_count(), "vertex map is not a bijection");
    let mapped = signature(&m.graph, m.structure.weights(), &|v| map[v].clone());
    let model = signature(&regen.graph, regen.structure.weights(), &|v| v.to_string());
    assert_eq!(mapped, model);
}

fn input_of(m: &Model) -> QuaternionicInput {
    QuaternionicInput { weights: m.weight_lifts.clone(), pairs: None }
}

#[test]
fn random_models_are_identified() {
    let mut r = rng(1);
    for n in 1..=6 {
        for _ in 0..6 {
            let m_rank = r.random_range(n + 1..=n + 2);
            let (p, m) = random_hpn(&mut r, n, m_rank);
            let res = classify_input(&m.graph, &input_of(&m));
            assert!(matches!(res, ClassificationResult::Hpn { n: k, .. } if k == n), "{p:?}: {res:?}");
            assert_identifies(&m, &res, &p.lambda);
        }
    }
    for n in 3..=7 {
        for _ in 0..4 {
            let (p, m) = random_gr2(&mut r, n, n - 1 + usize::from(n == 3));
            let res = classify_input(&m.graph, &input_of(&m));
            assert!(matches!(res, ClassificationResult::Gr2 { n: k, .. } if k == n), "{p:?}: {res:?}");
            assert_identifies(&m, &res, &p.lambda);
        }
    }
}

#[test]
fn triangle_dichotomy() {
    let (l, a) = (wv(&[1, 0]), wv(&[0, 1]));
    let k = kahler_cp2_triangle(&l, &a).unwrap();
    assert_eq!(classify(&k.graph, &k.structure).reason(), Some(ReasonCode::FaceShapeViolation));
    let q = noncomplex_triangle(&l, &a).unwrap();
    let res = classify(&q.graph, &q.structure);
    assert!(matches!(res, ClassificationResult::Gr2 { n: 3, .. }), "{res:?}");
}

#[test]
fn precheck_reasons() {
    let mut r = rng(4);
    let a = random_hpn(&mut r, 1, 3).1;
    let b = random_hpn(&mut r, 1, 3).1;
    let u = common::disjoint_union(&a.graph, &b.graph);
    let weights = [a.weight_lifts.clone(), b.weight_lifts.clone()].concat();
    let res = classify_input(&u, &QuaternionicInput { weights, pairs: None });
    assert_eq!(res.reason(), Some(ReasonCode::Disconnected));

    // HP2 in rank 2 is not GKM3.
    let p = HpnParams { n: 2, lambda: wv(&[2, 0]), alpha: vec![wv(&[1, -1]), wv(&[1, 1])] };
    if let Ok(m) = generate_hpn(&p) {
        let res = classify_input(&m.graph, &input_of(&m));
        assert_eq!(res.reason(), Some(ReasonCode::NotGkm3));
    }
}

/// Replaces one edge label (or one weight) by a random vector.
fn mutate(m: &Model, seed: u64) -> Option<(GkmGraph, QuaternionicInput)> {
    let mut r = rng(seed);
    let mut data = m.graph.to_data();
    let mut weights = m.weight_lifts.clone();
    let rank = m.graph.rank();
    if r.random_bool(0.5) {
        let k = r.random_range(0..data.edges.len());
        let w = random_vector(&mut r, rank, 7);
        if !w.is_zero() && UnsignedWeight::new(w.clone()).ok()? == m.graph.edge(k).label {
            return None;
        }
        data.edges[k].label = w;
    } else {
        let v = r.random_range(0..weights.len());
        let w = random_vector(&mut r, rank, 7);
        if w == weights[v] || w == -&weights[v] {
            return None;
        }
        weights[v] = w;
    }
    let g = GkmGraph::from_data(&data).ok()?;
    let pairs = (0..g.vertex_count()).map(|v| m.structure.pairs(&m.graph, v)).collect();
    Some((g, QuaternionicInput { weights, pairs: Some(pairs) }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn mutations_are_never_classified(seed in any::<u64>(), n in 1usize..=4, hp in any::<bool>()) {
        let mut r = rng(seed ^ 0xa5a5);
        let m = if hp { random_hpn(&mut r, n, n + 1).1 } else { random_gr2(&mut r, n + 2, n + 1).1 };
        if let Some((g, input)) = mutate(&m, seed) {
            let res = classify_input(&g, &input);
            prop_assert!(!res.is_classified(), "{res:?}");
            prop_assert_ne!(res.reason(), Some(ReasonCode::ReconstructionMismatch));
        }
    }
}

#[test]
fn probes_hold_on_models() {
    let mut r = rng(8);
    for n in 1..=4 {
        let m = random_hpn(&mut r, n, n + 1).1;
        assert!(run_probes(&m.graph, &m.structure).iter().all(|p| p.holds));
    }
    for n in 3..=6 {
        let m = random_gr2(&mut r, n, n).1;
        assert!(run_probes(&m.graph, &m.structure).iter().all(|p| p.holds));
    }
}

fn quadrangle_faces(g: &GkmGraph) -> Vec<FaceClassification> {
    let con = find_connection(g).unwrap();
    enumerate_faces(g, &con)
        .unwrap()
        .into_iter()
        .map(|face| {
            let opposite_equal = quadrangle_opposite_equal(g, &face);
            FaceClassification {
                face,
                kind: FaceKind::ComplexQuadrangle { opposite_equal },
                quaternionic: false,
                triangle_constant: None,
            }
        })
        .collect()
}

#[test]
fn hirzebruch_quadrangles_are_rigid_only_when_untwisted() {
    let (a, b) = (wv(&[1, 0]), wv(&[0, 1]));
    for d in -2..=2 {
        let g = hirzebruch_quadrangle(&a, &b, d).unwrap();
        let faces = quadrangle_faces(&g);
        assert_eq!(faces.len(), 1);
        let probe = probe_quadrangle_rigidity(&g, &faces);
        assert_eq!(probe.holds, d == 0, "d = {d}");
        assert!(probe_biangle_propagation(&g, &faces).holds);
    }
}

#[test]
fn explicit_pairs_are_cross_checked() {
    let mut r = rng(2);
    let m = random_hpn(&mut r, 2, 3).1;
    // Pairs that mix the two biangles at every vertex violate the pair sums.
    let pairs: Vec<_> = (0..m.graph.vertex_count())
        .map(|v| {
            let s = m.graph.star(v);
            vec![(s[0], s[2]), (s[1], s[3])]
        })
        .collect();
    let res = classify_input(&m.graph, &QuaternionicInput { weights: m.weight_lifts.clone(), pairs: Some(pairs) });
    assert!(!res.is_classified());
    let same: HashMap<_, _> = (0..m.graph.vertex_count()).map(|v| (v, m.structure.pairs(&m.graph, v))).collect();
    let pairs = (0..m.graph.vertex_count()).map(|v| same[&v].clone()).collect();
    let res = classify_input(&m.graph, &QuaternionicInput { weights: m.weight_lifts.clone(), pairs: Some(pairs) });
    assert!(res.is_classified());
}
