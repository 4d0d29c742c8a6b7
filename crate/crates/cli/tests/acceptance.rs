//! Acceptance criteria, run in sequence so that each one is timed alone.
//! Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use quatgkm::classify::{classify, classify_input, ClassificationResult, QuaternionicInput, ReasonCode};
use quatgkm::cohomology::betti_numbers;
use quatgkm::format::{load_str, GraphFile};
use quatgkm::graph::{check_gkm_level, enumerate_faces, find_connection, Dart, GkmGraph};
use quatgkm::lattice::{UnsignedWeight, WeightVector};
use quatgkm::linalg::RankMethod;
use quatgkm::models::{
    generate_gr2, generate_hpn, kahler_cp2_triangle, noncomplex_triangle, standard_gr2, standard_hpn, Gr2Params,
    HpnParams, Model,
};
use quatgkm::quaternionic::{classify_face, sign_face, FaceKind, SignError};

const MODEL_LIMIT: Duration = Duration::from_secs(1);
const ROUND_TRIP_LIMIT: Duration = Duration::from_secs(60);
const RANDOM_SETS: usize = 50;
const TRIANGLE_LIMIT: Duration = Duration::from_secs(1);
const MUTATION_LIMIT: Duration = Duration::from_secs(120);
const MUTATIONS: usize = 1000;
const CENSUS_LIMIT: Duration = Duration::from_secs(1);
const EXACT_LIMIT: Duration = Duration::from_secs(600);
const MODULAR_LIMIT: Duration = Duration::from_secs(30);
const SIGN_LIMIT: Duration = Duration::from_secs(120);
const CONNECTION_LIMIT: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn wv(c: &[i64]) -> WeightVector {
    WeightVector::new(c.to_vec())
}

fn same_up_to_sign(a: &WeightVector, b: &WeightVector) -> bool {
    a == b || a == &-b
}

// ---------------------------------------------------------------------------
// Random parameters

fn random_vector(r: &mut ChaCha8Rng, m: usize) -> WeightVector {
    WeightVector::new((0..m).map(|_| r.random_range(-5..=5)).collect())
}

fn gkm3(m: &Model) -> bool {
    check_gkm_level(&m.graph, 3).holds
}

fn random_hpn(r: &mut ChaCha8Rng, n: usize) -> (HpnParams, Model) {
    let m = r.random_range(n + 1..=n + 2);
    for _ in 0..10_000 {
        let p = HpnParams { n, lambda: random_vector(r, m), alpha: (0..n).map(|_| random_vector(r, m)).collect() };
        if let Ok(model) = generate_hpn(&p) {
            if gkm3(&model) {
                return (p, model);
            }
        }
    }
    panic!("no valid HP{n} parameters in rank {m}");
}

fn random_gr2(r: &mut ChaCha8Rng, n: usize) -> (Gr2Params, Model) {
    let m = r.random_range((n - 1).max(3)..=n);
    for _ in 0..10_000 {
        let p = Gr2Params { n, lambda: random_vector(r, m), alpha: (3..=n).map(|_| random_vector(r, m)).collect() };
        if let Ok(model) = generate_gr2(&p) {
            if gkm3(&model) {
                return (p, model);
            }
        }
    }
    panic!("no valid Gr2(C{n}) parameters in rank {m}");
}

/// Standard and random models of the round-trip range, with their parameters.
enum Params {
    Hpn(HpnParams),
    Gr2(Gr2Params),
}

fn model_corpus() -> Vec<(String, Params, Model)> {
    let mut r = ChaCha8Rng::seed_from_u64(0xacce97);
    let mut out = Vec::new();
    for n in 1..=6 {
        let p = standard_hpn(n);
        out.push((format!("HP{n} standard"), Params::Hpn(p.clone()), generate_hpn(&p).unwrap()));
        for i in 0..RANDOM_SETS {
            let (p, m) = random_hpn(&mut r, n);
            out.push((format!("HP{n} random #{i}"), Params::Hpn(p), m));
        }
    }
    for n in 3..=7 {
        let p = standard_gr2(n);
        out.push((format!("Gr2(C{n}) standard"), Params::Gr2(p.clone()), generate_gr2(&p).unwrap()));
        for i in 0..RANDOM_SETS {
            let (p, m) = random_gr2(&mut r, n);
            out.push((format!("Gr2(C{n}) random #{i}"), Params::Gr2(p), m));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Independent oracles

/// `y = ±x + c·a` for some sign and integer `c`.
fn congruent(x: &[i64], y: &[i64], a: &[i64]) -> bool {
    [1i64, -1].iter().any(|&s| {
        let d: Vec<i64> = y.iter().zip(x).map(|(y, x)| y - s * x).collect();
        let Some(i) = a.iter().position(|&v| v != 0) else { return false };
        if d[i] % a[i] != 0 {
            return false;
        }
        let c = d[i] / a[i];
        d.iter().zip(a).all(|(d, a)| *d == c * a)
    })
}

fn count_bijections(ok: &[Vec<bool>], i: usize, used: &mut Vec<bool>) -> u128 {
    if i == ok.len() {
        return 1;
    }
    let mut total = 0;
    for j in 0..used.len() {
        if ok[i][j] && !used[j] {
            used[j] = true;
            total += count_bijections(ok, i + 1, used);
            used[j] = false;
        }
    }
    total
}

/// Compatible connections by brute force over every bijection of every edge.
fn count_connections(g: &GkmGraph) -> u128 {
    let mut total = 1;
    for k in 0..g.edge_count() {
        let e = Dart::new(k, false);
        let from: Vec<Dart> = g.star(g.tail(e)).iter().copied().filter(|&d| d != e).collect();
        let to: Vec<Dart> = g.star(g.head(e)).iter().copied().filter(|&d| d != e.reversed()).collect();
        let a = g.label(e).rep().coords();
        let ok: Vec<Vec<bool>> = from
            .iter()
            .map(|f| to.iter().map(|h| congruent(g.label(*f).rep().coords(), g.label(*h).rep().coords(), a)).collect())
            .collect();
        total *= count_bijections(&ok, 0, &mut vec![false; to.len()]);
    }
    total
}

/// Edge multiset (mapped endpoints, label) and mapped weights.
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

/// The result must name the right model, and regenerating it from the
/// reported parameters must reproduce the input under the vertex map.
fn identifies(m: &Model, expected: &Params, res: &ClassificationResult) -> Result<(), String> {
    let (regen, lambda, map) = match (expected, res) {
        (Params::Hpn(p), ClassificationResult::Hpn { n, lambda, alpha, vertex_map }) if *n == p.n => (
            generate_hpn(&HpnParams { n: *n, lambda: lambda.clone(), alpha: alpha.clone() }),
            (lambda, &p.lambda),
            vertex_map,
        ),
        (Params::Gr2(p), ClassificationResult::Gr2 { n, lambda, alpha, vertex_map }) if *n == p.n => (
            generate_gr2(&Gr2Params { n: *n, lambda: lambda.clone(), alpha: alpha.clone() }),
            (lambda, &p.lambda),
            vertex_map,
        ),
        _ => return Err(format!("wrong result {res:?}")),
    };
    let regen = regen.map_err(|e| format!("reported parameters do not generate: {e}"))?;
    ensure!(same_up_to_sign(lambda.0, lambda.1), "lambda {} vs {}", lambda.0, lambda.1);
    let targets: BTreeSet<&String> = map.values().collect();
    ensure!(targets.len() == m.graph.vertex_count(), "vertex map is not a bijection");
    let mapped = signature(&m.graph, m.structure.weights(), &|v| map[v].clone());
    let model = signature(&regen.graph, regen.structure.weights(), &|v| v.to_string());
    ensure!(mapped == model, "regenerated model differs");
    Ok(())
}

// ---------------------------------------------------------------------------
// Criteria

fn generate_cli(model: &str, n: usize) -> Result<Value, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_quatgkm"))
        .args(["generate", model, "--n", &n.to_string(), "--standard"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(o.status.success(), "generate {model} exited with {:?}", o.status.code());
    serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())
}

fn as_vector(v: &Value) -> WeightVector {
    WeightVector::new(v.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect())
}

/// Labels between each unordered vertex pair, and the weights.
fn read_figure(doc: &Value) -> (BTreeMap<(String, String), Vec<WeightVector>>, BTreeMap<String, WeightVector>) {
    let mut adj: BTreeMap<(String, String), Vec<WeightVector>> = BTreeMap::new();
    for e in doc["edges"].as_array().unwrap() {
        let (a, b) = (e["ends"][0].as_str().unwrap().to_string(), e["ends"][1].as_str().unwrap().to_string());
        adj.entry((a.clone().min(b.clone()), a.max(b))).or_default().push(as_vector(&e["label"]));
    }
    let weights =
        doc["quaternionic"]["weights"].as_object().unwrap().iter().map(|(k, v)| (k.clone(), as_vector(v))).collect();
    (adj, weights)
}

fn labels_match(found: &[WeightVector], expected: &[WeightVector]) -> bool {
    found.len() == expected.len()
        && expected.iter().all(|x| found.iter().filter(|y| same_up_to_sign(x, y)).count() == 1)
}

fn criterion_1() -> Outcome {
    // HP²: α_0 = 0; the biangle v_i v_j carries α_i − α_j and λ − α_i − α_j,
    // and the weight at v_k is λ − 2α_k.
    let p = standard_hpn(2);
    let alpha = |k: usize| if k == 0 { WeightVector::zeros(3) } else { p.alpha[k - 1].clone() };
    let (adj, weights) = read_figure(&generate_cli("hpn", 2)?);
    ensure!(adj.len() == 3 && weights.len() == 3, "HP2 has {} vertex pairs, {} weights", adj.len(), weights.len());
    for i in 0..3 {
        for j in i + 1..3 {
            let key = (format!("v{i}"), format!("v{j}"));
            let expected = [&alpha(i) - &alpha(j), &(&p.lambda - &alpha(i)) - &alpha(j)];
            let found = adj.get(&key).ok_or(format!("{key:?} not adjacent"))?;
            ensure!(labels_match(found, &expected), "HP2 {key:?}: {found:?}");
        }
        let w = &weights[&format!("v{i}")];
        ensure!(same_up_to_sign(w, &p.lambda.add_scaled(&alpha(i), -2)), "HP2 weight at v{i}: {w}");
    }

    // Gr2(C⁴): α_1 = λ, α_2 = 0; v_ij — v_il carries α_j − α_l, and the
    // weight at v_ij is α_i − α_j.
    let p = standard_gr2(4);
    let alpha = |k: usize| match k {
        1 => p.lambda.clone(),
        2 => WeightVector::zeros(4),
        k => p.alpha_k(k).clone(),
    };
    let (adj, weights) = read_figure(&generate_cli("gr2", 4)?);
    let verts: Vec<(usize, usize)> = (1..=4).flat_map(|i| (i + 1..=4).map(move |j| (i, j))).collect();
    ensure!(weights.len() == 6, "Gr2(C4) has {} vertices", weights.len());
    let name = |(i, j): (usize, usize)| format!("v{i}{j}");
    let mut all_labels = Vec::new();
    for &u in &verts {
        let valence: usize = adj.iter().filter(|((a, b), _)| *a == name(u) || *b == name(u)).map(|(_, l)| l.len()).sum();
        ensure!(valence == 4, "{} has valence {valence}", name(u));
        let w = &weights[&name(u)];
        ensure!(same_up_to_sign(w, &(&alpha(u.0) - &alpha(u.1))), "weight at {}: {w}", name(u));
        for &v in &verts {
            if name(u) >= name(v) {
                continue;
            }
            let key = (name(u), name(v));
            let shared: Vec<usize> = [u.0, u.1].into_iter().filter(|x| *x == v.0 || *x == v.1).collect();
            match (shared.len(), adj.get(&key)) {
                (0, None) => {}
                (0, Some(_)) => return Err(format!("{key:?} should not be adjacent")),
                (1, Some(found)) => {
                    let x = if u.0 == shared[0] { u.1 } else { u.0 };
                    let y = if v.0 == shared[0] { v.1 } else { v.0 };
                    ensure!(labels_match(found, &[&alpha(x) - &alpha(y)]), "{key:?}: {found:?}");
                    all_labels.push(found[0].clone());
                }
                _ => return Err(format!("{key:?} should be joined by one edge")),
            }
        }
    }
    let (l, a, b) = (&p.lambda, p.alpha_k(3), p.alpha_k(4));
    let named = [l.clone(), a.clone(), b.clone(), a - b, l - a, l - b];
    ensure!(named.iter().all(|x| all_labels.iter().any(|y| same_up_to_sign(x, y))), "missing a named label");
    ensure!(all_labels.iter().all(|y| named.iter().any(|x| same_up_to_sign(x, y))), "unexpected label");
    Ok("HP2 and Gr2(C4) figures reproduced".into())
}

fn criterion_2() -> Outcome {
    let corpus = model_corpus();
    for (name, params, m) in &corpus {
        let text = GraphFile::from_graph(&m.graph, Some(&m.structure)).to_json();
        let loaded = load_str(&text).map_err(|e| format!("{name}: {e}"))?;
        let input = loaded.quaternionic.as_ref().ok_or(format!("{name}: no quaternionic data"))?;
        let res = classify_input(&loaded.graph, input);
        identifies(m, params, &res).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{} models identified", corpus.len()))
}

fn criterion_3() -> Outcome {
    let (l, a) = (wv(&[1, 0]), wv(&[0, 1]));
    let k = kahler_cp2_triangle(&l, &a).map_err(|e| e.to_string())?;
    let res = classify(&k.graph, &k.structure);
    ensure!(res.reason() == Some(ReasonCode::FaceShapeViolation), "Kähler triangle: {res:?}");
    let q = noncomplex_triangle(&l, &a).map_err(|e| e.to_string())?;
    let res = classify(&q.graph, &q.structure);
    ensure!(matches!(res, ClassificationResult::Gr2 { n: 3, .. }), "noncomplex triangle: {res:?}");
    Ok("Kähler triangle rejected, noncomplex triangle is Gr2(C3)".into())
}

/// Replaces one edge label or one weight by a random vector; `None` if the
/// draw changes nothing.
fn mutate(m: &Model, r: &mut ChaCha8Rng, explicit_pairs: bool) -> Option<(GkmGraph, QuaternionicInput)> {
    let mut data = m.graph.to_data();
    let mut weights = m.weight_lifts.clone();
    let rank = m.graph.rank();
    if r.random_bool(0.5) {
        let k = r.random_range(0..data.edges.len());
        let w = WeightVector::new((0..rank).map(|_| r.random_range(-7..=7)).collect());
        if same_up_to_sign(&w, m.graph.edge(k).label.rep()) {
            return None;
        }
        data.edges[k].label = w;
    } else {
        let v = r.random_range(0..weights.len());
        let w = WeightVector::new((0..rank).map(|_| r.random_range(-7..=7)).collect());
        if same_up_to_sign(&w, &weights[v]) {
            return None;
        }
        weights[v] = w;
    }
    let pairs = explicit_pairs.then(|| (0..m.graph.vertex_count()).map(|v| m.structure.pairs(&m.graph, v)).collect());
    // A zero label or similar is rejected at load time, which is not a classification.
    let g = GkmGraph::from_data(&data).ok()?;
    Some((g, QuaternionicInput { weights, pairs }))
}

fn criterion_4() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(0x3a7);
    let mut models = Vec::new();
    for n in 1..=4 {
        models.push(generate_hpn(&standard_hpn(n)).unwrap());
        models.push(random_hpn(&mut r, n).1);
    }
    for n in 3..=6 {
        models.push(generate_gr2(&standard_gr2(n)).unwrap());
        models.push(random_gr2(&mut r, n).1);
    }
    let mut done = 0;
    let mut i = 0;
    while done < MUTATIONS {
        let m = &models[i % models.len()];
        if let Some((g, input)) = mutate(m, &mut r, i % 2 == 0) {
            let res = classify_input(&g, &input);
            ensure!(!res.is_classified(), "mutation {done} classified: {res:?}");
            done += 1;
        }
        i += 1;
    }
    Ok(format!("{done} mutations, none classified"))
}

fn census(m: &Model) -> Result<(BTreeMap<String, usize>, Vec<(FaceKind, Vec<Dart>)>), String> {
    let g = &m.graph;
    let con = find_connection(g).map_err(|e| e.to_string())?;
    let faces = enumerate_faces(g, &con).map_err(|e| e.to_string())?;
    let mut corners = HashSet::new();
    let mut counts = BTreeMap::new();
    let mut kinds = Vec::new();
    for f in &faces {
        let d = f.darts();
        for i in 0..d.len() {
            let (a, b) = (d[i].reversed(), d[(i + 1) % d.len()]);
            ensure!(g.tail(a) == g.tail(b), "face is not a closed path");
            ensure!(corners.insert((g.tail(a), a.min(b), a.max(b))), "edge pair covered twice");
        }
        let kind = classify_face(f, g, &m.structure, &con).kind;
        *counts.entry(format!("{kind:?}")).or_insert(0) += 1;
        kinds.push((kind, d.to_vec()));
    }
    let k = g.valence();
    let expected = g.vertex_count() * k * (k - 1) / 2;
    ensure!(corners.len() == expected, "{} of {expected} edge pairs covered", corners.len());
    Ok((counts, kinds))
}

fn criterion_5() -> Outcome {
    let (counts, _) = census(&generate_hpn(&standard_hpn(2)).unwrap())?;
    let want: BTreeMap<String, usize> = [("QuaternionicBiangle".into(), 3), ("ComplexTriangle".into(), 4)].into();
    ensure!(counts == want, "HP2 census {counts:?}");
    let m = generate_gr2(&standard_gr2(4)).unwrap();
    let (counts, kinds) = census(&m)?;
    let want: BTreeMap<String, usize> = [
        ("NoncomplexTriangle".into(), 4),
        ("ComplexQuadrangle { opposite_equal: true }".into(), 6),
    ]
    .into();
    ensure!(counts == want, "Gr2(C4): expected {want:?}, found {counts:?}");
    for (_, d) in kinds.iter().filter(|(k, _)| matches!(k, FaceKind::ComplexQuadrangle { .. })) {
        let l = |i: usize| m.graph.label(d[i]);
        ensure!(l(0) == l(2) && l(1) == l(3), "opposite labels differ");
    }
    Ok("HP2: 3 biangles + 4 triangles; Gr2(C4): 4 noncomplex triangles + 6 quadrangles".into())
}

fn criterion_6() -> Outcome {
    let modular = RankMethod::Modular { seed: 0x5eed };
    let cases: [(&str, Model, Vec<i64>); 5] = [
        ("HP1", generate_hpn(&standard_hpn(1)).unwrap(), vec![1, 0, 1]),
        ("HP2", generate_hpn(&standard_hpn(2)).unwrap(), vec![1, 0, 1, 0, 1]),
        ("Gr2(C3)", generate_gr2(&standard_gr2(3)).unwrap(), vec![1, 1, 1]),
        ("Gr2(C4)", generate_gr2(&standard_gr2(4)).unwrap(), vec![1, 1, 2, 1, 1]),
        ("Gr2(C5)", generate_gr2(&standard_gr2(5)).unwrap(), vec![1, 1, 2, 2, 2, 1, 1]),
    ];
    let mut timings = String::new();
    for (name, m, want) in &cases {
        let d = m.graph.valence() as u32;
        let t = Instant::now();
        let fast = betti_numbers(&m.graph, d, modular);
        let t_mod = t.elapsed();
        let t = Instant::now();
        let exact = betti_numbers(&m.graph, d, RankMethod::Exact);
        let t_exact = t.elapsed();
        ensure!(&fast.b == want, "{name} modular: {:?}", fast.b);
        ensure!(&exact.b == want, "{name} exact: {:?}", exact.b);
        ensure!(fast.b.iter().sum::<i64>() == m.graph.vertex_count() as i64, "{name} sum");
        if *name == "Gr2(C5)" {
            ensure!(d == 6, "Gr2(C5) valence {d}");
            ensure!(t_mod < MODULAR_LIMIT, "modular took {t_mod:?}");
            ensure!(t_exact < EXACT_LIMIT, "exact took {t_exact:?}");
            timings = format!("Gr2(C5) D=6: modular {t_mod:.2?}, exact {t_exact:.2?}");
        }
    }
    Ok(timings)
}

fn criterion_7() -> Outcome {
    let mut signed = 0;
    let mut refused = 0;
    for (name, _, m) in model_corpus() {
        let g = &m.graph;
        let con = find_connection(g).map_err(|e| e.to_string())?;
        for f in enumerate_faces(g, &con).map_err(|e| e.to_string())? {
            let res = sign_face(&f, g, &m.structure, &con);
            if f.len() == 2 {
                ensure!(res == Err(SignError::Biangle), "{name}: biangle not refused: {res:?}");
                refused += 1;
                continue;
            }
            if classify_face(&f, g, &m.structure, &con).quaternionic {
                continue;
            }
            let s = res.map_err(|e| format!("{name}: {e}"))?;
            let d = f.darts();
            for (i, &e) in d.iter().enumerate() {
                let lift = &s.lifts[i];
                ensure!(same_up_to_sign(lift, g.label(e).rep()), "{name}: lift {lift} of {}", g.dart_name(e));
                ensure!(s.lift_of(e.reversed()) == Some(-lift), "{name}: lift of reversed edge");
                let prev = &s.lifts[(i + d.len() - 1) % d.len()];
                let next = &s.lifts[(i + 1) % d.len()];
                ensure!(congruent((-prev).coords(), next.coords(), lift.coords()), "{name}: edge congruence");
            }
            signed += 1;
        }
    }
    Ok(format!("{signed} complex faces signed, {refused} biangles refused"))
}

fn criterion_8() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(0xc0ec);
    let mut models = Vec::new();
    for n in 1..=5 {
        models.push((format!("HP{n}"), generate_hpn(&standard_hpn(n)).unwrap()));
        for _ in 0..10 {
            models.push((format!("random HP{n}"), random_hpn(&mut r, n).1));
        }
    }
    for n in 3..=4 {
        models.push((format!("Gr2(C{n})"), generate_gr2(&standard_gr2(n)).unwrap()));
        for _ in 0..10 {
            models.push((format!("random Gr2(C{n})"), random_gr2(&mut r, n).1));
        }
    }
    models.push(("noncomplex triangle".into(), noncomplex_triangle(&wv(&[1, 0]), &wv(&[0, 1])).unwrap()));
    for (name, m) in &models {
        ensure!(m.graph.vertex_count() <= 6, "{name} too large");
        let c = count_connections(&m.graph);
        ensure!(c == 1, "{name}: {c} connections");
    }
    Ok(format!("{} models, each with exactly one connection", models.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("model reproduction", criterion_1, MODEL_LIMIT),
        ("classify after generate", criterion_2, ROUND_TRIP_LIMIT),
        ("triangle dichotomy", criterion_3, TRIANGLE_LIMIT),
        ("mutations rejected", criterion_4, MUTATION_LIMIT),
        ("face census", criterion_5, CENSUS_LIMIT),
        ("Betti numbers", criterion_6, EXACT_LIMIT + MODULAR_LIMIT),
        ("signed faces", criterion_7, SIGN_LIMIT),
        ("connection uniqueness", criterion_8, CONNECTION_LIMIT),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = match catch_unwind(AssertUnwindSafe(run)) {
            Ok(o) => o,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())),
        };
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|d| {
            if elapsed < limit {
                Ok(d)
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{elapsed:.2?}]", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {e} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
