use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use serde_json::{json, Value};

use quatgkm::classify::{classify_input, run_probes, ClassificationResult};
use quatgkm::cohomology::{betti_numbers, graph_cohomology_dims};
use quatgkm::format::{parse_str, GraphFile, LoadError, Loaded};
use quatgkm::graph::{
    check_gkm_level, enumerate_faces, find_connection, gkm_level, validate_graph, Connection, GkmGraph, TwoFace,
};
use quatgkm::lattice::WeightVector;
use quatgkm::linalg::RankMethod;
use quatgkm::models::{generate_gr2, generate_hpn, standard_gr2, standard_hpn, Gr2Params, HpnParams};
use quatgkm::quaternionic::{
    classify_face, sign_face, verify_structure, InferenceCheck, QuaternionicStructure, StructureFailure,
};

use crate::{Command, ModelArg};

/// Seed of the modular rank fast path; fixed so runs are reproducible.
const RANK_SEED: u64 = 0x5eed_9e37_79b9_7f4a;

pub struct Report {
    pub json: Value,
    pub text: String,
    pub code: u8,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    fn failed(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        CliError { code: e.exit_code() as u8, message: e.to_string() }
    }
}

type Outcome = Result<Report, CliError>;

pub fn run(command: &Command) -> Outcome {
    match command {
        Command::Validate { file, gkm_level } => validate(file, *gkm_level),
        Command::Connection { file } => connection(&load(file)?),
        Command::Faces { file } => faces(&load(file)?),
        Command::Qcheck { file } => qcheck(&load(file)?),
        Command::SignFace { file, face } => sign(&load(file)?, *face),
        Command::Classify { file, verbose } => classify(&load(file)?, *verbose),
        Command::Generate { model, n, standard, lambda, alpha, output } => {
            generate(*model, *n, *standard, lambda.as_deref(), alpha.as_deref(), output.as_deref())
        }
        Command::Cohomology { file, max_degree, betti, exact } => {
            cohomology(&load(file)?, *max_degree, *betti, *exact)
        }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(text)
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    Ok(parse_str(&read_input(path)?)?.load()?)
}

fn structure(l: &Loaded) -> Result<QuaternionicStructure, CliError> {
    match l.structure() {
        None => Err(CliError::failed("the file has no quaternionic data")),
        Some(r) => r.map_err(|e| CliError::failed(format!("invalid quaternionic structure: {e}"))),
    }
}

fn connection_of(g: &GkmGraph) -> Result<Connection, CliError> {
    find_connection(g).map_err(|e| CliError::failed(e.to_string()))
}

fn faces_of(g: &GkmGraph, con: &Connection) -> Result<Vec<TwoFace>, CliError> {
    enumerate_faces(g, con).map_err(|e| CliError::failed(e.to_string()))
}

fn ids(g: &GkmGraph, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| g.vertex_id(v).to_string()).collect()
}

fn face_edges(g: &GkmGraph, f: &TwoFace) -> Vec<String> {
    f.darts().iter().map(|d| g.edge(d.edge()).id.clone()).collect()
}

fn validate(path: &Path, level: Option<usize>) -> Outcome {
    let file = parse_str(&read_input(path)?)?;
    let data = file.graph_data()?;
    let report = validate_graph(&data);
    let mut text = String::new();
    if !report.is_valid() {
        writeln!(text, "invalid").unwrap();
        for v in &report.violations {
            writeln!(text, "  violation: {v}").unwrap();
        }
        let json = json!({ "valid": false, "violations": report.violations, "warnings": report.warnings });
        return Ok(Report { json, text, code: 1 });
    }
    let loaded = file.load()?;
    let g = &loaded.graph;
    let mut code = 0;
    writeln!(text, "valid: {} vertices, {} edges, rank {}, valence {}", g.vertex_count(), g.edge_count(), g.rank(), g.valence())
        .unwrap();
    for w in &report.warnings {
        writeln!(text, "  warning: {w}").unwrap();
    }
    let level_found = gkm_level(g);
    writeln!(text, "GKM level: {level_found}").unwrap();
    let requested = level.map(|k| {
        let r = if k < 2 {
            json!({ "k": k, "holds": true, "witness": null })
        } else {
            serde_json::to_value(check_gkm_level(g, k)).expect("serializable")
        };
        let holds = r["holds"].as_bool().unwrap_or(false);
        if holds {
            writeln!(text, "GKM_{k}: holds").unwrap();
        } else {
            code = 1;
            let w = &r["witness"];
            writeln!(text, "GKM_{k}: fails at {} (edges {})", w["vertex"].as_str().unwrap_or("?"), w["edges"]).unwrap();
        }
        r
    });
    let quaternionic = match loaded.structure() {
        None => Value::Null,
        Some(Ok(_)) => {
            writeln!(text, "quaternionic data: ok").unwrap();
            json!({ "ok": true })
        }
        Some(Err(e)) => {
            code = 1;
            writeln!(text, "quaternionic data: {e}").unwrap();
            json!({ "ok": false, "error": e.to_string() })
        }
    };
    let json = json!({
        "valid": true,
        "violations": report.violations,
        "warnings": report.warnings,
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "rank": g.rank(),
        "valence": g.valence(),
        "gkmLevel": level_found,
        "gkmCheck": requested,
        "quaternionic": quaternionic,
    });
    Ok(Report { json, text, code })
}

fn connection(l: &Loaded) -> Outcome {
    let g = &l.graph;
    let con = connection_of(g)?;
    let mut text = format!("connection: {:?}\n", con.kind());
    let mut darts = Vec::new();
    for e in g.darts() {
        writeln!(text, "{}", g.dart_name(e)).unwrap();
        let mut maps = Vec::new();
        for &f in g.star(g.tail(e)) {
            let h = con.apply(g, e, f);
            let c = con.congruence(g, e, f).expect("connections are compatible");
            writeln!(
                text,
                "  {} -> {}  (sign {:+}, coefficient {})",
                g.edge(f.edge()).id,
                g.edge(h.edge()).id,
                c.sign,
                c.coefficient
            )
            .unwrap();
            maps.push(json!({
                "from": g.edge(f.edge()).id,
                "to": g.edge(h.edge()).id,
                "sign": c.sign,
                "coefficient": c.coefficient,
            }));
        }
        darts.push(json!({ "dart": g.dart_name(e), "images": maps }));
    }
    Ok(Report { json: json!({ "kind": con.kind(), "darts": darts }), text, code: 0 })
}

fn faces(l: &Loaded) -> Outcome {
    let g = &l.graph;
    let con = connection_of(g)?;
    let fs = faces_of(g, &con)?;
    let q = l.structure().transpose().map_err(|e| CliError::failed(format!("invalid quaternionic structure: {e}")))?;
    let mut census: BTreeMap<String, usize> = BTreeMap::new();
    let mut entries = Vec::new();
    let mut lines = String::new();
    for (i, f) in fs.iter().enumerate() {
        let vertices = ids(g, &f.vertices(g));
        let edges = face_edges(g, f);
        let (kind, entry) = match &q {
            Some(q) => {
                let c = classify_face(f, g, q, &con);
                let kind = c.kind.to_string();
                let entry = json!({
                    "index": i, "length": f.len(), "vertices": vertices, "edges": edges,
                    "kind": c.kind, "description": kind, "quaternionic": c.quaternionic,
                    "triangleConstant": c.triangle_constant,
                });
                (kind, entry)
            }
            None => {
                let kind = format!("{}-gon", f.len());
                let entry = json!({
                    "index": i, "length": f.len(), "vertices": vertices, "edges": edges, "description": kind,
                });
                (kind, entry)
            }
        };
        writeln!(lines, "  [{i}] {kind}: {}", vertices.join(" -> ")).unwrap();
        *census.entry(kind).or_default() += 1;
        entries.push(entry);
    }
    let mut text = format!("{} faces\n", fs.len());
    for (k, n) in &census {
        writeln!(text, "  {n} x {k}").unwrap();
    }
    text.push_str(&lines);
    Ok(Report { json: json!({ "count": fs.len(), "census": census, "faces": entries }), text, code: 0 })
}

fn qcheck(l: &Loaded) -> Outcome {
    let g = &l.graph;
    let q = structure(l)?;
    let con = connection_of(g)?;
    let r = verify_structure(g, &q, &con);
    let line = |name: &str, f: &Option<StructureFailure>| match f {
        None => format!("  {name}: ok\n"),
        Some(f) => format!("  {name}: FAILED {f}\n"),
    };
    let mut text = format!("quaternionic structure: {}\n", if r.is_valid() { "valid" } else { "invalid" });
    text += &line("pair sums", &r.pair_sum);
    text += &line("pairs respected by the connection", &r.pairs_respected);
    text += &line("transport of lift charts", &r.transport);
    text += &match &r.inference {
        InferenceCheck::Agrees => "  inferred pairs: agree\n".to_string(),
        InferenceCheck::Skipped => "  inferred pairs: skipped (not GKM_3)\n".to_string(),
        InferenceCheck::Disagrees { failure } => format!("  inferred pairs: FAILED {failure}\n"),
    };
    writeln!(text, "  connection: {:?}", r.connection).unwrap();
    let mut json = serde_json::to_value(&r).expect("serializable");
    json["valid"] = json!(r.is_valid());
    Ok(Report { json, text, code: if r.is_valid() { 0 } else { 1 } })
}

fn sign(l: &Loaded, index: usize) -> Outcome {
    let g = &l.graph;
    let q = structure(l)?;
    let con = connection_of(g)?;
    let fs = faces_of(g, &con)?;
    let Some(face) = fs.get(index) else {
        return Err(CliError::usage(format!("face index {index} out of range (graph has {} faces)", fs.len())));
    };
    let vertices = ids(g, &face.vertices(g));
    match sign_face(face, g, &q, &con) {
        Err(e) => {
            let text = format!("refused: {e}\n");
            let json = json!({ "signed": false, "face": index, "vertices": vertices, "reason": e.to_string() });
            Ok(Report { json, text, code: 1 })
        }
        Ok(s) => {
            let mut text = format!("signed face [{index}]: {}\n", vertices.join(" -> "));
            let mut darts = Vec::new();
            for (i, &d) in face.darts().iter().enumerate() {
                writeln!(text, "  {}  lift {}  lambda {}", g.dart_name(d), s.lifts[i], s.lambdas[i]).unwrap();
                darts.push(json!({ "dart": g.dart_name(d), "lift": s.lifts[i], "lambda": s.lambdas[i] }));
            }
            writeln!(text, "  propagation coefficients: {:?}", s.propagation).unwrap();
            writeln!(text, "  closure coefficient: {}", s.closure).unwrap();
            let json = json!({
                "signed": true, "face": index, "vertices": vertices, "darts": darts,
                "propagation": s.propagation, "closure": s.closure,
            });
            Ok(Report { json, text, code: 0 })
        }
    }
}

fn weights_text(name: &str, first: usize, ws: &[WeightVector]) -> String {
    ws.iter().enumerate().map(|(i, w)| format!("  {name}_{} = {w}\n", i + first)).collect()
}

fn classify(l: &Loaded, verbose: bool) -> Outcome {
    let g = &l.graph;
    let Some(input) = &l.quaternionic else {
        return Err(CliError::failed("the file has no quaternionic data"));
    };
    let result = classify_input(g, input);
    let mut text = String::new();
    match &result {
        ClassificationResult::Hpn { n, lambda, alpha, vertex_map } => {
            writeln!(text, "HPn n={n}\n  lambda = {lambda}").unwrap();
            text += &weights_text("alpha", 1, alpha);
            for (k, v) in vertex_map {
                writeln!(text, "  {k} -> {v}").unwrap();
            }
        }
        ClassificationResult::Gr2 { n, lambda, alpha, vertex_map } => {
            writeln!(text, "Gr2 n={n}\n  lambda = {lambda}").unwrap();
            text += &weights_text("alpha", 3, alpha);
            for (k, v) in vertex_map {
                writeln!(text, "  {k} -> {v}").unwrap();
            }
        }
        ClassificationResult::NotClassified { reason, witness } => {
            writeln!(text, "NotClassified: {reason}\n  {}", witness.detail).unwrap();
            if !witness.vertices.is_empty() {
                writeln!(text, "  vertices: {}", witness.vertices.join(", ")).unwrap();
            }
            if !witness.edges.is_empty() {
                writeln!(text, "  edges: {}", witness.edges.join(", ")).unwrap();
            }
        }
    }
    let mut json = serde_json::to_value(&result).expect("serializable");
    if verbose {
        let probes = match l.structure() {
            Some(Ok(q)) => run_probes(g, &q),
            _ => Vec::new(),
        };
        for p in &probes {
            let state = if p.holds { "holds" } else { "fails" };
            writeln!(text, "probe {}: {state} ({} faces checked)", p.name, p.checked).unwrap();
            if let Some(w) = &p.witness {
                writeln!(text, "  {}: {}", w.detail, w.vertices.join(" -> ")).unwrap();
            }
        }
        json["probes"] = serde_json::to_value(&probes).expect("serializable");
    }
    Ok(Report { json, text, code: if result.is_classified() { 0 } else { 1 } })
}

fn parse_vector(s: &str) -> Result<WeightVector, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| CliError::usage(format!("bad coordinate {x:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()
        .map(WeightVector::new)
}

fn generate(
    model: ModelArg,
    n: usize,
    standard: bool,
    lambda: Option<&str>,
    alpha: Option<&str>,
    output: Option<&Path>,
) -> Outcome {
    let params = match (standard, lambda, alpha) {
        (true, _, _) => None,
        (false, Some(l), Some(a)) => {
            let alpha = a.split(';').map(parse_vector).collect::<Result<Vec<_>, _>>()?;
            Some((parse_vector(l)?, alpha))
        }
        _ => return Err(CliError::usage("give either --standard or both --lambda and --alpha")),
    };
    let generated = match model {
        ModelArg::Hpn => {
            let p = match params {
                None => standard_hpn(n),
                Some((lambda, alpha)) => HpnParams { n, lambda, alpha },
            };
            generate_hpn(&p)
        }
        ModelArg::Gr2 => {
            let p = match params {
                None => standard_gr2(n),
                Some((lambda, alpha)) => Gr2Params { n, lambda, alpha },
            };
            generate_gr2(&p)
        }
    };
    let m = generated.map_err(|e| CliError::failed(e.to_string()))?;
    let file = GraphFile::from_graph(&m.graph, Some(&m.structure));
    let body = file.to_json();
    let json = serde_json::to_value(&file).expect("serializable");
    match output {
        None => Ok(Report { json, text: body, code: 0 }),
        Some(path) => {
            std::fs::write(path, &body)
                .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
            let text = format!("wrote {}\n", path.display());
            Ok(Report { json: json!({ "output": path.display().to_string() }), text, code: 0 })
        }
    }
}

fn cohomology(l: &Loaded, max_degree: Option<u32>, betti: bool, exact: bool) -> Outcome {
    let g = &l.graph;
    let d = max_degree.unwrap_or(g.valence() as u32);
    let method = if exact { RankMethod::Exact } else { RankMethod::Modular { seed: RANK_SEED } };
    if !betti {
        let dims = graph_cohomology_dims(g, d, method);
        let text = format!("graded dimensions of graph cohomology (degrees 0..={d}):\n  h = {:?}\n", dims.h);
        return Ok(Report { json: json!({ "maxDegree": d, "exact": exact, "h": dims.h }), text, code: 0 });
    }
    let r = betti_numbers(g, d, method);
    let mut text = format!("graded dimensions of graph cohomology (degrees 0..={d}):\n  h = {:?}\n", r.h);
    writeln!(text, "Betti numbers under equivariant formality (degrees 0, 2, ..., {}):\n  b = {:?}", 2 * d, r.b).unwrap();
    if !r.all_nonnegative {
        writeln!(text, "  warning: negative values, the cohomology is not a free module").unwrap();
    }
    match r.sum_equals_vertex_count {
        Some(true) => writeln!(text, "  sum of Betti numbers = {} vertices", g.vertex_count()).unwrap(),
        Some(false) => writeln!(text, "  warning: sum of Betti numbers differs from the vertex count").unwrap(),
        None => {}
    }
    let json = json!({
        "maxDegree": d,
        "exact": exact,
        "h": r.h,
        "betti": { "b": r.b, "allNonnegative": r.all_nonnegative, "sumEqualsVertexCount": r.sum_equals_vertex_count },
    });
    Ok(Report { json, text, code: 0 })
}
