//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quatgkm::graph::{check_gkm_level, Dart, EdgeData, GkmGraph, GraphData};
use quatgkm::lattice::WeightVector;
use quatgkm::models::{generate_gr2, generate_hpn, Gr2Params, HpnParams, Model};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn wv(c: &[i64]) -> WeightVector {
    WeightVector::new(c.to_vec())
}

pub fn random_vector(rng: &mut ChaCha8Rng, m: usize, bound: i64) -> WeightVector {
    WeightVector::new((0..m).map(|_| rng.random_range(-bound..=bound)).collect())
}

const ATTEMPTS: usize = 10_000;

/// Random parameters that pass the generator's independence check and GKM₃.
pub fn random_hpn(rng: &mut ChaCha8Rng, n: usize, m: usize) -> (HpnParams, Model) {
    for _ in 0..ATTEMPTS {
        let p = HpnParams {
            n,
            lambda: random_vector(rng, m, 5),
            alpha: (0..n).map(|_| random_vector(rng, m, 5)).collect(),
        };
        if let Ok(model) = generate_hpn(&p) {
            if check_gkm_level(&model.graph, 3).holds {
                return (p, model);
            }
        }
    }
    panic!("no valid parameters found for n = {n} in rank {m}");
}

pub fn random_gr2(rng: &mut ChaCha8Rng, n: usize, m: usize) -> (Gr2Params, Model) {
    for _ in 0..ATTEMPTS {
        let p = Gr2Params {
            n,
            lambda: random_vector(rng, m, 5),
            alpha: (3..=n).map(|_| random_vector(rng, m, 5)).collect(),
        };
        if let Ok(model) = generate_gr2(&p) {
            if check_gkm_level(&model.graph, 3).holds {
                return (p, model);
            }
        }
    }
    panic!("no valid parameters found for n = {n} in rank {m}");
}

/// `y = ±x + c·a` for some sign and integer `c`, decided coordinatewise.
pub fn congruent(x: &[i64], y: &[i64], a: &[i64]) -> bool {
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

/// Bijections `i ↦ perm[i]` with `ok[i][perm[i]]` for all `i`, counted by
/// exhaustive backtracking.
fn count_bijections(ok: &[Vec<bool>]) -> u128 {
    fn go(ok: &[Vec<bool>], i: usize, used: &mut Vec<bool>) -> u128 {
        if i == ok.len() {
            return 1;
        }
        let mut total = 0;
        for j in 0..used.len() {
            if ok[i][j] && !used[j] {
                used[j] = true;
                total += go(ok, i + 1, used);
                used[j] = false;
            }
        }
        total
    }
    go(ok, 0, &mut vec![false; ok.len()])
}

/// Number of compatible connections, by brute force over all bijections
/// `E_v \ {e} → E_w \ {ē}` of every edge (the bijection of `ē` is the
/// inverse, so edges are independent and the count is a product).
pub fn count_connections(g: &GkmGraph) -> u128 {
    let mut total: u128 = 1;
    for k in 0..g.edge_count() {
        let e = Dart::new(k, false);
        let (v, w) = (g.tail(e), g.head(e));
        let from: Vec<Dart> = g.star(v).iter().copied().filter(|&d| d != e).collect();
        let to: Vec<Dart> = g.star(w).iter().copied().filter(|&d| d != e.reversed()).collect();
        let a = g.label(e).rep().coords();
        let ok: Vec<Vec<bool>> = from
            .iter()
            .map(|f| to.iter().map(|h| congruent(g.label(*f).rep().coords(), g.label(*h).rep().coords(), a)).collect())
            .collect();
        total *= count_bijections(&ok);
    }
    total
}

// ---------------------------------------------------------------------------
// Graph cohomology, formulated directly: one unknown polynomial per vertex,
// and `f_u − f_w` divisible by `α(e)`, tested by eliminating one variable.

type Mono = Vec<u32>;

fn monos(m: usize, d: u32) -> Vec<Mono> {
    if m == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monos(m - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

type Poly = BTreeMap<Mono, BigRational>;

fn poly_mul(p: &Poly, q: &Poly) -> Poly {
    let mut out = Poly::new();
    for (a, x) in p {
        for (b, y) in q {
            let e: Mono = a.iter().zip(b).map(|(i, j)| i + j).collect();
            *out.entry(e).or_insert_with(BigRational::zero) += x * y;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Image of the monomial `x^e` under `x_j ↦ −Σ_{i≠j} (a_i/a_j) x_i`.
fn eliminate(e: &Mono, a: &[i64], j: usize) -> Poly {
    let m = a.len();
    let mut sub = Poly::new();
    for i in (0..m).filter(|&i| i != j && a[i] != 0) {
        let mut mono = vec![0; m];
        mono[i] = 1;
        sub.insert(mono, BigRational::new(BigInt::from(-a[i]), BigInt::from(a[j])));
    }
    let mut rest = e.clone();
    rest[j] = 0;
    let mut out = Poly::from([(rest, BigRational::one())]);
    for _ in 0..e[j] {
        out = poly_mul(&out, &sub);
    }
    out
}

fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &pivot;
                for k in c..ncols {
                    let t = &f * &rows[rank][k];
                    rows[r][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `h[d]` by the direct formulation.
pub fn oracle_dimension(g: &GkmGraph, d: u32) -> u64 {
    let m = g.rank();
    let basis = monos(m, d);
    let nv = g.vertex_count();
    let nb = basis.len();
    let mut rows = Vec::new();
    for e in g.edges() {
        let a = e.label.rep().coords();
        let j = a.iter().position(|&x| x != 0).expect("nonzero label");
        let images: Vec<Poly> = basis.iter().map(|b| eliminate(b, a, j)).collect();
        let mut keys: Vec<&Mono> = images.iter().flat_map(|p| p.keys()).collect();
        keys.sort();
        keys.dedup();
        for key in keys {
            let mut row = vec![BigRational::zero(); nv * nb];
            for (c, img) in images.iter().enumerate() {
                if let Some(x) = img.get(key) {
                    row[e.ends[0] * nb + c] += x;
                    row[e.ends[1] * nb + c] -= x;
                }
            }
            rows.push(row);
        }
    }
    (nv * nb - rational_rank(rows)) as u64
}

/// Coefficients of the Gaussian binomial `[n choose 2]_q`.
pub fn q_binomial_2(n: usize) -> Vec<i64> {
    // Partitions in a 2 × (n−2) box: parts a <= b <= n−2, i.e. pairs
    // i = a < j = b + 1 of {0..n−1}, of size i + j − 1.
    let mut c = vec![0i64; 2 * (n - 2) + 1];
    for i in 0..n {
        for j in i + 1..n {
            c[i + j - 1] += 1;
        }
    }
    c
}

/// Disjoint union with prefixed ids.
pub fn disjoint_union(a: &GkmGraph, b: &GkmGraph) -> GkmGraph {
    let mut data = GraphData { rank: a.rank(), vertices: Vec::new(), edges: Vec::new() };
    for (prefix, g) in [("a", a), ("b", b)] {
        let d = g.to_data();
        data.vertices.extend(d.vertices.iter().map(|v| format!("{prefix}{v}")));
        data.edges.extend(d.edges.into_iter().map(|e| EdgeData {
            id: format!("{prefix}{}", e.id),
            ends: e.ends.map(|v| format!("{prefix}{v}")),
            label: e.label,
        }));
    }
    GkmGraph::from_data(&data).expect("union of valid graphs of equal valence")
}
