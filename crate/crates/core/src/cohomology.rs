//! Equivariant graph cohomology: graded dimensions and Betti numbers.
//!
//! The degree-`d` piece is the space of tuples `(f_v)` of homogeneous
//! degree-`d` polynomials with `α(e) | f_u − f_w` for every edge `u — w`.
//!
//! Instead of one unknown polynomial per vertex we fix a spanning tree of
//! each component and write `f_w = f_u + α(e)·g_e` along tree edges. The
//! tuple is then determined by the root value (unconstrained) and the
//! `g_e ∈ S^{d-1}`, injectively, and only the non-tree edges impose
//! conditions: the signed sum of `α(e)·g_e` along the tree path between
//! their endpoints must vanish on the hyperplane `α = 0`.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{EdgeIdx, GkmGraph, VertexIdx};
use crate::lattice::kernel_basis;
use crate::linalg::{rank, RankMethod, SparseMatrix};
use crate::poly::{binomial, monomial_count, monomials, substitution_matrix, Exponent};

/// `h[d]`: dimension of the degree-`d` piece (cohomological degree `2d`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedDims {
    pub h: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BettiReport {
    pub h: Vec<u64>,
    /// `b[d] = Σ_i (−1)^i C(m, i) h[d−i]`: Betti numbers in degree `2d`,
    /// meaningful only if the graph cohomology is a free module.
    pub b: Vec<i64>,
    pub all_nonnegative: bool,
    /// Evaluated when the computed range reaches the valence.
    pub sum_equals_vertex_count: Option<bool>,
}

struct Tree {
    /// For every vertex: `(parent, tree edge)`, `None` at roots.
    parent: Vec<Option<(VertexIdx, EdgeIdx)>>,
    depth: Vec<usize>,
    /// Column block of each tree edge.
    block: HashMap<EdgeIdx, usize>,
    non_tree: Vec<EdgeIdx>,
    components: usize,
}

fn spanning_forest(g: &GkmGraph) -> Tree {
    let n = g.vertex_count();
    let mut parent = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut block = HashMap::new();
    let mut components = 0;
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        components += 1;
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &d in g.star(v) {
                let w = g.head(d);
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = Some((v, d.edge()));
                    let next = block.len();
                    block.insert(d.edge(), next);
                    queue.push_back(w);
                }
            }
        }
    }
    let non_tree = (0..g.edge_count()).filter(|k| !block.contains_key(k)).collect();
    Tree { parent, depth, block, non_tree, components }
}

/// Tree edges between `u` and `w` with the sign of `α(e)·g_e` in `f_u − f_w`.
fn tree_path(t: &Tree, mut u: VertexIdx, mut w: VertexIdx) -> Vec<(EdgeIdx, i64)> {
    // f_child − f_parent = α·g, so walking up from u contributes +, from w −.
    let mut out = Vec::new();
    while t.depth[u] > t.depth[w] {
        let (p, e) = t.parent[u].expect("non-root");
        out.push((e, 1));
        u = p;
    }
    while t.depth[w] > t.depth[u] {
        let (p, e) = t.parent[w].expect("non-root");
        out.push((e, -1));
        w = p;
    }
    while u != w {
        let (pu, eu) = t.parent[u].expect("same component");
        let (pw, ew) = t.parent[w].expect("same component");
        out.push((eu, 1));
        out.push((ew, -1));
        u = pu;
        w = pw;
    }
    out
}

/// The constraint matrix of degree `d` (`d >= 1`): columns are the
/// coefficients of the `g_e`, one block of `C(m+d−2, d−1)` per tree edge.
fn degree_system(g: &GkmGraph, t: &Tree, d: u32) -> SparseMatrix {
    let m = g.rank();
    let lower = monomials(m, d - 1);
    let upper_index: HashMap<Exponent, usize> =
        monomials(m, d).into_iter().enumerate().map(|(i, e)| (e, i)).collect();
    // shift[c][i]: index of x_i · (c-th monomial of degree d−1).
    let shift: Vec<Vec<usize>> = lower
        .iter()
        .map(|e| {
            (0..m)
                .map(|i| {
                    let mut e = e.clone();
                    e[i] += 1;
                    upper_index[&e]
                })
                .collect()
        })
        .collect();
    let width = lower.len();
    let mut matrix = SparseMatrix::new(t.block.len() * width);
    for &f in &t.non_tree {
        let edge = g.edge(f);
        let kernel = kernel_basis(edge.label.rep());
        let sub = substitution_matrix(m, d, &kernel);
        let path = tree_path(t, edge.ends[0], edge.ends[1]);
        for row in &sub {
            let mut entries: Vec<(usize, BigInt)> = Vec::new();
            for &(e, sign) in &path {
                let a = g.edge(e).label.rep().coords();
                let base = t.block[&e] * width;
                for (c, targets) in shift.iter().enumerate() {
                    let mut acc = BigInt::zero();
                    for (i, &target) in targets.iter().enumerate() {
                        if a[i] != 0 && !row[target].is_zero() {
                            acc += &row[target] * a[i];
                        }
                    }
                    if !acc.is_zero() {
                        entries.push((base + c, acc * sign));
                    }
                }
            }
            matrix.push_row(entries);
        }
    }
    matrix.rows.sort_by_key(|r| r[0].0);
    matrix
}

/// `h[d]` for one degree.
pub fn degree_dimension(g: &GkmGraph, d: u32, method: RankMethod) -> u64 {
    let t = spanning_forest(g);
    degree_dimension_with(g, &t, d, method)
}

fn degree_dimension_with(g: &GkmGraph, t: &Tree, d: u32, method: RankMethod) -> u64 {
    let m = g.rank();
    let free = (t.components * monomial_count(m, d)) as u64;
    if d == 0 {
        return free;
    }
    let system = degree_system(g, t, d);
    (free + system.ncols as u64) - rank(&system, method) as u64
}

/// `h[0..=max_degree]`. Degrees are computed independently (in parallel).
pub fn graph_cohomology_dims(g: &GkmGraph, max_degree: u32, method: RankMethod) -> GradedDims {
    let t = spanning_forest(g);
    let h = (0..=max_degree)
        .into_par_iter()
        .map(|d| degree_dimension_with(g, &t, d, method))
        .collect();
    GradedDims { h }
}

/// Betti numbers from graded dimensions via the quotient by positive-degree
/// polynomials: `b[d] = Σ_i (−1)^i C(m, i) h[d−i]`.
pub fn betti_from_dims(dims: &GradedDims, rank: usize) -> Vec<i64> {
    (0..dims.h.len())
        .map(|d| {
            (0..=d.min(rank))
                .map(|i| {
                    let term = binomial(rank as u64, i as u64) as i64 * dims.h[d - i] as i64;
                    if i % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum()
        })
        .collect()
}

pub fn betti_numbers(g: &GkmGraph, max_degree: u32, method: RankMethod) -> BettiReport {
    let dims = graph_cohomology_dims(g, max_degree, method);
    let b = betti_from_dims(&dims, g.rank());
    let all_nonnegative = b.iter().all(|&x| x >= 0);
    let sum_equals_vertex_count = (max_degree as usize >= g.valence())
        .then(|| b.iter().sum::<i64>() == g.vertex_count() as i64);
    BettiReport { h: dims.h, b, all_nonnegative, sum_equals_vertex_count }
}
