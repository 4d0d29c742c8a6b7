//! Connection paths and 2-faces.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use super::{Connection, Dart, GkmGraph, VertexIdx};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FaceError {
    #[error("connection path through {start} revisits vertex {vertex}")]
    SelfIntersectingPath { start: String, vertex: String },
}

/// A closed connection path `(e_1, …, e_ℓ)` with `e_{k+1} = ∇_{e_k} ē_{k-1}`.
///
/// Stored in canonical form: the lexicographically least sequence of dart
/// indices among all rotations of both traversal directions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct TwoFace {
    darts: Vec<Dart>,
}

impl TwoFace {
    /// Canonicalizes a closed dart cycle.
    pub fn from_cycle(cycle: &[Dart]) -> TwoFace {
        let l = cycle.len();
        let reversed: Vec<Dart> = cycle.iter().rev().map(|d| d.reversed()).collect();
        let mut best: Option<Vec<Dart>> = None;
        for seq in [cycle, &reversed[..]] {
            for r in 0..l {
                let cand: Vec<Dart> = seq[r..].iter().chain(&seq[..r]).copied().collect();
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        TwoFace { darts: best.unwrap_or_default() }
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// `v_i = i(e_i)`.
    pub fn vertices(&self, g: &GkmGraph) -> Vec<VertexIdx> {
        self.darts.iter().map(|&d| g.tail(d)).collect()
    }

    /// At each vertex `v_i`, the two face edges leaving it: `(ē_{i-1}, e_i)`.
    pub fn corner(&self, i: usize) -> (Dart, Dart) {
        let l = self.darts.len();
        (self.darts[(i + l - 1) % l].reversed(), self.darts[i])
    }

    /// The same face traversed from a different start and/or direction
    /// (not canonical; used to test invariance).
    pub fn relisted(&self, start: usize, reverse: bool) -> Vec<Dart> {
        let l = self.darts.len();
        let rotated: Vec<Dart> = (0..l).map(|i| self.darts[(start + i) % l]).collect();
        if reverse {
            rotated.iter().rev().map(|d| d.reversed()).collect()
        } else {
            rotated
        }
    }
}

/// Follows the connection path starting with the corner `(a, b)` at a vertex
/// (`a`, `b` leaving it), returning the dart cycle beginning with `b`.
pub fn connection_path(g: &GkmGraph, con: &Connection, a: Dart, b: Dart) -> Result<Vec<Dart>, FaceError> {
    let start = (a.reversed(), b);
    let mut state = start;
    let mut cycle = Vec::new();
    let mut seen = HashSet::new();
    loop {
        let (prev, cur) = state;
        let v = g.tail(cur);
        if !seen.insert(v) {
            return Err(FaceError::SelfIntersectingPath {
                start: g.dart_name(b),
                vertex: g.vertex_id(v).to_string(),
            });
        }
        cycle.push(cur);
        let next = con.apply(g, cur, prev.reversed());
        state = (cur, next);
        if state == start {
            return Ok(cycle);
        }
    }
}

/// All 2-faces: every unordered pair of distinct edges at a vertex lies in
/// exactly one returned face. Faces are sorted by canonical form.
pub fn enumerate_faces(g: &GkmGraph, con: &Connection) -> Result<Vec<TwoFace>, FaceError> {
    let mut covered: HashSet<(Dart, Dart)> = HashSet::new();
    let mut faces = Vec::new();
    for v in 0..g.vertex_count() {
        let star = g.star(v);
        for i in 0..star.len() {
            for j in i + 1..star.len() {
                let (a, b) = (star[i], star[j]);
                if covered.contains(&(a, b)) {
                    continue;
                }
                let cycle = connection_path(g, con, a, b)?;
                let face = TwoFace::from_cycle(&cycle);
                for k in 0..face.len() {
                    let (x, y) = face.corner(k);
                    covered.insert((x.min(y), x.max(y)));
                }
                faces.push(face);
            }
        }
    }
    faces.sort();
    Ok(faces)
}
