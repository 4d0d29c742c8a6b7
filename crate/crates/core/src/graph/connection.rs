//! Connections: per-oriented-edge bijections between edge stars.

use serde::Serialize;
use thiserror::Error;

use super::{check_gkm_level, Dart, GkmGraph};
use crate::lattice::{unsigned_congruence, Congruence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectionError {
    #[error("no compatible connection exists: no admissible bijection along {edge}")]
    NoConnection { edge: String },
}

/// How the connection was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ConnectionKind {
    /// GKM₃ graph: the compatible connection is unique.
    Unique,
    /// GKM₂ only: the lexicographically first compatible connection found by
    /// backtracking; other compatible connections may exist.
    FirstOfSeveral,
}

/// `∇`: for every oriented edge `e` from `v` to `w`, a bijection `E_v → E_w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    /// `image[e][i]` is `∇_e` applied to the `i`-th dart of the star of `i(e)`.
    image: Vec<Vec<Dart>>,
    kind: ConnectionKind,
}

impl Connection {
    /// Builds a connection from explicit images; no axioms are checked.
    pub fn from_images(image: Vec<Vec<Dart>>, kind: ConnectionKind) -> Self {
        Connection { image, kind }
    }

    pub fn kind(&self) -> ConnectionKind {
        self.kind
    }

    /// `∇_e f` for `f` in the star of the tail of `e`.
    pub fn apply(&self, g: &GkmGraph, e: Dart, f: Dart) -> Dart {
        debug_assert_eq!(g.tail(e), g.tail(f));
        self.image[e.0][g.position(f)]
    }

    pub fn images(&self, e: Dart) -> &[Dart] {
        &self.image[e.0]
    }

    /// The congruence witnessing `α(∇_e f) ≡ ±α(f) mod α(e)`.
    pub fn congruence(&self, g: &GkmGraph, e: Dart, f: Dart) -> Option<Congruence> {
        unsigned_congruence(g.label(f), g.label(self.apply(g, e, f)), g.label(e))
    }

    /// Checks `∇_e e = ē`, `∇_ē = (∇_e)⁻¹`, bijectivity and compatibility.
    /// Returns the first offending oriented edge.
    pub fn check_axioms(&self, g: &GkmGraph) -> Result<(), Dart> {
        for e in g.darts() {
            let (v, w) = (g.tail(e), g.head(e));
            if self.image[e.0].len() != g.star(v).len() {
                return Err(e);
            }
            if self.apply(g, e, e) != e.reversed() {
                return Err(e);
            }
            let mut hit = vec![false; g.star(w).len()];
            for &f in g.star(v) {
                let h = self.apply(g, e, f);
                if g.tail(h) != w || std::mem::replace(&mut hit[g.position(h)], true) {
                    return Err(e);
                }
                if self.apply(g, e.reversed(), h) != f {
                    return Err(e);
                }
                if self.congruence(g, e, f).is_none() {
                    return Err(e);
                }
            }
        }
        Ok(())
    }
}

fn admissible(g: &GkmGraph, e: Dart, f: Dart, h: Dart) -> bool {
    unsigned_congruence(g.label(f), g.label(h), g.label(e)).is_some()
}

/// Computes a compatible connection.
///
/// For GKM₃ graphs `∇_e f` is the unique `h ≠ ē` at `t(e)` whose label is
/// congruent to `±α(f)` modulo `α(e)`. Otherwise each edge is handled by
/// backtracking over bijections `E_v \ {e} → E_w \ {ē}` and the
/// lexicographically first admissible one is kept; since the constraints of
/// different edges are independent this is the lexicographically first
/// compatible connection overall.
pub fn find_connection(g: &GkmGraph) -> Result<Connection, ConnectionError> {
    let gkm3 = check_gkm_level(g, 3).holds;
    let mut image: Vec<Vec<Dart>> = vec![Vec::new(); g.dart_count()];
    for e in g.darts() {
        if e.is_backwards() {
            continue;
        }
        let (v, w) = (g.tail(e), g.head(e));
        let rev = e.reversed();
        let sources: Vec<Dart> = g.star(v).iter().copied().filter(|&f| f != e).collect();
        let targets: Vec<Dart> = g.star(w).iter().copied().filter(|&h| h != rev).collect();
        let choice = if gkm3 {
            unique_matching(g, e, &sources, &targets)
        } else {
            first_matching(g, e, &sources, &targets)
        };
        let Some(choice) = choice else {
            return Err(ConnectionError::NoConnection { edge: g.dart_name(e) });
        };
        let mut fwd = vec![Dart(usize::MAX); g.star(v).len()];
        let mut back = vec![Dart(usize::MAX); g.star(w).len()];
        fwd[g.position(e)] = rev;
        back[g.position(rev)] = e;
        for (f, h) in sources.iter().zip(&choice) {
            fwd[g.position(*f)] = *h;
            back[g.position(*h)] = *f;
        }
        image[e.0] = fwd;
        image[rev.0] = back;
    }
    let kind = if gkm3 { ConnectionKind::Unique } else { ConnectionKind::FirstOfSeveral };
    let con = Connection { image, kind };
    if let Err(e) = con.check_axioms(g) {
        return Err(ConnectionError::NoConnection { edge: g.dart_name(e) });
    }
    Ok(con)
}

fn unique_matching(g: &GkmGraph, e: Dart, sources: &[Dart], targets: &[Dart]) -> Option<Vec<Dart>> {
    let mut used = vec![false; targets.len()];
    let mut out = Vec::with_capacity(sources.len());
    for &f in sources {
        let mut found = None;
        for (j, &h) in targets.iter().enumerate() {
            if admissible(g, e, f, h) {
                if found.is_some() {
                    return None;
                }
                found = Some(j);
            }
        }
        let j = found?;
        if std::mem::replace(&mut used[j], true) {
            return None;
        }
        out.push(targets[j]);
    }
    Some(out)
}

fn first_matching(g: &GkmGraph, e: Dart, sources: &[Dart], targets: &[Dart]) -> Option<Vec<Dart>> {
    let allowed: Vec<Vec<usize>> = sources
        .iter()
        .map(|&f| (0..targets.len()).filter(|&j| admissible(g, e, f, targets[j])).collect())
        .collect();
    fn search(i: usize, allowed: &[Vec<usize>], used: &mut [bool], chosen: &mut Vec<usize>) -> bool {
        if i == allowed.len() {
            return true;
        }
        for &j in &allowed[i] {
            if !used[j] {
                used[j] = true;
                chosen.push(j);
                if search(i + 1, allowed, used, chosen) {
                    return true;
                }
                chosen.pop();
                used[j] = false;
            }
        }
        false
    }
    let mut used = vec![false; targets.len()];
    let mut chosen = Vec::new();
    search(0, &allowed, &mut used, &mut chosen).then(|| chosen.into_iter().map(|j| targets[j]).collect())
}
