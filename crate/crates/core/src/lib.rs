//! Exact combinatorics of abstract GKM graphs with quaternionic structures.
//!
//! * [`lattice`]: weights in `Z^m` and `Z^m/±1`, congruences, divisibility.
//! * [`graph`]: GKM graphs, validation, connections and 2-faces.
//! * [`quaternionic`]: quaternionic structures, lift charts, face types and
//!   signed structures on complex faces.
//! * [`models`]: the graphs of `HP^n` and `Gr_2(C^n)`.
//! * [`classify`]: recognition of those models.
//! * [`cohomology`]: graded dimensions of graph cohomology and Betti numbers.
//! * [`format`]: the JSON graph file format.

pub mod classify;
pub mod cohomology;
pub mod format;
pub mod graph;
pub mod lattice;
pub mod linalg;
pub mod models;
pub mod poly;
pub mod quaternionic;
