//! Hüsler–Reiss extremal graphical models.
//!
//! * [`graphs`]: undirected graphs, chordality, clique separators, treewidth.
//! * [`varalg`]: variogram / Gram / signed-Laplacian conversions and certificates.
//! * [`eci`]: extremal conditional-independence tests and generator evaluation.
//! * [`completion`]: surrogate maximum likelihood by CND matrix completion.
//! * [`degree`]: extremal ML degrees, closed forms and numeric root counting.
//! * [`threshold`]: ML-threshold bounds and the four-cycle experiment.
//! * [`pareto`]: multivariate Pareto simulation and empirical variograms.
//! * [`cli`]: the command layer behind the `hrgm` binary.

pub mod cli;
pub mod completion;
pub mod degree;
pub mod eci;
pub mod graphs;
pub mod io;
pub mod linalg;
pub mod model;
pub mod pareto;
pub mod poly;
pub mod reproduce;
pub mod threshold;
pub mod varalg;

pub use graphs::{UndirectedGraph, VertexSet};
pub use linalg::Tolerance;
pub use varalg::{SignedLaplacian, Variogram};
