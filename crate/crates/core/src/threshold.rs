//! Extremal ML thresholds: how many observations a graph needs before a
//! generic empirical variogram has a strictly CND completion.
//!
//! `q(G) − 1 ≤ eMLT(G) ≤ tw(G)` for connected non-complete graphs. Two
//! numerical tools refine the bounds: a Jacobian-rank test standing in for
//! the vanishing of the elimination ideal `J_{G,r}` (which caps eMLT at `r`),
//! and the four-cycle experiment, which finds rank-one samples with no
//! strictly CND completion.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::degree::{recognize_cycle, K2nSystem};
use crate::graphs::{clique_number, treewidth_report, GraphError, TreewidthMode, UndirectedGraph};
use crate::linalg::{ones_complement_basis, rank_of_values, singular_values, Tolerance};
use crate::varalg::{cnd_certificate, Definiteness, Variogram};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThresholdError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("threshold bounds need a non-complete graph")]
    CompleteGraph,
    #[error("rank {r} outside 1..{d}")]
    InvalidRank { r: usize, d: usize },
    #[error("sample has coincident points")]
    DegenerateSample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ZeroIdealLikely,
    NotZero,
    Inconclusive,
}

/// Jacobian-rank evidence about `J_{G,r}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurrogateReport {
    pub r: usize,
    pub verdict: Verdict,
    pub edges: usize,
    /// Free parameters `r(d − 1)` of the factor `B`.
    pub parameters: usize,
    /// Jacobian rank at each trial.
    pub ranks: Vec<usize>,
    pub seed: u64,
}

/// Jacobian of `W ↦ (Γ_e)_{e ∈ E}` with `Γ = γ(BᵀB)`, `B = W Vᵀ`, where the
/// columns of `V` span 1⊥. Row `e = ij`, column `(a, c)`:
/// `2 (b_i − b_j)_a (V_ic − V_jc)`.
fn edge_jacobian(g: &UndirectedGraph, w: &DMatrix<f64>, v: &DMatrix<f64>) -> DMatrix<f64> {
    let r = w.nrows();
    let m = v.ncols();
    let b = w * v.transpose();
    let edges = g.edges();
    DMatrix::from_fn(edges.len(), r * m, |e, col| {
        let (i, j) = (edges[e].0 - 1, edges[e].1 - 1);
        let (a, c) = (col / m, col % m);
        2.0 * (b[(a, i)] - b[(a, j)]) * (v[(i, c)] - v[(j, c)])
    })
}

/// Full Jacobian rank at every random point ⇒ the projection of rank-`r`
/// variograms onto the edges is full-dimensional ⇒ `J_{G,r} = 0` (likely).
pub fn elimination_surrogate(g: &UndirectedGraph, r: usize, trials: usize, seed: u64) -> Result<SurrogateReport, ThresholdError> {
    let d = g.num_vertices();
    if r == 0 || r >= d {
        return Err(ThresholdError::InvalidRank { r, d });
    }
    let v = ones_complement_basis(d);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let ranks: Vec<usize> = (0..trials)
        .map(|_| {
            let w = DMatrix::from_fn(r, d - 1, |_, _| StandardNormal.sample(&mut rng));
            let jac = edge_jacobian(g, &w, &v);
            rank_of_values(&singular_values(&jac), Tolerance::default())
        })
        .collect();
    let edges = g.num_edges();
    let verdict = if !ranks.is_empty() && ranks.iter().all(|&k| k == edges) {
        Verdict::ZeroIdealLikely
    } else if ranks.iter().all(|&k| k < edges) {
        Verdict::NotZero
    } else {
        Verdict::Inconclusive
    };
    Ok(SurrogateReport { r, verdict, edges, parameters: r * (d - 1), ranks, seed })
}

/// How a four-cycle completion candidate behaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CandidateClass {
    /// Real, but σ(Γ) is singular on 1⊥ (the bordered matrix is singular).
    Degenerate,
    StrictlyCnd,
    NotCnd,
    NonReal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct C4Candidate {
    /// Completed `Γ_12` (real and imaginary parts).
    pub gamma12: [f64; 2],
    /// Completed `Γ_34`.
    pub gamma34: [f64; 2],
    pub class: CandidateClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum C4Outcome {
    #[serde(rename = "ExistsCND")]
    ExistsCnd,
    #[serde(rename = "NoCNDSolution")]
    NoCndSolution,
}

/// Rank-one sample on the four-cycle `1–3–2–4–1` and its completions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct C4Experiment {
    pub sample: [f64; 4],
    pub candidates: Vec<C4Candidate>,
    pub outcome: C4Outcome,
}

/// The four-cycle with edges 13, 14, 23, 24 (`K_{2,2}` with sides {1,2}, {3,4}).
pub fn four_cycle() -> UndirectedGraph {
    UndirectedGraph::complete_bipartite(2, 2)
}

/// Completes the variogram `Γ_ij = (v_i − v_j)²` of one observation on the
/// four-cycle and classifies the (at most four) complex solutions.
pub fn cycle4_rank1_sample(v: [f64; 4]) -> Result<C4Experiment, ThresholdError> {
    let spread = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for i in 0..4 {
        for j in i + 1..4 {
            if (v[i] - v[j]).abs() <= 1e-12 * spread {
                return Err(ThresholdError::DegenerateSample);
            }
        }
    }
    let pts = DMatrix::from_row_slice(1, 4, &v);
    let gamma = Variogram::from_points(&pts);
    let system = K2nSystem::new(&gamma, 2).expect("four vertices");
    let tol = Tolerance::default();
    let candidates: Vec<C4Candidate> = system
        .roots()
        .into_iter()
        .map(|y| {
            let full = system.completion(y);
            let z = full[(0, 1)];
            let class = classify(&system, y, z, tol);
            let real = |c: Complex64| [c.re, if class == CandidateClass::NonReal { c.im } else { 0.0 }];
            C4Candidate { gamma12: real(z), gamma34: real(y), class }
        })
        .collect();
    let outcome = if candidates.iter().any(|c| c.class == CandidateClass::StrictlyCnd) {
        C4Outcome::ExistsCnd
    } else {
        C4Outcome::NoCndSolution
    };
    Ok(C4Experiment { sample: v, candidates, outcome })
}

fn classify(system: &K2nSystem, y: Complex64, z: Complex64, tol: Tolerance) -> CandidateClass {
    let scale = y.norm().max(z.norm());
    if y.im.abs() > 1e-8 * scale || z.im.abs() > 1e-8 * scale {
        return CandidateClass::NonReal;
    }
    let Some(g) = system.real_completion(y.re) else {
        return CandidateClass::NonReal;
    };
    let cert = cnd_certificate(&g, tol);
    let singular = cert.eigenvalues.iter().any(|x| x.abs() <= cert.tolerance.max(1e-9 * scale));
    match cert.status {
        Definiteness::Strict => CandidateClass::StrictlyCnd,
        _ if singular => CandidateClass::Degenerate,
        _ => CandidateClass::NotCnd,
    }
}

/// The experiment on the normalized sample `(1, x₂, x₃, −(1 + x₂ + x₃))`.
pub fn cycle4_rank1_experiment(x2: f64, x3: f64) -> Result<C4Experiment, ThresholdError> {
    cycle4_rank1_sample([1.0, x2, x3, -(1.0 + x2 + x3)])
}

/// Evidence attached to threshold bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Elimination(SurrogateReport),
    /// A rank-`r` sample whose neighborhood (all perturbations tried) has no
    /// strictly CND completion.
    Counterexample { r: usize, experiments: Vec<C4Experiment> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdBounds {
    pub graph: String,
    pub lower: usize,
    pub upper: usize,
    /// Whether `upper` comes from exact treewidth or a min-fill bound.
    pub upper_mode: TreewidthMode,
    #[serde(with = "exact_or_unknown")]
    pub exact: Option<usize>,
    pub evidence: Vec<Evidence>,
}

mod exact_or_unknown {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<usize>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(k) => k.serialize(s),
            None => s.serialize_str("Unknown"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<usize>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Num(usize),
            Text(String),
        }
        match Wire::deserialize(d)? {
            Wire::Num(k) => Ok(Some(k)),
            Wire::Text(t) if t == "Unknown" => Ok(None),
            Wire::Text(t) => Err(serde::de::Error::custom(format!("unexpected threshold {t:?}"))),
        }
    }
}

/// Clique-number and treewidth bounds only.
pub fn emlt_bounds(g: &UndirectedGraph) -> Result<ThresholdBounds, ThresholdError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    if g.is_complete() {
        return Err(ThresholdError::CompleteGraph);
    }
    let tw = treewidth_report(g);
    let lower = clique_number(g) - 1;
    let mut b = ThresholdBounds {
        graph: crate::degree::graph_id(g),
        lower,
        upper: tw.width,
        upper_mode: tw.mode,
        exact: None,
        evidence: Vec::new(),
    };
    settle(&mut b);
    Ok(b)
}

fn settle(b: &mut ThresholdBounds) {
    b.exact = (b.lower == b.upper).then_some(b.lower);
}

/// Rank-one samples whose neighborhoods have no strictly CND completion on
/// the four-cycle; each is checked at itself and eight perturbations.
pub const C4_COUNTEREXAMPLES: [(f64, f64); 1] = [(0.0, 0.5)];

/// Bounds refined by the elimination surrogate at rank `r` (when given) and,
/// for four-cycles, by the rank-one counterexample.
pub fn emlt_bounds_with_evidence(
    g: &UndirectedGraph,
    elimination: Option<(usize, usize, u64)>,
) -> Result<ThresholdBounds, ThresholdError> {
    let mut b = emlt_bounds(g)?;
    if let Some((r, trials, seed)) = elimination {
        let rep = elimination_surrogate(g, r, trials, seed)?;
        if rep.verdict == Verdict::ZeroIdealLikely && r < b.upper {
            b.upper = r;
        }
        b.evidence.push(Evidence::Elimination(rep));
    }
    if recognize_cycle(g) == Some(4) && b.lower < 2 {
        let mut experiments = Vec::new();
        let mut all_fail = true;
        for &(x2, x3) in &C4_COUNTEREXAMPLES {
            for (dx, dy) in perturbations(1e-3) {
                let e = cycle4_rank1_experiment(x2 + dx, x3 + dy)?;
                all_fail &= e.outcome == C4Outcome::NoCndSolution;
                experiments.push(e);
            }
        }
        if all_fail {
            b.lower = 2;
        }
        b.evidence.push(Evidence::Counterexample { r: 1, experiments });
    }
    b.lower = b.lower.min(b.upper);
    settle(&mut b);
    Ok(b)
}

/// The origin and the eight neighbours at distance `h` on a square grid.
pub fn perturbations(h: f64) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0)];
    for dx in [-h, 0.0, h] {
        for dy in [-h, 0.0, h] {
            if dx != 0.0 || dy != 0.0 {
                out.push((dx, dy));
            }
        }
    }
    out
}
