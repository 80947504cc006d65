//! Surrogate maximum likelihood by conditionally negative definite matrix
//! completion.
//!
//! Given edge entries `Γ̊_e`, find a strictly CND Γ̂ that matches them on the
//! edges and whose Laplacian `Θ̂ = θ(Γ̂)` vanishes on the nonedges. Chordal
//! graphs have a closed form assembled from clique blocks; graphs with
//! clique separators split into smaller problems; prime blocks are solved by
//! Newton ascent on
//!
//! ```text
//! f(q) = log Det Θ(q) − Σ_e q_e Γ̊_e,    Θ(q) = Σ_e q_e L_e,
//! ```
//!
//! whose stationarity condition is exactly `γ(Θ⁺)_e = Γ̊_e` on every edge.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{
    self, chordal_decomposition, clique_separators, is_chordal, min_fill_cover, GraphError,
    GraphJson, UndirectedGraph, VertexSet,
};
use crate::linalg::{self, ones_complement_basis, spd_inverse_logdet, sym_eigen_sorted, Tolerance};
use crate::varalg::{
    cnd_certificate, gamma_matrix, theta_of_gamma, SignedLaplacian, VarAlgError, Variogram,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompletionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    VarAlg(#[from] VarAlgError),
    #[error("no value given for edge ({0}, {1})")]
    MissingEntry(usize, usize),
    #[error("entry ({0}, {1}) is not an edge of the graph")]
    NotAnEdge(usize, usize),
    #[error("entry ({0}, {1}) is not finite")]
    NonFinite(usize, usize),
    #[error("clique block {0} is not strictly conditionally negative definite")]
    CliqueBlockNotCnd(VertexSet),
    #[error("{0} and {1} do not form a two-clique cover of the graph")]
    NotTwoCliqueCover(VertexSet, VertexSet),
    #[error("graph has {graph} vertices but the variogram has {gamma}")]
    SizeMismatch { graph: usize, gamma: usize },
    #[error("starting weights lie outside the positive-definite cone")]
    InfeasibleStart,
    #[error("no feasible ascent step from the current iterate")]
    LeftCone,
}

/// Edge-indexed partial variogram. Nonedge entries are unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialVariogram {
    graph: UndirectedGraph,
    /// Known values on edges, zero elsewhere.
    values: DMatrix<f64>,
}

impl PartialVariogram {
    /// Requires a value for every edge and nothing else; checks that every
    /// maximal clique block is strictly CND.
    pub fn new(graph: UndirectedGraph, entries: &[(usize, usize, f64)]) -> Result<Self, CompletionError> {
        let d = graph.num_vertices();
        let mut values = DMatrix::zeros(d, d);
        let mut seen = UndirectedGraph::empty(d);
        for &(i, j, v) in entries {
            if !graph.has_edge(i, j) {
                return Err(CompletionError::NotAnEdge(i, j));
            }
            if !v.is_finite() {
                return Err(CompletionError::NonFinite(i, j));
            }
            values[(i - 1, j - 1)] = v;
            values[(j - 1, i - 1)] = v;
            seen = seen.with_edge(i, j);
        }
        if let Some(&(i, j)) = graph.edges().iter().find(|&&(i, j)| !seen.has_edge(i, j)) {
            return Err(CompletionError::MissingEntry(i, j));
        }
        let p = PartialVariogram { graph, values };
        p.check_clique_blocks()?;
        Ok(p)
    }

    /// Restriction of a full variogram to the edges of `graph`.
    pub fn from_variogram(graph: UndirectedGraph, gamma: &Variogram) -> Result<Self, CompletionError> {
        if graph.num_vertices() != gamma.d() {
            return Err(CompletionError::SizeMismatch { graph: graph.num_vertices(), gamma: gamma.d() });
        }
        let entries: Vec<_> = graph
            .edges()
            .into_iter()
            .map(|(i, j)| (i, j, gamma.get(i, j)))
            .collect();
        PartialVariogram::new(graph, &entries)
    }

    fn check_clique_blocks(&self) -> Result<(), CompletionError> {
        for c in graphs::maximal_cliques(&self.graph) {
            if c.len() >= 2 && !cnd_certificate(&self.block(c), Tolerance::default()).is_strict() {
                return Err(CompletionError::CliqueBlockNotCnd(c));
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    pub fn d(&self) -> usize {
        self.graph.num_vertices()
    }

    /// Known value for a 1-based pair, `None` off the edges.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.graph.has_edge(i, j).then(|| self.values[(i - 1, j - 1)])
    }

    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        self.graph
            .edges()
            .into_iter()
            .map(|(i, j)| (i, j, self.values[(i - 1, j - 1)]))
            .collect()
    }

    /// Principal block on a clique (all its entries are known).
    fn block(&self, clique: VertexSet) -> Variogram {
        let idx = clique.indices();
        Variogram::new(linalg::select(&self.values, &idx, &idx)).expect("symmetric hollow block")
    }

    fn max_abs_known(&self) -> f64 {
        linalg::max_abs(&self.values)
    }

    /// Sub-problem on `set`, relabeled to `1..=|set|` in increasing order.
    fn restrict(&self, set: VertexSet) -> PartialVariogram {
        let (graph, _) = self.graph.induced(set);
        let idx = set.indices();
        PartialVariogram {
            values: linalg::select(&self.values, &idx, &idx),
            graph,
        }
    }
}

/// Wire form `{"graph": {...}, "entries": [[i, j, value], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartialVariogramJson {
    pub graph: GraphJson,
    pub entries: Vec<(usize, usize, f64)>,
}

impl Serialize for PartialVariogram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PartialVariogramJson {
            graph: GraphJson::from(&self.graph),
            entries: self.entries(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartialVariogram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = PartialVariogramJson::deserialize(d)?;
        let g = UndirectedGraph::try_from(j.graph).map_err(serde::de::Error::custom)?;
        PartialVariogram::new(g, &j.entries).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompletionStatus {
    Converged,
    #[serde(rename = "no_cnd_solution")]
    NoCndSolution,
    MaxIterations,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Auto,
    Chordal,
    TwoClique,
    General,
    Decomposed,
}

/// Which clique separator the decomposer splits on when several exist.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparatorChoice {
    /// Smallest separator, lexicographic tie-break.
    #[default]
    First,
    /// The last one in that order.
    Last,
}

/// Starting point of the iterative solver.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Initialization {
    /// Chordal-cover warm start, falling back to scaled unit weights.
    #[default]
    WarmStart,
    /// `q_e = c` for the `c` maximizing the objective along the unit ray.
    UnitWeights,
    /// Explicit edge weights in the order of `graph.edges()`.
    Weights(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompletionOptions {
    /// Converged when the largest edge residual is at most `tol · max|Γ̊|`.
    pub tol: f64,
    pub max_iter: usize,
    /// Declares no interior solution when `λ_min / λ_max` of Θ on 1⊥ drops below this.
    pub boundary_tol: f64,
    pub rank_tol: Tolerance,
    pub separator: SeparatorChoice,
    pub init: Initialization,
}

impl Default for CompletionOptions {
    fn default() -> Self {
        CompletionOptions {
            tol: 1e-8,
            max_iter: 10_000,
            boundary_tol: 1e-8,
            rank_tol: Tolerance::default(),
            separator: SeparatorChoice::First,
            init: Initialization::WarmStart,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompletionResult {
    pub gamma: Variogram,
    pub theta: SignedLaplacian,
    pub status: CompletionStatus,
    pub method: Method,
    /// `max_{e ∈ E} |Γ̂_e − Γ̊_e|`
    pub edge_residual: f64,
    /// `max_{(i,j) ∉ E} |Θ̂_ij|`
    pub nonedge_residual: f64,
    pub iterations: usize,
    /// Objective after each accepted iterate (empty for closed forms).
    pub objective_trace: Vec<f64>,
    /// `λ_min / λ_max` of Θ̂ on 1⊥ at the returned iterate.
    pub conditioning: f64,
}

/// Adds `sign · block` into `target` at the indices of `set`.
fn embed_into(target: &mut DMatrix<f64>, set: VertexSet, block: &DMatrix<f64>, sign: f64) {
    let idx = set.indices();
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            target[(i, j)] += sign * block[(a, b)];
        }
    }
}

/// `Σ_C [θ(Γ̊_CC)]^d − Σ_S ν(S) [θ(Γ̊_SS)]^d`, summed in a canonical order
/// (cliques, then separators, each sorted) so equal inputs give identical bits.
fn assemble(
    p: &PartialVariogram,
    cliques: &[VertexSet],
    separators: &[(VertexSet, usize)],
    tol: Tolerance,
) -> Result<DMatrix<f64>, CompletionError> {
    let d = p.d();
    let mut cliques = cliques.to_vec();
    cliques.sort();
    let mut separators = separators.to_vec();
    separators.sort();
    let mut theta = DMatrix::zeros(d, d);
    for &c in &cliques {
        let t = theta_of_gamma(&p.block(c), tol).map_err(|_| CompletionError::CliqueBlockNotCnd(c))?;
        embed_into(&mut theta, c, t.matrix(), 1.0);
    }
    for &(s, nu) in &separators {
        let t = theta_of_gamma(&p.block(s), tol).map_err(|_| CompletionError::CliqueBlockNotCnd(s))?;
        embed_into(&mut theta, s, t.matrix(), nu as f64);
        // Subtract rather than add a negative multiple: keeps the sum exact
        // when ν = 1 and the separator block equals a clique block.
        embed_into(&mut theta, s, &(t.matrix() * (2.0 * nu as f64)), -1.0);
    }
    Ok(theta)
}

/// Packages a Laplacian estimate: Γ̂ = γ(Θ̂⁺) and the residuals.
fn finish(
    p: &PartialVariogram,
    theta: DMatrix<f64>,
    status: CompletionStatus,
    method: Method,
    iterations: usize,
    objective_trace: Vec<f64>,
    tol: Tolerance,
) -> Result<CompletionResult, CompletionError> {
    let theta = linalg::symmetrize(&theta);
    let vals = linalg::restricted_eigenvalues(&theta);
    let conditioning = match (vals.iter().next(), vals.iter().next_back()) {
        (Some(&lo), Some(&hi)) if hi > 0.0 => lo / hi,
        _ => 1.0,
    };
    // Iterates stopped at the boundary are ill-conditioned but still
    // invertible on 1⊥; only fall back to the rank-checked inverse otherwise.
    let v = ones_complement_basis(theta.nrows());
    let sigma = match spd_inverse_logdet(&(v.transpose() * &theta * &v)) {
        Some((inv, _)) if status != CompletionStatus::Converged => &v * inv * v.transpose(),
        _ => SignedLaplacian::from_matrix_unchecked(theta.clone()).pseudo_inverse(tol)?,
    };
    let gamma = Variogram::new(gamma_matrix(&sigma))?;
    let edge_residual = p
        .graph
        .edges()
        .into_iter()
        .map(|(i, j)| (gamma.get(i, j) - p.values[(i - 1, j - 1)]).abs())
        .fold(0.0, f64::max);
    let nonedge_residual = p
        .graph
        .non_edges()
        .into_iter()
        .map(|(i, j)| theta[(i - 1, j - 1)].abs())
        .fold(0.0, f64::max);
    Ok(CompletionResult {
        gamma,
        theta: SignedLaplacian::from_matrix_unchecked(theta),
        status,
        method,
        edge_residual,
        nonedge_residual,
        iterations,
        objective_trace,
        conditioning,
    })
}

/// Closed form for connected chordal graphs.
pub fn complete_chordal(p: &PartialVariogram, opts: &CompletionOptions) -> Result<CompletionResult, CompletionError> {
    let theta = chordal_theta(p, opts.rank_tol)?;
    finish(p, theta, CompletionStatus::Converged, Method::Chordal, 0, Vec::new(), opts.rank_tol)
}

fn chordal_theta(p: &PartialVariogram, tol: Tolerance) -> Result<DMatrix<f64>, CompletionError> {
    let dec = chordal_decomposition(&p.graph)?;
    let seps: Vec<_> = dec.separators.iter().map(|s| (s.set, s.multiplicity)).collect();
    assemble(p, &dec.cliques, &seps, tol)
}

/// Closed form when the graph is the union of two cliques `A` and `B`
/// covering every vertex and every edge.
pub fn complete_two_clique(
    p: &PartialVariogram,
    a: VertexSet,
    b: VertexSet,
    opts: &CompletionOptions,
) -> Result<CompletionResult, CompletionError> {
    let g = &p.graph;
    let covers = a.union(b) == g.vertices()
        && g.is_clique(a)
        && g.is_clique(b)
        && g.edges().iter().all(|&(i, j)| {
            (a.contains(i) && a.contains(j)) || (b.contains(i) && b.contains(j))
        });
    if !covers {
        return Err(CompletionError::NotTwoCliqueCover(a, b));
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let theta = if b.is_subset(a) {
        assemble(p, &[a], &[], opts.rank_tol)?
    } else if a.is_subset(b) {
        assemble(p, &[b], &[], opts.rank_tol)?
    } else {
        let s = a.intersection(b);
        assemble(p, &[a, b], &[(s, 1)], opts.rank_tol)?
    };
    finish(p, theta, CompletionStatus::Converged, Method::TwoClique, 0, Vec::new(), opts.rank_tol)
}

/// Newton ascent on the surrogate log-likelihood over edge weights.
pub fn complete_general(p: &PartialVariogram, opts: &CompletionOptions) -> Result<CompletionResult, CompletionError> {
    if !p.graph.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let d = p.d();
    if d == 1 {
        return finish(p, DMatrix::zeros(1, 1), CompletionStatus::Converged, Method::General, 0, Vec::new(), opts.rank_tol);
    }
    let solver = NewtonSolver::new(p);
    let q0 = match &opts.init {
        Initialization::WarmStart => solver.warm_start(p, opts.rank_tol),
        Initialization::UnitWeights => solver.unit_start(),
        Initialization::Weights(w) => {
            if w.len() != solver.edges.len() {
                return Err(CompletionError::InfeasibleStart);
            }
            DVector::from_column_slice(w)
        }
    };
    let out = solver.run(q0, opts)?;
    let theta = solver.laplacian(&out.q);
    finish(p, theta, out.status, Method::General, out.iterations, out.trace, opts.rank_tol)
}

struct NewtonOutcome {
    q: DVector<f64>,
    status: CompletionStatus,
    iterations: usize,
    trace: Vec<f64>,
}

/// Evaluation state at one iterate.
struct Eval {
    objective: f64,
    sigma: DMatrix<f64>,
    conditioning: f64,
}

struct NewtonSolver {
    d: usize,
    edges: Vec<(usize, usize)>,
    targets: DVector<f64>,
    scale: f64,
    basis: DMatrix<f64>,
}

impl NewtonSolver {
    fn new(p: &PartialVariogram) -> Self {
        let edges: Vec<(usize, usize)> = p.graph.edges().into_iter().map(|(i, j)| (i - 1, j - 1)).collect();
        let targets = DVector::from_iterator(edges.len(), edges.iter().map(|&(i, j)| p.values[(i, j)]));
        NewtonSolver {
            d: p.d(),
            scale: p.max_abs_known().max(f64::MIN_POSITIVE),
            basis: ones_complement_basis(p.d()),
            edges,
            targets,
        }
    }

    fn laplacian(&self, q: &DVector<f64>) -> DMatrix<f64> {
        let mut theta = DMatrix::zeros(self.d, self.d);
        for (k, &(i, j)) in self.edges.iter().enumerate() {
            theta[(i, i)] += q[k];
            theta[(j, j)] += q[k];
            theta[(i, j)] -= q[k];
            theta[(j, i)] -= q[k];
        }
        theta
    }

    /// `None` when Θ(q) is not positive definite on 1⊥.
    fn evaluate(&self, q: &DVector<f64>) -> Option<Eval> {
        let theta = self.laplacian(q);
        let inner = self.basis.transpose() * &theta * &self.basis;
        let (inv, logdet) = spd_inverse_logdet(&inner)?;
        let vals = sym_eigen_sorted(&inner).0;
        let conditioning = vals[0] / vals[vals.len() - 1];
        let sigma = &self.basis * inv * self.basis.transpose();
        Some(Eval {
            objective: logdet - q.dot(&self.targets),
            sigma,
            conditioning,
        })
    }

    /// `γ(Σ)_e − Γ̊_e`.
    fn gradient(&self, sigma: &DMatrix<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.edges.len(),
            self.edges.iter().enumerate().map(|(k, &(i, j))| {
                sigma[(i, i)] + sigma[(j, j)] - 2.0 * sigma[(i, j)] - self.targets[k]
            }),
        )
    }

    /// `M ∘ M` with `M = UᵀΣU`, the negated Hessian.
    fn neg_hessian(&self, sigma: &DMatrix<f64>) -> DMatrix<f64> {
        let m = self.edges.len();
        let s = |a: usize, b: usize| sigma[(a, b)];
        DMatrix::from_fn(m, m, |x, y| {
            let (i, j) = self.edges[x];
            let (k, l) = self.edges[y];
            let v = s(i, k) - s(i, l) - s(j, k) + s(j, l);
            v * v
        })
    }

    fn unit_start(&self) -> DVector<f64> {
        let total: f64 = self.targets.sum();
        let c = if total > 0.0 { (self.d - 1) as f64 / total } else { 1.0 };
        DVector::from_element(self.edges.len(), c)
    }

    /// Laplacian of a chordal-cover completion, truncated to the edges.
    fn warm_start(&self, p: &PartialVariogram, tol: Tolerance) -> DVector<f64> {
        let fallback = self.unit_start();
        let Some(theta) = cover_laplacian(p, tol) else {
            return fallback;
        };
        let q = DVector::from_iterator(self.edges.len(), self.edges.iter().map(|&(i, j)| -theta[(i, j)]));
        if self.evaluate(&q).is_some() {
            q
        } else {
            fallback
        }
    }

    fn run(&self, q0: DVector<f64>, opts: &CompletionOptions) -> Result<NewtonOutcome, CompletionError> {
        let mut q = q0;
        let mut state = self.evaluate(&q).ok_or(CompletionError::InfeasibleStart)?;
        let mut trace = vec![state.objective];
        let target_res = opts.tol * self.scale;
        for it in 0..=opts.max_iter {
            if state.conditioning < opts.boundary_tol {
                return Ok(NewtonOutcome { q, status: CompletionStatus::NoCndSolution, iterations: it, trace });
            }
            let grad = self.gradient(&state.sigma);
            if grad.amax() <= target_res {
                return Ok(NewtonOutcome { q, status: CompletionStatus::Converged, iterations: it, trace });
            }
            if it == opts.max_iter {
                break;
            }
            let direction = match self.neg_hessian(&state.sigma).cholesky() {
                Some(ch) => ch.solve(&grad),
                None => grad.clone(),
            };
            let slope = grad.dot(&direction);
            let slack = 1e-13 * state.objective.abs().max(1.0);
            let mut t = 1.0;
            let mut accepted = None;
            for _ in 0..60 {
                let trial = &q + &direction * t;
                if let Some(next) = self.evaluate(&trial) {
                    if next.objective >= state.objective + 1e-4 * t * slope - slack {
                        accepted = Some((trial, next));
                        break;
                    }
                }
                t *= 0.5;
            }
            let Some((trial, next)) = accepted else {
                return Err(CompletionError::LeftCone);
            };
            q = trial;
            // Rounding can dip the objective by at most `slack`; the trace
            // records the running maximum so it stays monotone.
            let last = *trace.last().expect("nonempty trace");
            trace.push(next.objective.max(last));
            state = next;
        }
        Ok(NewtonOutcome { q, status: CompletionStatus::MaxIterations, iterations: opts.max_iter, trace })
    }
}

/// θ of a completion of a min-fill chordal cover whose fill entries are
/// squared shortest-path lengths under edge lengths `√Γ̊_e`.
fn cover_laplacian(p: &PartialVariogram, tol: Tolerance) -> Option<DMatrix<f64>> {
    let g = &p.graph;
    let d = p.d();
    let (_, cover) = min_fill_cover(g);
    // Floyd–Warshall on √Γ̊ lengths.
    let mut dist = DMatrix::from_element(d, d, f64::INFINITY);
    for i in 0..d {
        dist[(i, i)] = 0.0;
    }
    for (i, j) in g.edges() {
        let w = p.values[(i - 1, j - 1)].max(0.0).sqrt();
        dist[(i - 1, j - 1)] = w;
        dist[(j - 1, i - 1)] = w;
    }
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                let via = dist[(i, k)] + dist[(k, j)];
                if via < dist[(i, j)] {
                    dist[(i, j)] = via;
                }
            }
        }
    }
    let entries: Vec<_> = cover
        .edges()
        .into_iter()
        .map(|(i, j)| {
            let v = p.get(i, j).unwrap_or_else(|| dist[(i - 1, j - 1)].powi(2));
            (i, j, v)
        })
        .collect();
    let filled = PartialVariogram::new(cover, &entries).ok()?;
    chordal_theta(&filled, tol).ok()
}

/// Splits along clique separators, solving each piece by the chordal formula
/// or the Newton solver, and merges `Θ̂ = [Θ̂_{A∪C}] + [Θ̂_{B∪C}] − [θ(Γ̊_CC)]`.
pub fn complete_decomposed(p: &PartialVariogram, opts: &CompletionOptions) -> Result<CompletionResult, CompletionError> {
    if !p.graph.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let mut stats = SolveStats::default();
    let theta = decomposed_theta(p, opts, &mut stats)?;
    let status = if stats.no_cnd {
        CompletionStatus::NoCndSolution
    } else if stats.max_iter {
        CompletionStatus::MaxIterations
    } else {
        CompletionStatus::Converged
    };
    finish(p, theta, status, Method::Decomposed, stats.iterations, stats.trace, opts.rank_tol)
}

#[derive(Default)]
struct SolveStats {
    iterations: usize,
    no_cnd: bool,
    max_iter: bool,
    trace: Vec<f64>,
}

fn decomposed_theta(
    p: &PartialVariogram,
    opts: &CompletionOptions,
    stats: &mut SolveStats,
) -> Result<DMatrix<f64>, CompletionError> {
    let g = &p.graph;
    if g.is_complete() || is_chordal(g) {
        return chordal_theta(p, opts.rank_tol);
    }
    let splits = clique_separators(g)?;
    let split = match opts.separator {
        SeparatorChoice::First => splits.first(),
        SeparatorChoice::Last => splits.last(),
    };
    let Some(split) = split else {
        let r = complete_general(p, opts)?;
        stats.iterations += r.iterations;
        stats.no_cnd |= r.status == CompletionStatus::NoCndSolution;
        stats.max_iter |= r.status == CompletionStatus::MaxIterations;
        stats.trace.extend(r.objective_trace);
        return Ok(r.theta.into_matrix());
    };
    let left = decomposed_theta(&p.restrict(split.left), opts, stats)?;
    let right = decomposed_theta(&p.restrict(split.right), opts, stats)?;
    let sep = theta_of_gamma(&p.block(split.separator), opts.rank_tol)
        .map_err(|_| CompletionError::CliqueBlockNotCnd(split.separator))?;
    let mut theta = DMatrix::zeros(p.d(), p.d());
    embed_into(&mut theta, split.left, &left, 1.0);
    embed_into(&mut theta, split.right, &right, 1.0);
    embed_into(&mut theta, split.separator, sep.matrix(), -1.0);
    Ok(theta)
}

/// Chordal formula when the graph is chordal, clique-separator recursion otherwise.
pub fn complete_auto(p: &PartialVariogram, opts: &CompletionOptions) -> Result<CompletionResult, CompletionError> {
    if is_chordal(&p.graph) {
        complete_chordal(p, opts)
    } else {
        complete_decomposed(p, opts)
    }
}

/// Dispatches on `method`; [`Method::TwoClique`] uses the two largest maximal cliques.
pub fn complete(p: &PartialVariogram, method: Method, opts: &CompletionOptions) -> Result<CompletionResult, CompletionError> {
    match method {
        Method::Auto => complete_auto(p, opts),
        Method::Chordal => complete_chordal(p, opts),
        Method::General => complete_general(p, opts),
        Method::Decomposed => complete_decomposed(p, opts),
        Method::TwoClique => {
            let cliques = graphs::maximal_cliques(&p.graph);
            match cliques.as_slice() {
                [a] => complete_two_clique(p, *a, *a, opts),
                [a, b] => complete_two_clique(p, *a, *b, opts),
                _ => Err(CompletionError::NotTwoCliqueCover(VertexSet::EMPTY, VertexSet::EMPTY)),
            }
        }
    }
}

/// The surrogate objective `log Det Θ − Σ_e q_e Γ̊_e` for edge weights in
/// `graph.edges()` order; `None` outside the cone.
pub fn surrogate_objective(p: &PartialVariogram, q: &[f64]) -> Option<f64> {
    let s = NewtonSolver::new(p);
    s.evaluate(&DVector::from_column_slice(q)).map(|e| e.objective)
}

/// Analytic gradient `γ(Θ⁺)_e − Γ̊_e` at `q`; `None` outside the cone.
pub fn surrogate_gradient(p: &PartialVariogram, q: &[f64]) -> Option<Vec<f64>> {
    let s = NewtonSolver::new(p);
    s.evaluate(&DVector::from_column_slice(q))
        .map(|e| s.gradient(&e.sigma).iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn opts() -> CompletionOptions {
        CompletionOptions::default()
    }

    fn path_partial() -> PartialVariogram {
        PartialVariogram::new(UndirectedGraph::path(3), &[(1, 2, 9.0), (2, 3, 16.0)]).unwrap()
    }

    fn max_diff(a: &Variogram, b: &Variogram) -> f64 {
        linalg::max_abs(&(a.matrix() - b.matrix()))
    }

    #[test]
    fn path_completes_to_right_triangle() {
        let r = complete_chordal(&path_partial(), &opts()).unwrap();
        assert!((r.gamma.get(1, 3) - 25.0).abs() < 1e-12);
        assert!((r.theta.edge_weight(1, 2) - 1.0 / 9.0).abs() < 1e-15);
        assert!((r.theta.edge_weight(2, 3) - 1.0 / 16.0).abs() < 1e-15);
        assert_eq!(r.status, CompletionStatus::Converged);
        let two = complete_two_clique(&path_partial(), VertexSet::from_labels([1, 2]), VertexSet::from_labels([2, 3]), &opts()).unwrap();
        assert_eq!(two.theta, r.theta);
        assert_eq!(two.gamma, r.gamma);
    }

    #[test]
    fn fish_model_point_is_recovered() {
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        let g = UndirectedGraph::fish();
        for _ in 0..10 {
            let truth = model::model_point(&g, &mut rng);
            let p = PartialVariogram::from_variogram(g.clone(), &truth).unwrap();
            let r = complete_chordal(&p, &opts()).unwrap();
            assert!(max_diff(&r.gamma, &truth) < 1e-10 * linalg::max_abs(truth.matrix()));
            assert!(r.nonedge_residual < 1e-12);
            let dec = complete_decomposed(&p, &opts()).unwrap();
            assert!(max_diff(&dec.gamma, &truth) < 1e-9);
        }
    }

    #[test]
    fn complete_graph_returns_input() {
        let mut rng = ChaCha20Rng::seed_from_u64(32);
        let truth = model::generic_variogram(5, &mut rng);
        let p = PartialVariogram::from_variogram(UndirectedGraph::complete(5), &truth).unwrap();
        let r = complete_chordal(&p, &opts()).unwrap();
        assert!(max_diff(&r.gamma, &truth) < 1e-10 * linalg::max_abs(truth.matrix()));
        let all = VertexSet::full(5);
        let t = complete_two_clique(&p, all, all, &opts()).unwrap();
        assert!(max_diff(&t.gamma, &truth) < 1e-10 * linalg::max_abs(truth.matrix()));
    }

    #[test]
    fn glued_triangles_two_clique_matches_chordal_bitwise() {
        let mut rng = ChaCha20Rng::seed_from_u64(33);
        let g = UndirectedGraph::new(4, &[(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]).unwrap();
        let truth = model::model_point(&g, &mut rng);
        let p = PartialVariogram::from_variogram(g, &truth).unwrap();
        let a = complete_chordal(&p, &opts()).unwrap();
        let b = complete_two_clique(&p, VertexSet::from_labels([1, 2, 3]), VertexSet::from_labels([2, 3, 4]), &opts()).unwrap();
        assert_eq!(a.theta, b.theta);
        assert!(max_diff(&a.gamma, &truth) < 1e-10);
        assert!(matches!(
            complete_two_clique(&p, VertexSet::from_labels([1, 2]), VertexSet::from_labels([2, 3, 4]), &opts()),
            Err(CompletionError::NotTwoCliqueCover(..))
        ));
    }

    #[test]
    fn four_cycle_model_point_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(34);
        let g = UndirectedGraph::cycle(4);
        for _ in 0..10 {
            let truth = model::model_point(&g, &mut rng);
            let p = PartialVariogram::from_variogram(g.clone(), &truth).unwrap();
            let r = complete_general(&p, &opts()).unwrap();
            assert_eq!(r.status, CompletionStatus::Converged);
            assert!(max_diff(&r.gamma, &truth) < 1e-8, "{}", max_diff(&r.gamma, &truth));
            assert!(r.edge_residual < 1e-8);
            assert!(r.objective_trace.windows(2).all(|w| w[1] >= w[0]));
        }
    }

    #[test]
    fn rank_one_four_cycle_samples() {
        let g = UndirectedGraph::cycle(4);
        let complete_for = |v: [f64; 4]| {
            let pts = DMatrix::from_row_slice(1, 4, &v);
            let gamma = Variogram::from_points(&pts);
            let p = PartialVariogram::from_variogram(g.clone(), &gamma).unwrap();
            complete_general(&p, &opts()).unwrap()
        };
        // Walk the cycle 1-2-3-4 in the order of the points (1, x3, x2, −1−x2−x3).
        let r = complete_for([1.0, 2.0, 0.0, -3.0]);
        assert_eq!(r.status, CompletionStatus::Converged);
        assert!(cnd_certificate(&r.gamma, Tolerance::default()).is_strict());
        let r = complete_for([1.0, 0.5, 0.0, -1.5]);
        assert_eq!(r.status, CompletionStatus::NoCndSolution);
    }

    #[test]
    fn general_solver_agrees_with_closed_form_on_chordal_graphs() {
        let mut rng = ChaCha20Rng::seed_from_u64(35);
        for g in [UndirectedGraph::fish(), UndirectedGraph::path(5)] {
            let truth = model::model_point(&g, &mut rng);
            let p = PartialVariogram::from_variogram(g.clone(), &truth).unwrap();
            let a = complete_chordal(&p, &opts()).unwrap();
            let b = complete_general(&p, &opts()).unwrap();
            assert!(max_diff(&a.gamma, &b.gamma) < 1e-8);
        }
    }

    #[test]
    fn solver_is_unique_from_random_starts() {
        let mut rng = ChaCha20Rng::seed_from_u64(36);
        let g = UndirectedGraph::cycle(5);
        let truth = model::model_point(&g, &mut rng);
        let p = PartialVariogram::from_variogram(g.clone(), &truth).unwrap();
        let reference = complete_general(&p, &opts()).unwrap();
        for _ in 0..5 {
            let w: Vec<f64> = (0..g.num_edges()).map(|_| rng.random_range(0.1..3.0)).collect();
            let o = CompletionOptions { init: Initialization::Weights(w), ..opts() };
            let r = complete_general(&p, &o).unwrap();
            assert!(max_diff(&r.gamma, &reference.gamma) < 1e-6);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha20Rng::seed_from_u64(37);
        let g = UndirectedGraph::cycle(5);
        let truth = model::generic_variogram(5, &mut rng);
        let p = PartialVariogram::from_variogram(g.clone(), &truth).unwrap();
        let q: Vec<f64> = (0..5).map(|_| rng.random_range(0.5..2.0)).collect();
        let grad = surrogate_gradient(&p, &q).unwrap();
        let h = 1e-6;
        for e in 0..5 {
            let mut plus = q.clone();
            let mut minus = q.clone();
            plus[e] += h;
            minus[e] -= h;
            let fd = (surrogate_objective(&p, &plus).unwrap() - surrogate_objective(&p, &minus).unwrap()) / (2.0 * h);
            assert!((fd - grad[e]).abs() <= 1e-5 * grad[e].abs().max(1.0), "{fd} vs {}", grad[e]);
        }
    }

    #[test]
    fn glued_four_cycles() {
        let mut rng = ChaCha20Rng::seed_from_u64(38);
        // 1-2-3-4-1 and 3-4-5-6-3 share the edge {3,4}.
        let g = UndirectedGraph::new(6, &[(1, 2), (2, 3), (3, 4), (1, 4), (4, 5), (5, 6), (3, 6)]).unwrap();
        let truth = model::model_point(&g, &mut rng);
        let p = PartialVariogram::from_variogram(g.clone(), &truth).unwrap();
        let first = complete_decomposed(&p, &opts()).unwrap();
        assert!(first.edge_residual < 1e-8 && first.nonedge_residual < 1e-8);
        assert!(max_diff(&first.gamma, &truth) < 1e-7);
        let last = complete_decomposed(&p, &CompletionOptions { separator: SeparatorChoice::Last, ..opts() }).unwrap();
        assert!(max_diff(&first.gamma, &last.gamma) < 1e-8);
        let general = complete_general(&p, &opts()).unwrap();
        assert!(max_diff(&first.gamma, &general.gamma) < 1e-7);
    }

    #[test]
    fn input_validation() {
        let g = UndirectedGraph::path(3);
        assert_eq!(PartialVariogram::new(g.clone(), &[(1, 2, 1.0)]), Err(CompletionError::MissingEntry(2, 3)));
        assert_eq!(
            PartialVariogram::new(g.clone(), &[(1, 2, 1.0), (2, 3, 1.0), (1, 3, 1.0)]),
            Err(CompletionError::NotAnEdge(1, 3))
        );
        assert!(matches!(
            PartialVariogram::new(g.clone(), &[(1, 2, -1.0), (2, 3, 1.0)]),
            Err(CompletionError::CliqueBlockNotCnd(_))
        ));
        let c4 = PartialVariogram::new(UndirectedGraph::cycle(4), &[(1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (1, 4, 1.0)]).unwrap();
        assert!(matches!(complete_chordal(&c4, &opts()), Err(CompletionError::Graph(GraphError::NotChordal))));
    }

    #[test]
    fn partial_json_round_trip() {
        let text = serde_json::to_string(&path_partial()).unwrap();
        assert_eq!(text, r#"{"graph":{"d":3,"edges":[[1,2],[2,3]]},"entries":[[1,2,9.0],[2,3,16.0]]}"#);
        let back: PartialVariogram = serde_json::from_str(&text).unwrap();
        assert_eq!(back, path_partial());
    }
}
