//! Extremal conditional independence for Hüsler–Reiss variograms.
//!
//! `A ⟂ B | C` holds at Γ exactly when the bordered block
//! `CM(Γ_{A∪C, B∪C})` has rank `#C + 1`. The determinantal generators are the
//! bordered minors `det CM(Γ_{A', B'})` with `#A' = #B' = #C + 1`; they vanish
//! together with the rank condition and are evaluated here point-wise.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{GraphError, UndirectedGraph, VertexSet};
use crate::linalg::{self, Tolerance};
use crate::varalg::{cayley_menger_block, theta_of_gamma, CmVariant, VarAlgError, Variogram};

/// Largest vertex count [`separation_statements`] enumerates.
pub const STATEMENT_VERTEX_CAP: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EciError {
    #[error("invalid statement: {0}")]
    InvalidStatement(String),
    #[error("statement enumeration is limited to {STATEMENT_VERTEX_CAP} vertices (got {0})")]
    SizeCap(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    VarAlg(#[from] VarAlgError),
}

/// `A ⟂ B | C` over 1-based labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CiStatement {
    #[serde(rename = "A")]
    pub a: VertexSet,
    #[serde(rename = "B")]
    pub b: VertexSet,
    #[serde(rename = "C")]
    pub c: VertexSet,
}

impl CiStatement {
    pub fn new(a: &[usize], b: &[usize], c: &[usize]) -> Self {
        CiStatement {
            a: VertexSet::from_labels(a.iter().copied()),
            b: VertexSet::from_labels(b.iter().copied()),
            c: VertexSet::from_labels(c.iter().copied()),
        }
    }

    /// Nonempty `A`, `B`, pairwise disjoint, all labels in `1..=d`.
    pub fn validate(&self, d: usize) -> Result<(), EciError> {
        let bad = |m: &str| Err(EciError::InvalidStatement(format!("{self}: {m}")));
        if self.a.is_empty() || self.b.is_empty() {
            return bad("A and B must be nonempty");
        }
        if !self.a.is_disjoint(self.b) || !self.a.is_disjoint(self.c) || !self.b.is_disjoint(self.c) {
            return bad("A, B, C must be pairwise disjoint");
        }
        if !self.a.union(self.b).union(self.c).is_subset(VertexSet::full(d)) {
            return bad("label outside the vertex range");
        }
        Ok(())
    }
}

/// Parses `A|B|C` with comma-separated labels, e.g. `1|3|2` or `1,2|4|`.
impl std::str::FromStr for CiStatement {
    type Err = EciError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split('|').collect();
        if parts.len() != 3 {
            return Err(EciError::InvalidStatement(format!("{s:?}: expected A|B|C")));
        }
        let mut sets = [VertexSet::EMPTY; 3];
        for (slot, part) in sets.iter_mut().zip(&parts) {
            for tok in part.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let v: usize = tok
                    .parse()
                    .map_err(|_| EciError::InvalidStatement(format!("{s:?}: bad label {tok:?}")))?;
                if v == 0 || v > crate::graphs::MAX_VERTICES {
                    return Err(EciError::InvalidStatement(format!("{s:?}: label {v} out of range")));
                }
                *slot = slot.with(v);
            }
        }
        Ok(CiStatement { a: sets[0], b: sets[1], c: sets[2] })
    }
}

impl std::fmt::Display for CiStatement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ⟂ {} | {}", self.a, self.b, self.c)
    }
}

/// Rank verdict for one statement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EciReport {
    pub statement: CiStatement,
    pub holds: bool,
    pub rank: usize,
    pub expected_rank: usize,
    /// Singular values of the bordered block, descending.
    pub singular_values: Vec<f64>,
    /// Absolute cutoff below which a singular value counts as zero.
    pub cutoff: f64,
}

/// Rank test of `CM(Γ_{A∪C, B∪C})` against `#C + 1`.
///
/// With `C = ∅` the statement never holds: the border alone forces rank 2.
pub fn test_eci(gamma: &Variogram, stmt: &CiStatement, tol: Tolerance) -> Result<EciReport, EciError> {
    stmt.validate(gamma.d())?;
    let rows = stmt.a.union(stmt.c).indices();
    let cols = stmt.b.union(stmt.c).indices();
    let cm = cayley_menger_block(gamma.matrix(), &rows, &cols, CmVariant::Standard);
    let singular_values = linalg::singular_values(&cm);
    let rank = linalg::rank_of_values(&singular_values, tol);
    let expected_rank = stmt.c.len() + 1;
    Ok(EciReport {
        statement: *stmt,
        holds: rank == expected_rank,
        rank,
        expected_rank,
        cutoff: tol.cutoff(singular_values.first().copied().unwrap_or(0.0)),
        singular_values,
    })
}

/// `i ⟂ j | V∖{i,j}` through the Laplacian: `|Θ_ij| ≤ tol · max|Θ|`.
pub fn saturated_pair_test(gamma: &Variogram, i: usize, j: usize, tol: Tolerance) -> Result<bool, EciError> {
    let d = gamma.d();
    if i == j || i == 0 || j == 0 || i > d || j > d {
        return Err(EciError::InvalidStatement(format!("pair ({i}, {j}) invalid for d = {d}")));
    }
    let theta = theta_of_gamma(gamma, tol)?;
    Ok(theta.matrix()[(i - 1, j - 1)].abs() <= tol.cutoff(linalg::max_abs(theta.matrix())))
}

/// Every `(A, B, C)` where `A` and `B` are distinct components of `g ∖ C`,
/// over all `C` with `#C ≤ d − 2`. Ordered by `C` (size, then lexicographic),
/// then by component order.
pub fn separation_statements(g: &UndirectedGraph) -> Result<Vec<CiStatement>, EciError> {
    let d = g.num_vertices();
    if d > STATEMENT_VERTEX_CAP {
        return Err(EciError::SizeCap(d));
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let mut seps: Vec<VertexSet> = (0u64..1 << d)
        .map(VertexSet::from_bits)
        .filter(|c| c.len() + 2 <= d)
        .collect();
    seps.sort_by(|a, b| a.cmp_size_lex(b));
    let mut out = Vec::new();
    for c in seps {
        let comps = g.components_within(g.vertices().difference(c));
        for x in 0..comps.len() {
            for y in x + 1..comps.len() {
                out.push(CiStatement {
                    a: comps[x],
                    b: comps[y],
                    c,
                });
            }
        }
    }
    Ok(out)
}

/// All `k`-subsets of `items`, lexicographic.
pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// One determinantal generator `det CM(Γ_{A', B'})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorAtom {
    #[serde(rename = "Aprime")]
    pub a_prime: Vec<usize>,
    #[serde(rename = "Bprime")]
    pub b_prime: Vec<usize>,
}

impl GeneratorAtom {
    pub fn evaluate(&self, gamma: &DMatrix<f64>) -> f64 {
        let rows: Vec<usize> = self.a_prime.iter().map(|v| v - 1).collect();
        let cols: Vec<usize> = self.b_prime.iter().map(|v| v - 1).collect();
        linalg::det(&cayley_menger_block(gamma, &rows, &cols, CmVariant::Standard))
    }
}

/// All `(A', B')` with `A' ⊆ A∪C`, `B' ⊆ B∪C`, `#A' = #B' = #C + 1`.
pub fn generator_atoms(stmt: &CiStatement) -> Vec<GeneratorAtom> {
    let s = stmt.c.len() + 1;
    let left = combinations(&stmt.a.union(stmt.c).to_vec(), s);
    let right = combinations(&stmt.b.union(stmt.c).to_vec(), s);
    let mut out = Vec::with_capacity(left.len() * right.len());
    for a in &left {
        for b in &right {
            out.push(GeneratorAtom {
                a_prime: a.clone(),
                b_prime: b.clone(),
            });
        }
    }
    out
}

/// Largest `|det CM(Γ_{A'', B''})|` over all `A'', B'' ⊆ V` of size `s`.
///
/// Every such bordered minor scales like `c^(s-1)` under `Γ ↦ cΓ`, so
/// dividing atoms by this makes the vanishing test scale-free.
pub fn bordered_minor_scale(gamma: &DMatrix<f64>, s: usize) -> f64 {
    let all: Vec<usize> = (0..gamma.nrows()).collect();
    let subsets = combinations(&all, s);
    let mut best = 0.0f64;
    for rows in &subsets {
        for cols in &subsets {
            let v = linalg::det(&cayley_menger_block(gamma, rows, cols, CmVariant::Standard));
            best = best.max(v.abs());
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomValue {
    #[serde(rename = "Aprime")]
    pub a_prime: Vec<usize>,
    #[serde(rename = "Bprime")]
    pub b_prime: Vec<usize>,
    pub value: f64,
    pub normalized: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomReport {
    pub atoms: Vec<AtomValue>,
    pub max_abs: f64,
    pub max_normalized: f64,
    /// True when every normalized atom is at most the relative tolerance.
    pub vanish: bool,
}

/// Evaluates the atoms at Γ. All atoms must share one size.
pub fn evaluate_atoms(gamma: &Variogram, atoms: &[GeneratorAtom], tol: Tolerance) -> AtomReport {
    let m = gamma.matrix();
    let scale = atoms
        .first()
        .map_or(0.0, |a| bordered_minor_scale(m, a.a_prime.len()));
    let values: Vec<AtomValue> = atoms
        .iter()
        .map(|a| {
            let value = a.evaluate(m);
            AtomValue {
                a_prime: a.a_prime.clone(),
                b_prime: a.b_prime.clone(),
                value,
                normalized: if scale > 0.0 { value.abs() / scale } else { 0.0 },
            }
        })
        .collect();
    let max_abs = values.iter().fold(0.0f64, |acc, v| acc.max(v.value.abs()));
    let max_normalized = values.iter().fold(0.0f64, |acc, v| acc.max(v.normalized));
    AtomReport {
        vanish: max_normalized <= tol.rel,
        atoms: values,
        max_abs,
        max_normalized,
    }
}

/// Residuals of the column-of-ones determinant expansions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionResiduals {
    /// `|det M − Σ_j m_1j D_j|`
    pub first_row: f64,
    /// `max_{j, x≠j} |D_j − Σ_i m_ix D_ij|`
    pub second_level: f64,
}

/// `D_j`: det of M with column `j` replaced by ones.
fn d_j(m: &DMatrix<f64>, j: usize) -> f64 {
    let mut x = m.clone();
    x.column_mut(j).fill(1.0);
    linalg::det(&x)
}

/// `D_ij`: det of M with row `i` and column `j` set to ones, except a zero at `(i, j)`.
fn d_ij(m: &DMatrix<f64>, i: usize, j: usize) -> f64 {
    let mut x = m.clone();
    x.row_mut(i).fill(1.0);
    x.column_mut(j).fill(1.0);
    x[(i, j)] = 0.0;
    linalg::det(&x)
}

/// Evaluates both expansions by direct determinants.
pub fn det_expansion_check(m: &DMatrix<f64>) -> ExpansionResiduals {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "square matrix required");
    let dj: Vec<f64> = (0..n).map(|j| d_j(m, j)).collect();
    let first: f64 = (0..n).map(|j| m[(0, j)] * dj[j]).sum();
    let mut second = 0.0f64;
    for (j, &dj) in dj.iter().enumerate() {
        let dij: Vec<f64> = (0..n).map(|i| d_ij(m, i, j)).collect();
        for x in (0..n).filter(|&x| x != j) {
            let s: f64 = (0..n).map(|i| m[(i, x)] * dij[i]).sum();
            second = second.max((dj - s).abs());
        }
    }
    ExpansionResiduals {
        first_row: (linalg::det(m) - first).abs(),
        second_level: second,
    }
}

/// Sign and the five index pairs of each product term of the pentad
/// polynomial. Each factor is `s(i, j) = g_i8 + g_j8 − g_ij`.
pub const PENTAD_TERMS: [(i8, [(usize, usize); 5]); 12] = [
    (-1, [(2, 3), (1, 4), (3, 4), (1, 5), (2, 5)]),
    (1, [(1, 3), (2, 4), (3, 4), (1, 5), (2, 5)]),
    (1, [(2, 3), (1, 4), (2, 4), (1, 5), (3, 5)]),
    (-1, [(1, 2), (2, 4), (3, 4), (1, 5), (3, 5)]),
    (-1, [(1, 3), (1, 4), (2, 4), (2, 5), (3, 5)]),
    (1, [(1, 2), (1, 4), (3, 4), (2, 5), (3, 5)]),
    (-1, [(1, 3), (2, 3), (2, 4), (1, 5), (4, 5)]),
    (1, [(1, 2), (2, 3), (3, 4), (1, 5), (4, 5)]),
    (1, [(1, 3), (2, 3), (1, 4), (2, 5), (4, 5)]),
    (-1, [(1, 2), (1, 3), (3, 4), (2, 5), (4, 5)]),
    (-1, [(1, 2), (2, 3), (1, 4), (3, 5), (4, 5)]),
    (1, [(1, 2), (1, 3), (2, 4), (3, 5), (4, 5)]),
];

/// Value of the pentad polynomial and its value divided by the largest
/// absolute term (zero when all terms vanish).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PentadResidual {
    pub value: f64,
    pub normalized: f64,
}

/// Evaluates the pentad polynomial on an 8×8 variogram.
pub fn pentad_residual(gamma: &Variogram) -> Result<PentadResidual, EciError> {
    if gamma.d() != 8 {
        return Err(EciError::InvalidStatement(format!(
            "pentad polynomial needs d = 8, got {}",
            gamma.d()
        )));
    }
    let g = |i: usize, j: usize| gamma.get(i, j);
    let s = |i: usize, j: usize| g(i, 8) + g(j, 8) - g(i, j);
    let mut value = 0.0;
    let mut scale = 0.0f64;
    for (sign, pairs) in PENTAD_TERMS.iter() {
        let term: f64 = f64::from(*sign) * pairs.iter().map(|&(i, j)| s(i, j)).product::<f64>();
        value += term;
        scale = scale.max(term.abs());
    }
    Ok(PentadResidual {
        value,
        normalized: if scale > 0.0 { value.abs() / scale } else { 0.0 },
    })
}

/// The eight-vertex graph on which the pentad polynomial vanishes: the
/// suspension of `K_{5,2}` plus the edge between the two hubs.
pub fn pentad_graph() -> UndirectedGraph {
    crate::graphs::suspension(&UndirectedGraph::complete_bipartite(5, 2).with_edge(6, 7))
}
