//! Extremal and Gaussian maximum-likelihood degrees.
//!
//! The extremal ML degree (eMLD) of a graph counts the complex solutions of
//! the completion equations for generic data. Known values come from closed
//! forms (chordal graphs, cycles, `K_{2,n}`, suspensions) and from
//! multiplicativity over clique separators. `K_{2,n}` can also be checked
//! numerically: the completion equations reduce to one univariate polynomial
//! in the unknown entry between the two vertices of the small side.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{is_chordal, separate_decompose, GraphError, UndirectedGraph, VertexSet};
use crate::linalg::Tolerance;
use crate::model;
use crate::poly;
use crate::varalg::{cnd_certificate, Variogram};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DegreeError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("K_2,n needs n >= 2, got {0}")]
    TooSmall(usize),
    #[error("cycle formulas need n >= 3, got {0}")]
    CycleTooShort(usize),
    #[error("repeated or vanishing roots after {attempts} samples (closest relative gap {separation:e})")]
    DegenerateData { attempts: usize, separation: f64 },
    #[error("variogram has {got} vertices, K_2,{n} needs {}", n + 2)]
    WrongSize { n: usize, got: usize },
}

/// A degree that is either known exactly or not determined by the available rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    Known(u128),
    Unknown,
}

impl Degree {
    pub fn known(self) -> Option<u128> {
        match self {
            Degree::Known(k) => Some(k),
            Degree::Unknown => None,
        }
    }

    fn times(self, other: Degree) -> Degree {
        match (self, other) {
            (Degree::Known(a), Degree::Known(b)) => a.checked_mul(b).map_or(Degree::Unknown, Degree::Known),
            _ => Degree::Unknown,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Known(k) => write!(f, "{k}"),
            Degree::Unknown => f.write_str("Unknown"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Degree::Known(k) => s.serialize_u128(*k),
            Degree::Unknown => s.serialize_str("Unknown"),
        }
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Num(u64),
            Text(String),
        }
        match Wire::deserialize(d)? {
            Wire::Num(k) => Ok(Degree::Known(k.into())),
            Wire::Text(t) if t == "Unknown" => Ok(Degree::Unknown),
            Wire::Text(t) => Err(serde::de::Error::custom(format!("unexpected degree {t:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegreeMethod {
    Formula,
    Multiplicative,
    NumericK2n,
    Unknown,
}

/// Closed-form family a prime block was matched against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Chordal,
    Cycle { n: usize },
    CompleteBipartiteTwo { n: usize },
    /// Suspension of `base` with apex `apex`.
    Suspension { apex: usize, base: Box<Family> },
}

/// One prime block of a clique-separator decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockDegree {
    pub vertices: VertexSet,
    pub family: Option<Family>,
    #[serde(rename = "eMLD")]
    pub emld: Degree,
}

/// A complex root of the `K_{2,n}` polynomial with its classification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    pub re: f64,
    pub im: f64,
    /// Nonedge Laplacian entries vanish to the validity tolerance.
    pub valid: bool,
    /// Real root whose completion is strictly CND.
    pub strictly_cnd: bool,
}

/// Numeric details of a `K_{2,n}` run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericCertificate {
    pub n: usize,
    pub seed: u64,
    /// Samples drawn, including rejected degenerate ones.
    pub attempts: usize,
    pub polynomial_degree: usize,
    pub roots: Vec<RootRecord>,
    pub min_separation: f64,
    pub real_roots: usize,
    pub strictly_cnd_roots: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub graph: String,
    #[serde(rename = "eMLD")]
    pub emld: Degree,
    #[serde(rename = "MLD")]
    pub mld: Degree,
    pub method: DegreeMethod,
    pub blocks: Vec<BlockDegree>,
    /// `eMLD ≤ MLD` when both are known; observational only.
    pub emld_at_most_mld: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub numeric: Option<NumericCertificate>,
}

/// Compact identifier `d:i-j,i-j,...`.
pub fn graph_id(g: &UndirectedGraph) -> String {
    let edges: Vec<String> = g.edges().into_iter().map(|(i, j)| format!("{i}-{j}")).collect();
    format!("{}:{}", g.num_vertices(), edges.join(","))
}

/// `2^{n−1} − n`, with `eMLD(C_2) = 0` as the value the three-term identity needs.
pub fn emld_cycle(n: usize) -> u128 {
    assert!((2..=120).contains(&n), "cycle length out of range");
    (1u128 << (n - 1)) - n as u128
}

/// `(n − 3) 2^{n−2} + 1`.
pub fn mld_gaussian_cycle(n: usize) -> Result<u128, DegreeError> {
    if n < 3 {
        return Err(DegreeError::CycleTooShort(n));
    }
    Ok((n as u128 - 3) * (1u128 << (n - 2)) + 1)
}

/// The two integer identities relating cycle degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleRelations {
    pub n: usize,
    #[serde(rename = "eMLD")]
    pub emld: u128,
    #[serde(rename = "MLD")]
    pub mld: u128,
    /// `MLD − eMLD = 2^{n−2}(n − 5) + n + 1`
    pub difference_identity: bool,
    /// `MLD = eMLD(C_n)² − eMLD(C_{n−1}) · eMLD(C_{n+1})`
    pub three_term_identity: bool,
}

pub fn mld_relations_check(n: usize) -> Result<CycleRelations, DegreeError> {
    let mld = mld_gaussian_cycle(n)?;
    let e = |k: usize| emld_cycle(k) as i128;
    let diff = (1i128 << (n - 2)) * (n as i128 - 5) + n as i128 + 1;
    Ok(CycleRelations {
        n,
        emld: emld_cycle(n),
        mld,
        difference_identity: mld as i128 - e(n) == diff,
        three_term_identity: mld as i128 == e(n) * e(n) - e(n - 1) * e(n + 1),
    })
}

/// Length of the chordless cycle `g`, if it is one (n ≥ 4).
pub fn recognize_cycle(g: &UndirectedGraph) -> Option<usize> {
    let d = g.num_vertices();
    (d >= 4 && g.is_connected() && (1..=d).all(|v| g.degree(v) == 2)).then_some(d)
}

/// `(small side, large side)` when `g` is `K_{2,n}` with `n ≥ 2`.
pub fn recognize_k2n(g: &UndirectedGraph) -> Option<(VertexSet, VertexSet)> {
    let d = g.num_vertices();
    if d < 4 {
        return None;
    }
    let all = g.vertices();
    for a in 1..=d {
        for b in a + 1..=d {
            let small = VertexSet::from_labels([a, b]);
            let large = all.difference(small);
            let ok = !g.has_edge(a, b)
                && large.iter().all(|v| g.neighbors(v) == small)
                && g.num_edges() == 2 * large.len();
            if ok {
                return Some((small, large));
            }
        }
    }
    None
}

/// Closed-form family and `(eMLD, MLD)` of a prime block.
fn family_degrees(g: &UndirectedGraph) -> Option<(Family, Degree, Degree)> {
    if is_chordal(g) {
        return Some((Family::Chordal, Degree::Known(1), Degree::Known(1)));
    }
    if let Some(n) = recognize_cycle(g) {
        let mld = mld_gaussian_cycle(n).ok().map_or(Degree::Unknown, Degree::Known);
        return Some((Family::Cycle { n }, Degree::Known(emld_cycle(n)), mld));
    }
    if let Some((_, large)) = recognize_k2n(g) {
        let n = large.len();
        return Some((
            Family::CompleteBipartiteTwo { n },
            Degree::Known(2 * n as u128),
            Degree::Known(2 * n as u128 + 1),
        ));
    }
    // eMLD of a suspension equals the Gaussian degree of its base.
    let d = g.num_vertices();
    for apex in (1..=d).filter(|&v| g.degree(v) == d - 1) {
        let (base, _) = g.induced(g.vertices().without(apex));
        if let Some((family, _, Degree::Known(mld))) = family_degrees(&base) {
            return Some((
                Family::Suspension { apex, base: Box::new(family) },
                Degree::Known(mld),
                Degree::Unknown,
            ));
        }
    }
    None
}

/// Prime blocks of `g` with their labels in `g`.
fn prime_blocks(g: &UndirectedGraph, labels: &[usize], out: &mut Vec<(UndirectedGraph, VertexSet)>) -> Result<(), GraphError> {
    match separate_decompose(g)? {
        None => {
            out.push((g.clone(), VertexSet::from_labels(labels.iter().copied())));
        }
        Some(split) => {
            for part in [split.left, split.right] {
                let (sub, local) = g.induced(part);
                let mapped: Vec<usize> = local.iter().map(|&v| labels[v - 1]).collect();
                prime_blocks(&sub, &mapped, out)?;
            }
        }
    }
    Ok(())
}

/// Extremal ML degree by closed forms and multiplicativity over clique separators.
pub fn emld(g: &UndirectedGraph) -> Result<DegreeReport, DegreeError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let graph = graph_id(g);
    if is_chordal(g) {
        return Ok(report(graph, Degree::Known(1), Degree::Known(1), DegreeMethod::Formula, vec![BlockDegree {
            vertices: g.vertices(),
            family: Some(Family::Chordal),
            emld: Degree::Known(1),
        }]));
    }
    let labels: Vec<usize> = (1..=g.num_vertices()).collect();
    let mut parts = Vec::new();
    prime_blocks(g, &labels, &mut parts)?;
    let blocks: Vec<(BlockDegree, Degree)> = parts
        .iter()
        .map(|(sub, vertices)| match family_degrees(sub) {
            Some((family, e, m)) => (BlockDegree { vertices: *vertices, family: Some(family), emld: e }, m),
            None => (BlockDegree { vertices: *vertices, family: None, emld: Degree::Unknown }, Degree::Unknown),
        })
        .collect();
    let emld = blocks.iter().fold(Degree::Known(1), |acc, (b, _)| acc.times(b.emld));
    let (method, mld) = match (blocks.len(), emld) {
        (_, Degree::Unknown) => (DegreeMethod::Unknown, Degree::Unknown),
        (1, _) => (DegreeMethod::Formula, blocks[0].1),
        _ => (DegreeMethod::Multiplicative, Degree::Unknown),
    };
    Ok(report(graph, emld, mld, method, blocks.into_iter().map(|(b, _)| b).collect()))
}

fn report(graph: String, emld: Degree, mld: Degree, method: DegreeMethod, blocks: Vec<BlockDegree>) -> DegreeReport {
    let emld_at_most_mld = match (emld, mld) {
        (Degree::Known(e), Degree::Known(m)) => Some(e <= m),
        _ => None,
    };
    DegreeReport { graph, emld, mld, method, blocks, emld_at_most_mld, numeric: None }
}

/// Completion equations on `K_{2,n}` with `A = {1..n}`, `B = {n+1, n+2}`,
/// reduced to one unknown `y = Γ_{n+1,n+2}`.
///
/// With `a_i = Γ_{i,n+1}` and `b_i = Γ_{i,n+2}`, the vanishing of `Θ` on the
/// nonedges forces
/// `y·z_ij = ½(−y² + y(a_i + b_i + a_j + b_j) − (a_i − b_i)(a_j − b_j))`
/// for the unknown `z_ij = Γ_ij`, `i, j ∈ A`. The remaining condition is
/// the vanishing of one bordered minor; clearing denominators gives a
/// polynomial of degree `2n` in `y`.
#[derive(Clone, Debug)]
pub struct K2nSystem {
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    scale: f64,
}

impl K2nSystem {
    /// Uses only the edge entries of `gamma`, which must have `n + 2` vertices.
    pub fn new(gamma: &Variogram, n: usize) -> Result<Self, DegreeError> {
        if n < 2 {
            return Err(DegreeError::TooSmall(n));
        }
        if gamma.d() != n + 2 {
            return Err(DegreeError::WrongSize { n, got: gamma.d() });
        }
        let a: Vec<f64> = (1..=n).map(|i| gamma.get(i, n + 1)).collect();
        let b: Vec<f64> = (1..=n).map(|i| gamma.get(i, n + 2)).collect();
        let scale = a.iter().chain(&b).map(|x| x.abs()).sum::<f64>() / (2 * n) as f64;
        Ok(K2nSystem { n, a, b, scale })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `y · z_ij(y)` for 0-based `i, j < n`.
    fn y_times_z(&self, i: usize, j: usize, y: Complex64) -> Complex64 {
        let (a, b) = (&self.a, &self.b);
        0.5 * (-y * y + y * (a[i] + b[i] + a[j] + b[j]) - (a[i] - b[i]) * (a[j] - b[j]))
    }

    /// Completed variogram at `y` (complex in general).
    pub fn completion(&self, y: Complex64) -> DMatrix<Complex64> {
        let n = self.n;
        let d = n + 2;
        DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(0.0, 0.0)
            } else if i < n && j < n {
                self.y_times_z(i, j, y) / y
            } else if i >= n && j >= n {
                y
            } else {
                let (k, side) = if i < n { (i, j) } else { (j, i) };
                Complex64::new(if side == n { self.a[k] } else { self.b[k] }, 0.0)
            }
        })
    }

    /// The polynomial's value: the scaled bordered matrix with the `A` rows
    /// multiplied by `y`, minus the row of vertex `n + 1` and the column of
    /// vertex `n + 2`.
    pub fn evaluate(&self, y: Complex64) -> Complex64 {
        let n = self.n;
        let d = n + 2;
        let one = Complex64::new(1.0, 0.0);
        let full = |r: usize, c: usize| -> Complex64 {
            let row_scale = if r < n { y } else { one };
            if r == c {
                return Complex64::new(0.0, 0.0);
            }
            if r == d || c == d {
                return if r == d { one } else { row_scale };
            }
            if r < n && c < n {
                return self.y_times_z(r, c, y);
            }
            if r >= n && c >= n {
                return y;
            }
            let (k, side) = if r < n { (r, c) } else { (c, r) };
            row_scale * if side == n { self.a[k] } else { self.b[k] }
        };
        let rows: Vec<usize> = (0..=d).filter(|&r| r != n).collect();
        let cols: Vec<usize> = (0..=d).filter(|&c| c != n + 1).collect();
        DMatrix::from_fn(d, d, |r, c| full(rows[r], cols[c])).determinant()
    }

    /// Real coefficients in ascending powers, trailing round-off trimmed.
    pub fn coefficients(&self) -> Vec<f64> {
        // Two spare nodes guard against aliasing if the degree bound were off.
        let bound = 2 * self.n + 2;
        let r = self.scale;
        let c = poly::interpolate_on_circle(|y| self.evaluate(y), bound, r);
        // Trim on the circle's scale, where all coefficients are comparable.
        let on_circle: Vec<Complex64> = c.iter().enumerate().map(|(k, z)| z * r.powi(k as i32)).collect();
        let keep = poly::trim(&on_circle, 1e-9).len();
        c[..keep].iter().map(|z| z.re).collect()
    }

    /// Nonzero roots (relative to the data scale).
    pub fn roots(&self) -> Vec<Complex64> {
        let coeffs = self.coefficients();
        poly::real_poly_roots(&coeffs)
            .into_iter()
            .filter(|z| z.norm() > 1e-6 * self.scale)
            .map(|z| self.polish(z))
            .collect()
    }

    /// Newton steps on the determinant itself. Companion roots inherit the
    /// coefficients' round-off, which matters for clustered roots.
    fn polish(&self, mut z: Complex64) -> Complex64 {
        let mut fz = self.evaluate(z);
        for _ in 0..20 {
            let h = 1e-7 * z.norm().max(self.scale * 1e-3);
            let df = (self.evaluate(z + h) - self.evaluate(z - h)) / (2.0 * h);
            if df.norm() == 0.0 {
                break;
            }
            let next = z - fz / df;
            let fnext = self.evaluate(next);
            if fnext.norm().is_nan() || fnext.norm() >= fz.norm() {
                break;
            }
            let step = (next - z).norm();
            z = next;
            fz = fnext;
            if step <= 1e-15 * z.norm() {
                break;
            }
        }
        z
    }

    /// Largest nonedge Laplacian entry relative to the largest entry, from
    /// the inverse of the complex bordered matrix; `None` when it is singular.
    pub fn nonedge_residual(&self, y: Complex64) -> Option<f64> {
        let n = self.n;
        let d = n + 2;
        let gamma = self.completion(y);
        let cm = DMatrix::from_fn(d + 1, d + 1, |i, j| match (i == d, j == d) {
            (true, true) => Complex64::new(0.0, 0.0),
            (true, false) | (false, true) => Complex64::new(1.0, 0.0),
            _ => -0.5 * gamma[(i, j)],
        });
        let inv = cm.try_inverse()?;
        let theta = inv.view((0, 0), (d, d));
        let top = theta.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !top.is_finite() || top == 0.0 {
            return None;
        }
        let mut worst = theta[(n, n + 1)].norm();
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max(theta[(i, j)].norm());
            }
        }
        Some(worst / top)
    }

    /// Real completion at a real `y`.
    pub fn real_completion(&self, y: f64) -> Option<Variogram> {
        let c = self.completion(Complex64::new(y, 0.0));
        Variogram::new(c.map(|z| z.re)).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericOptions {
    /// Roots closer than this (relative) count as repeated.
    pub distinct_tol: f64,
    /// Nonedge Laplacian entries must vanish to this (relative).
    pub validity_tol: f64,
    pub max_resamples: usize,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions { distinct_tol: 1e-6, validity_tol: 1e-6, max_resamples: 5 }
    }
}

/// Classifies each root of `system`; `Err(separation)` when roots repeat.
pub fn classify_roots(system: &K2nSystem, opts: &NumericOptions) -> Result<(Vec<RootRecord>, f64), f64> {
    let roots = system.roots();
    let separation = poly::min_relative_separation(&roots);
    if separation < opts.distinct_tol {
        return Err(separation);
    }
    let tol = Tolerance::default();
    let records = roots
        .iter()
        .map(|&y| {
            let valid = system.nonedge_residual(y).is_some_and(|r| r < opts.validity_tol);
            let real = y.im.abs() <= 1e-8 * y.norm();
            let strictly_cnd = valid
                && real
                && system
                    .real_completion(y.re)
                    .is_some_and(|g| cnd_certificate(&g, tol).is_strict());
            RootRecord { re: y.re, im: if real { 0.0 } else { y.im }, valid, strictly_cnd }
        })
        .collect();
    Ok((records, separation))
}

/// Counts the solutions of the `K_{2,n}` completion equations for random
/// generic data (`n + 2` Gaussian points in ℝ^{n+1}), resampling on repeated roots.
pub fn emld_k2n_numeric(n: usize, seed: u64, opts: &NumericOptions) -> Result<DegreeReport, DegreeError> {
    if n < 2 {
        return Err(DegreeError::TooSmall(n));
    }
    let mut closest = 0.0;
    for attempt in 0..=opts.max_resamples {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let gamma = model::generic_variogram(n + 2, &mut rng);
        let system = K2nSystem::new(&gamma, n)?;
        let degree = system.coefficients().len() - 1;
        match classify_roots(&system, opts) {
            Err(sep) => closest = sep,
            Ok((roots, min_separation)) => {
                let count = roots.iter().filter(|r| r.valid).count();
                let g = UndirectedGraph::complete_bipartite(n, 2);
                let mut rep = report(graph_id(&g), Degree::Known(count as u128), Degree::Known(2 * n as u128 + 1), DegreeMethod::NumericK2n, vec![BlockDegree {
                    vertices: g.vertices(),
                    family: Some(Family::CompleteBipartiteTwo { n }),
                    emld: Degree::Known(count as u128),
                }]);
                rep.numeric = Some(NumericCertificate {
                    n,
                    seed,
                    attempts: attempt + 1,
                    polynomial_degree: degree,
                    real_roots: roots.iter().filter(|r| r.im == 0.0).count(),
                    strictly_cnd_roots: roots.iter().filter(|r| r.strictly_cnd).count(),
                    roots,
                    min_separation,
                });
                return Ok(rep);
            }
        }
    }
    Err(DegreeError::DegenerateData { attempts: opts.max_resamples + 1, separation: closest })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emld_of(g: &UndirectedGraph) -> Degree {
        emld(g).unwrap().emld
    }

    #[test]
    fn cycle_formulas() {
        assert_eq!(emld_cycle(4), 4);
        assert_eq!(emld_cycle(3), 1);
        assert_eq!(mld_gaussian_cycle(4).unwrap(), 5);
        assert_eq!(mld_gaussian_cycle(3).unwrap(), 1);
        assert_eq!(mld_gaussian_cycle(7).unwrap(), 129);
        assert!(mld_gaussian_cycle(2).is_err());
        for n in 3..=40 {
            let r = mld_relations_check(n).unwrap();
            assert!(r.difference_identity && r.three_term_identity, "n = {n}");
        }
    }

    #[test]
    fn dispatch_on_known_families() {
        assert_eq!(emld_of(&UndirectedGraph::fish()), Degree::Known(1));
        assert_eq!(emld(&UndirectedGraph::fish()).unwrap().method, DegreeMethod::Formula);
        let c4 = emld(&UndirectedGraph::cycle(4)).unwrap();
        assert_eq!((c4.emld, c4.mld), (Degree::Known(4), Degree::Known(5)));
        assert_eq!(c4.emld_at_most_mld, Some(true));
        assert_eq!(emld_of(&UndirectedGraph::cycle(6)), Degree::Known(26));
        assert_eq!(emld_of(&UndirectedGraph::complete_bipartite(2, 5)), Degree::Known(10));
        // Wheel: suspension of C5.
        let wheel = crate::graphs::suspension(&UndirectedGraph::cycle(5));
        let w = emld(&wheel).unwrap();
        assert_eq!(w.emld, Degree::Known(17));
        assert!(matches!(w.blocks[0].family, Some(Family::Suspension { apex: 6, .. })));
        let petersen_like = UndirectedGraph::new(6, &[(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4), (1, 4), (2, 5), (3, 6)]).unwrap();
        assert_eq!(emld(&petersen_like).unwrap().method, DegreeMethod::Unknown);
        assert!(emld(&UndirectedGraph::empty(3)).is_err());
    }

    #[test]
    fn multiplicative_over_clique_separators() {
        let glued = UndirectedGraph::new(6, &[(1, 2), (2, 3), (3, 4), (1, 4), (4, 5), (5, 6), (3, 6)]).unwrap();
        let r = emld(&glued).unwrap();
        assert_eq!(r.emld, Degree::Known(16));
        assert_eq!(r.method, DegreeMethod::Multiplicative);
        // A pendant triangle does not change the degree.
        let g = UndirectedGraph::new(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (5, 6), (1, 6)]).unwrap();
        assert_eq!(emld_of(&g), Degree::Known(11));
    }

    #[test]
    fn degree_json() {
        let r = emld(&UndirectedGraph::cycle(4)).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["eMLD"], 4);
        assert_eq!(v["method"], "Formula");
        let back: DegreeReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&Degree::Unknown).unwrap(), "\"Unknown\"");
    }

    #[test]
    fn k2n_polynomial_has_degree_2n() {
        for n in 2..=6 {
            let r = emld_k2n_numeric(n, 7, &NumericOptions::default()).unwrap();
            let cert = r.numeric.as_ref().unwrap();
            assert_eq!(cert.polynomial_degree, 2 * n);
            assert_eq!(r.emld, Degree::Known(2 * n as u128), "n = {n}: {cert:?}");
            assert!(cert.roots.iter().all(|x| x.valid));
        }
    }

    #[test]
    fn k2n_model_point_is_a_strict_root() {
        use rand::SeedableRng;
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let g = UndirectedGraph::complete_bipartite(3, 2);
        let truth = model::model_point(&g, &mut rng);
        let system = K2nSystem::new(&truth, 3).unwrap();
        let target = truth.get(4, 5);
        let (roots, _) = classify_roots(&system, &NumericOptions::default()).unwrap();
        let hit = roots.iter().find(|r| (r.re - target).abs() < 1e-7 * target && r.im == 0.0).unwrap();
        assert!(hit.valid && hit.strictly_cnd);
        let completed = system.real_completion(hit.re).unwrap();
        assert!(crate::linalg::max_abs(&(completed.matrix() - truth.matrix())) < 1e-6);
    }
}
