//! Small dense linear-algebra helpers shared by the numeric modules, and the
//! single relative tolerance that every rank and definiteness decision uses.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Default relative threshold: a singular value or eigenvalue counts as zero
/// when it is at most `1e-8` times the largest one of the matrix at hand.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Environment variable that overrides [`DEFAULT_REL_TOL`] globally.
pub const TOL_ENV: &str = "HR_TOL";

/// Relative numerical-rank tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: DEFAULT_REL_TOL }
    }
}

impl Tolerance {
    pub fn new(rel: f64) -> Self {
        assert!(rel.is_finite() && rel >= 0.0, "tolerance must be finite and nonnegative");
        Tolerance { rel }
    }

    /// The default, unless `HR_TOL` holds a valid nonnegative float.
    pub fn global() -> Self {
        std::env::var(TOL_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|t| t.is_finite() && *t >= 0.0)
            .map(Tolerance::new)
            .unwrap_or_default()
    }

    /// Absolute cutoff for a matrix whose largest singular value is `scale`.
    pub fn cutoff(self, scale: f64) -> f64 {
        self.rel * scale
    }
}

/// Orthonormal basis of the complement of the all-ones vector, as the
/// columns of a `d × (d-1)` matrix (normalized Helmert contrasts).
pub fn ones_complement_basis(d: usize) -> DMatrix<f64> {
    let mut v = DMatrix::zeros(d, d.saturating_sub(1));
    for k in 1..d {
        let norm = ((k * (k + 1)) as f64).sqrt();
        for i in 0..k {
            v[(i, k - 1)] = 1.0 / norm;
        }
        v[(k, k - 1)] = -(k as f64) / norm;
    }
    v
}

/// Centering projector `I - 11ᵀ/d`.
pub fn centering(d: usize) -> DMatrix<f64> {
    let mut p = DMatrix::from_element(d, d, -1.0 / d as f64);
    for i in 0..d {
        p[(i, i)] += 1.0;
    }
    p
}

/// Eigen-decomposition of a symmetric matrix with eigenvalues ascending.
pub fn sym_eigen_sorted(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (DVector::zeros(0), DMatrix::zeros(0, 0));
    }
    let eig = symmetrize(m).symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, idx.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    (values, vectors)
}

/// Ascending eigenvalues of `VᵀMV`, i.e. of a symmetric `M` acting on 1⊥.
pub fn restricted_eigenvalues(m: &DMatrix<f64>) -> DVector<f64> {
    let v = ones_complement_basis(m.nrows());
    sym_eigen_sorted(&(v.transpose() * m * &v)).0
}

/// `(M + Mᵀ)/2`.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Singular values, descending.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `tol.cutoff(σ_max)`.
pub fn numerical_rank(m: &DMatrix<f64>, tol: Tolerance) -> usize {
    rank_of_values(&singular_values(m), tol)
}

/// Rank from a list of nonnegative singular values.
pub fn rank_of_values(s: &[f64], tol: Tolerance) -> usize {
    let max = s.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if max == 0.0 {
        return 0;
    }
    let cut = tol.cutoff(max);
    s.iter().filter(|&&x| x.abs() > cut).count()
}

/// Submatrix on the given zero-based rows and columns.
pub fn select(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |r, c| m[(rows[r], cols[c])])
}

/// `max_ij |m_ij|`, zero for an empty matrix.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
}

/// Determinant by LU; `1` for the empty matrix.
pub fn det(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        1.0
    } else {
        m.clone().lu().determinant()
    }
}

/// Symmetric positive-definite inverse and log-determinant via eigenvalues.
/// Returns `None` unless every eigenvalue is positive.
pub fn spd_inverse_logdet(m: &DMatrix<f64>) -> Option<(DMatrix<f64>, f64)> {
    let (vals, vecs) = sym_eigen_sorted(m);
    if vals.iter().any(|&x| x <= 0.0 || !x.is_finite()) {
        return None;
    }
    let inv_vals = vals.map(|x| 1.0 / x);
    let inv = &vecs * DMatrix::from_diagonal(&inv_vals) * vecs.transpose();
    Some((symmetrize(&inv), vals.iter().map(|x| x.ln()).sum()))
}
