//! Conversions between variograms Γ, Gram matrices Σ and signed Laplacians Θ,
//! Cayley–Menger matrices, definiteness certificates and point realizations.
//!
//! All pseudo-inverses go through an orthonormal basis `V` of 1⊥, so
//! `Θ = V (VᵀΣV)⁻¹ Vᵀ` and `Σ = V (VᵀΘV)⁻¹ Vᵀ` annihilate the ones vector by
//! construction.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::io::MatrixJson;
use crate::linalg::{
    self, max_abs, ones_complement_basis, sym_eigen_sorted, symmetrize, Tolerance,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VarAlgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has a non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("variogram diagonal entry {0} is nonzero")]
    NotHollow(usize),
    #[error("variogram is not strictly conditionally negative definite (margin {margin:e})")]
    NotStrictlyCnd { margin: f64 },
    #[error("variogram is not conditionally negative definite")]
    NotCnd,
    #[error("Cayley-Menger matrix is numerically singular")]
    SingularBorder,
    #[error("Gram matrix does not annihilate the ones vector (|Σ1| = {0:e})")]
    KernelViolation(f64),
    #[error("Laplacian rows do not sum to zero (max |Θ1| = {0:e})")]
    RowSumViolation(f64),
    #[error("Laplacian has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("vertex {0} outside 1..={1}")]
    VertexOutOfRange(usize, usize),
}

/// Relative slack allowed when validating symmetry and hollowness of input.
const SHAPE_REL_TOL: f64 = 1e-10;

fn check_square_finite(m: &DMatrix<f64>) -> Result<(), VarAlgError> {
    if m.nrows() != m.ncols() {
        return Err(VarAlgError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if !m[(i, j)].is_finite() {
                return Err(VarAlgError::NonFinite(i + 1, j + 1));
            }
        }
    }
    Ok(())
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<(), VarAlgError> {
    let slack = SHAPE_REL_TOL * max_abs(m).max(1.0);
    for i in 0..m.nrows() {
        for j in i + 1..m.ncols() {
            if (m[(i, j)] - m[(j, i)]).abs() > slack {
                return Err(VarAlgError::NotSymmetric(i + 1, j + 1));
            }
        }
    }
    Ok(())
}

/// Symmetric hollow matrix of squared distances.
#[derive(Clone, Debug, PartialEq)]
pub struct Variogram(DMatrix<f64>);

impl Variogram {
    /// Validates shape, finiteness, symmetry and zero diagonal, then stores
    /// the exactly symmetrized matrix with an exact zero diagonal.
    pub fn new(m: DMatrix<f64>) -> Result<Self, VarAlgError> {
        check_square_finite(&m)?;
        check_symmetric(&m)?;
        let slack = SHAPE_REL_TOL * max_abs(&m).max(1.0);
        for i in 0..m.nrows() {
            if m[(i, i)].abs() > slack {
                return Err(VarAlgError::NotHollow(i + 1));
            }
        }
        let mut s = symmetrize(&m);
        s.fill_diagonal(0.0);
        Ok(Variogram(s))
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self, VarAlgError> {
        let d = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != d) {
            return Err(VarAlgError::NotSquare { rows: d, cols: r.len() });
        }
        Variogram::new(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    pub fn zeros(d: usize) -> Self {
        Variogram(DMatrix::zeros(d, d))
    }

    /// Squared distances between the columns of a point matrix (`m × d`).
    pub fn from_points(points: &DMatrix<f64>) -> Self {
        let d = points.ncols();
        Variogram(DMatrix::from_fn(d, d, |i, j| {
            (points.column(i) - points.column(j)).norm_squared()
        }))
    }

    pub fn d(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    /// Entry for 1-based labels.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i - 1, j - 1)]
    }

    /// Principal submatrix on zero-based indices.
    pub fn principal(&self, idx: &[usize]) -> Variogram {
        Variogram(linalg::select(&self.0, idx, idx))
    }

    pub fn scaled(&self, c: f64) -> Variogram {
        Variogram(&self.0 * c)
    }
}

impl Serialize for Variogram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson::from(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Variogram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = MatrixJson::deserialize(d)?
            .into_matrix()
            .map_err(serde::de::Error::custom)?;
        Variogram::new(m).map_err(serde::de::Error::custom)
    }
}

/// Symmetric matrix with zero row sums. Off-diagonal `-Θ_ij` are edge weights.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedLaplacian(DMatrix<f64>);

impl SignedLaplacian {
    /// Validates symmetry and zero row sums (relative to the largest entry).
    pub fn new(m: DMatrix<f64>) -> Result<Self, VarAlgError> {
        check_square_finite(&m)?;
        check_symmetric(&m)?;
        let s = symmetrize(&m);
        let row_max = s.row_iter().map(|r| r.sum().abs()).fold(0.0, f64::max);
        if row_max > SHAPE_REL_TOL * max_abs(&s).max(f64::MIN_POSITIVE) * s.nrows() as f64 {
            return Err(VarAlgError::RowSumViolation(row_max));
        }
        Ok(SignedLaplacian(s))
    }

    /// Laplacian `Σ_e w_e L_e` from 1-based weighted edges.
    pub fn from_edge_weights(d: usize, weights: &[(usize, usize, f64)]) -> Self {
        let mut m = DMatrix::zeros(d, d);
        for &(i, j, w) in weights {
            let (a, b) = (i - 1, j - 1);
            m[(a, a)] += w;
            m[(b, b)] += w;
            m[(a, b)] -= w;
            m[(b, a)] -= w;
        }
        SignedLaplacian(m)
    }

    /// Skips validation; callers guarantee symmetry and zero row sums.
    pub(crate) fn from_matrix_unchecked(m: DMatrix<f64>) -> Self {
        SignedLaplacian(m)
    }

    pub fn d(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    /// `Q_ij = -Θ_ij` for 1-based labels.
    pub fn edge_weight(&self, i: usize, j: usize) -> f64 {
        -self.0[(i - 1, j - 1)]
    }

    /// Ascending eigenvalues of Θ on 1⊥.
    pub fn restricted_eigenvalues(&self) -> DVector<f64> {
        linalg::restricted_eigenvalues(&self.0)
    }

    /// Moore–Penrose inverse `Σ = Θ⁺`, requiring rank `d - 1` and Θ PSD.
    pub fn pseudo_inverse(&self, tol: Tolerance) -> Result<DMatrix<f64>, VarAlgError> {
        restricted_inverse(&self.0, tol)
    }
}

impl Serialize for SignedLaplacian {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson::from(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignedLaplacian {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = MatrixJson::deserialize(d)?
            .into_matrix()
            .map_err(serde::de::Error::custom)?;
        SignedLaplacian::new(m).map_err(serde::de::Error::custom)
    }
}

/// `V (VᵀMV)⁻¹ Vᵀ` for symmetric `M` that is positive definite on 1⊥.
fn restricted_inverse(m: &DMatrix<f64>, tol: Tolerance) -> Result<DMatrix<f64>, VarAlgError> {
    let d = m.nrows();
    let v = ones_complement_basis(d);
    let (vals, vecs) = sym_eigen_sorted(&(v.transpose() * m * &v));
    let top = vals.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let cut = tol.cutoff(top);
    let rank = vals.iter().filter(|&&x| x > cut).count();
    if rank < d.saturating_sub(1) || (d > 1 && top == 0.0) {
        return Err(VarAlgError::RankDeficient {
            rank,
            expected: d - 1,
        });
    }
    let w = &v * &vecs;
    let inv = &w * DMatrix::from_diagonal(&vals.map(|x| 1.0 / x)) * w.transpose();
    Ok(symmetrize(&inv))
}

/// Strict, weak (boundary) or failed conditional negative definiteness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    Strict,
    Weak,
    NotCnd,
}

/// Outcome of the Schoenberg test on σ(Γ) restricted to 1⊥.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CndCertificate {
    pub status: Definiteness,
    /// Smallest restricted eigenvalue minus the tolerance cutoff; positive
    /// exactly when the certificate is strict.
    pub margin: f64,
    /// Absolute cutoff used: relative tolerance times the largest |eigenvalue|.
    pub tolerance: f64,
    /// The `d - 1` eigenvalues of σ(Γ) on 1⊥, ascending.
    pub eigenvalues: Vec<f64>,
}

impl CndCertificate {
    pub fn is_strict(&self) -> bool {
        self.status == Definiteness::Strict
    }
}

/// `σ(Γ) = P(-Γ/2)P`, computed as `V (Vᵀ(-Γ/2)V) Vᵀ` and symmetrized so
/// that `Σ1 = 0` up to rounding.
pub fn sigma_matrix(gamma: &DMatrix<f64>) -> DMatrix<f64> {
    let v = ones_complement_basis(gamma.nrows());
    let inner = symmetrize(&(v.transpose() * (gamma * -0.5) * &v));
    symmetrize(&(&v * inner * v.transpose()))
}

/// `γ(Σ) = d_Σ 1ᵀ + 1 d_Σᵀ - 2Σ` without kernel validation.
pub fn gamma_matrix(sigma: &DMatrix<f64>) -> DMatrix<f64> {
    let d = sigma.nrows();
    let mut g = DMatrix::from_fn(d, d, |i, j| sigma[(i, i)] + sigma[(j, j)] - 2.0 * sigma[(i, j)]);
    g.fill_diagonal(0.0);
    symmetrize(&g)
}

/// Gram matrix Σ with its diagonal and a point realization `B` (`m × d`)
/// satisfying `Σ = BᵀB`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramFactor {
    pub sigma: DMatrix<f64>,
    pub diag: DVector<f64>,
    pub b: DMatrix<f64>,
    pub dim: usize,
}

/// σ(Γ) with a point realization from its eigen-decomposition.
///
/// Coordinates follow decreasing eigenvalue; each eigenvector's first
/// nonzero entry is made positive. Eigenvalues at or below the tolerance are
/// dropped, so when Γ is not CND the realization covers only the positive part.
pub fn sigma_of_gamma(gamma: &Variogram, tol: Tolerance) -> GramFactor {
    let sigma = sigma_matrix(gamma.matrix());
    let d = sigma.nrows();
    let (vals, vecs) = sym_eigen_sorted(&sigma);
    let top = vals.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let cut = tol.cutoff(top);
    let keep: Vec<usize> = (0..d).rev().filter(|&k| vals[k] > cut && top > 0.0).collect();
    let mut b = DMatrix::zeros(keep.len(), d);
    for (row, &k) in keep.iter().enumerate() {
        let mut u = vecs.column(k).into_owned();
        let scale = u.amax();
        if let Some(first) = u.iter().find(|x| x.abs() > 1e-12 * scale) {
            if *first < 0.0 {
                u.neg_mut();
            }
        }
        let s = vals[k].sqrt();
        for j in 0..d {
            b[(row, j)] = s * u[j];
        }
    }
    GramFactor {
        diag: sigma.diagonal(),
        dim: keep.len(),
        sigma,
        b,
    }
}

/// γ(Σ) after checking `Σ1 = 0` within tolerance.
pub fn gamma_of_sigma(sigma: &DMatrix<f64>, tol: Tolerance) -> Result<Variogram, VarAlgError> {
    check_square_finite(sigma)?;
    check_symmetric(sigma)?;
    let d = sigma.nrows();
    let kernel = (sigma * DVector::from_element(d, 1.0)).amax();
    let scale = max_abs(sigma) * d as f64;
    if kernel > tol.cutoff(scale).max(1e-14 * scale) {
        return Err(VarAlgError::KernelViolation(kernel));
    }
    Ok(Variogram(gamma_matrix(sigma)))
}

/// Schoenberg certificate from the eigenvalues of σ(Γ) on 1⊥.
pub fn cnd_certificate(gamma: &Variogram, tol: Tolerance) -> CndCertificate {
    let d = gamma.d();
    let v = ones_complement_basis(d);
    let inner = symmetrize(&(v.transpose() * (gamma.matrix() * -0.5) * &v));
    let eigenvalues: Vec<f64> = sym_eigen_sorted(&inner).0.iter().copied().collect();
    let top = eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let cut = tol.cutoff(top);
    let min = eigenvalues.first().copied().unwrap_or(f64::INFINITY);
    let status = if eigenvalues.iter().all(|&x| x > cut) {
        Definiteness::Strict
    } else if eigenvalues.iter().all(|&x| x >= -cut) {
        Definiteness::Weak
    } else {
        Definiteness::NotCnd
    };
    CndCertificate {
        status,
        margin: if min.is_finite() { min - cut } else { f64::INFINITY },
        tolerance: cut,
        eigenvalues,
    }
}

/// `is_strictly_cnd` under its conventional name.
pub fn is_strictly_cnd(gamma: &Variogram, tol: Tolerance) -> CndCertificate {
    cnd_certificate(gamma, tol)
}

/// θ(Γ): the signed Laplacian `(σ(Γ))⁺`, equal to the upper-left block of
/// `CM(Γ)⁻¹`.
pub fn theta_of_gamma(gamma: &Variogram, tol: Tolerance) -> Result<SignedLaplacian, VarAlgError> {
    let cert = cnd_certificate(gamma, tol);
    if !cert.is_strict() {
        return Err(VarAlgError::NotStrictlyCnd { margin: cert.margin });
    }
    let theta = restricted_inverse(&sigma_matrix(gamma.matrix()), tol)
        .map_err(|_| VarAlgError::SingularBorder)?;
    Ok(SignedLaplacian(theta))
}

/// γ(Θ⁺), the variogram of a rank-`(d-1)` PSD Laplacian.
pub fn gamma_of_theta(theta: &SignedLaplacian, tol: Tolerance) -> Result<Variogram, VarAlgError> {
    let sigma = theta.pseudo_inverse(tol)?;
    Ok(Variogram(gamma_matrix(&sigma)))
}

/// `Σ^(k)_ij = (Γ_ik + Γ_jk - Γ_ij)/2` for `i, j ≠ k`, rows in label order.
pub fn covariance_mapping(gamma: &Variogram, k: usize) -> Result<DMatrix<f64>, VarAlgError> {
    let d = gamma.d();
    if k == 0 || k > d {
        return Err(VarAlgError::VertexOutOfRange(k, d));
    }
    let rest: Vec<usize> = (0..d).filter(|&i| i != k - 1).collect();
    let g = gamma.matrix();
    let kk = k - 1;
    Ok(DMatrix::from_fn(d - 1, d - 1, |a, b| {
        let (i, j) = (rest[a], rest[b]);
        0.5 * (g[(i, kk)] + g[(j, kk)] - g[(i, j)])
    }))
}

/// Smallest `m` such that Γ is realized by points in ℝ^m: the numerical rank of σ(Γ).
pub fn dimensionality(gamma: &Variogram, tol: Tolerance) -> Result<usize, VarAlgError> {
    if cnd_certificate(gamma, tol).status == Definiteness::NotCnd {
        return Err(VarAlgError::NotCnd);
    }
    Ok(linalg::numerical_rank(&sigma_matrix(gamma.matrix()), tol))
}

/// Which bordered matrix to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CmVariant {
    /// `[[-Γ/2, 1], [1ᵀ, 0]]`
    Standard,
    /// `[[Γ, 1], [1ᵀ, 0]]`
    Scaled,
}

/// Bordered matrix of the block `Γ_{rows, cols}` (zero-based, possibly rectangular).
pub fn cayley_menger_block(
    gamma: &DMatrix<f64>,
    rows: &[usize],
    cols: &[usize],
    variant: CmVariant,
) -> DMatrix<f64> {
    let (r, c) = (rows.len(), cols.len());
    let f = match variant {
        CmVariant::Standard => -0.5,
        CmVariant::Scaled => 1.0,
    };
    DMatrix::from_fn(r + 1, c + 1, |i, j| match (i < r, j < c) {
        (true, true) => f * gamma[(rows[i], cols[j])],
        (false, false) => 0.0,
        _ => 1.0,
    })
}

/// Full bordered matrix of Γ.
pub fn cayley_menger(gamma: &Variogram, variant: CmVariant) -> DMatrix<f64> {
    let all: Vec<usize> = (0..gamma.d()).collect();
    cayley_menger_block(gamma.matrix(), &all, &all, variant)
}

/// Θ together with `p = Θd_Σ/2 + 1/d` and `R² = d_ΣᵀΘd_Σ/4 + 1ᵀd_Σ/d`.
#[derive(Clone, Debug, PartialEq)]
pub struct BorderedLaplacian {
    pub theta: SignedLaplacian,
    pub p: DVector<f64>,
    pub r2: f64,
}

impl BorderedLaplacian {
    /// `[[Θ, p], [pᵀ, R²]]`.
    pub fn matrix(&self) -> DMatrix<f64> {
        let d = self.theta.d();
        DMatrix::from_fn(d + 1, d + 1, |i, j| match (i < d, j < d) {
            (true, true) => self.theta.0[(i, j)],
            (true, false) => self.p[i],
            (false, true) => self.p[j],
            (false, false) => self.r2,
        })
    }
}

/// Bordered inverse and `max |[[Θ,p],[pᵀ,R²]] CM(Γ) - I|`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiedlerBapat {
    pub bordered: BorderedLaplacian,
    pub residual: f64,
}

/// Builds the bordered Laplacian from Σ = σ(Γ) and measures how far it is
/// from inverting `CM(Γ)`.
pub fn fiedler_bapat_check(gamma: &Variogram, tol: Tolerance) -> Result<FiedlerBapat, VarAlgError> {
    let theta = theta_of_gamma(gamma, tol)?;
    let d = gamma.d();
    let ds = sigma_matrix(gamma.matrix()).diagonal();
    let td = theta.matrix() * &ds;
    let p = td.map(|x| 0.5 * x).add_scalar(1.0 / d as f64);
    let r2 = 0.25 * ds.dot(&td) + ds.sum() / d as f64;
    let bordered = BorderedLaplacian { theta, p, r2 };
    let prod = bordered.matrix() * cayley_menger(gamma, CmVariant::Standard);
    let residual = max_abs(&(prod - DMatrix::identity(d + 1, d + 1)));
    Ok(FiedlerBapat { bordered, residual })
}

/// A unit `x ⟂ 1` in the kernel of a PSD Σ with `Σ1 = 0`, when Σ is
/// singular on 1⊥. Then `xᵀγ(Σ)x = −2xᵀΣx = 0`, so γ(Σ) is not strictly CND.
pub fn kernel_witness(sigma: &DMatrix<f64>, tol: Tolerance) -> Option<DVector<f64>> {
    let v = ones_complement_basis(sigma.nrows());
    let (vals, vecs) = sym_eigen_sorted(&symmetrize(&(v.transpose() * sigma * &v)));
    let top = vals.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    (!vals.is_empty() && vals[0] <= tol.cutoff(top)).then(|| &v * vecs.column(0))
}

/// Product of the `d - 1` eigenvalues of Θ on 1⊥.
pub fn pseudo_determinant(theta: &SignedLaplacian, tol: Tolerance) -> Result<f64, VarAlgError> {
    let vals = theta.restricted_eigenvalues();
    let top = vals.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let rank = vals.iter().filter(|&&x| x > tol.cutoff(top)).count();
    if top == 0.0 || rank < vals.len() {
        return Err(VarAlgError::RankDeficient {
            rank,
            expected: theta.d().saturating_sub(1),
        });
    }
    Ok(vals.iter().product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn triangle() -> Variogram {
        Variogram::from_rows(&[&[0.0, 9.0, 25.0], &[9.0, 0.0, 16.0], &[25.0, 16.0, 0.0]]).unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    /// Direct LU inverse of the bordered matrix, independent of the 1⊥ route.
    fn cm_inverse_oracle(g: &Variogram) -> DMatrix<f64> {
        cayley_menger(g, CmVariant::Standard).try_inverse().unwrap()
    }

    #[test]
    fn triangle_laplacian_has_path_weights() {
        let theta = theta_of_gamma(&triangle(), tol()).unwrap();
        assert_abs_diff_eq!(theta.edge_weight(1, 2), 1.0 / 9.0, epsilon = 1e-14);
        assert_abs_diff_eq!(theta.edge_weight(2, 3), 1.0 / 16.0, epsilon = 1e-14);
        assert_abs_diff_eq!(theta.edge_weight(1, 3), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn triangle_bordered_inverse_matches_printed_values() {
        let fb = fiedler_bapat_check(&triangle(), tol()).unwrap();
        let expected = DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0 / 9.0, -1.0 / 9.0, 0.0, 0.5,
                -1.0 / 9.0, 25.0 / 144.0, -1.0 / 16.0, 0.0,
                0.0, -1.0 / 16.0, 1.0 / 16.0, 0.5,
                0.5, 0.0, 0.5, 25.0 / 4.0,
            ],
        );
        assert_abs_diff_eq!(fb.bordered.matrix(), expected, epsilon = 1e-13);
        assert!(fb.residual < 1e-13);
        assert_abs_diff_eq!(cm_inverse_oracle(&triangle()), expected, epsilon = 1e-13);
    }

    #[test]
    fn triangle_gram_and_back() {
        let sigma = DMatrix::from_row_slice(
            3,
            3,
            &[52.0, -2.0, -50.0, -2.0, 25.0, -23.0, -50.0, -23.0, 73.0],
        ) / 9.0;
        let g = gamma_of_sigma(&sigma, tol()).unwrap();
        assert_abs_diff_eq!(g.matrix(), triangle().matrix(), epsilon = 1e-13);
        let gf = sigma_of_gamma(&triangle(), tol());
        assert_abs_diff_eq!(gf.sigma, sigma, epsilon = 1e-13);
        assert_eq!(gf.dim, 2);
        assert_abs_diff_eq!(gf.b.transpose() * &gf.b, sigma, epsilon = 1e-12);
        // Σ is the pseudo-inverse of Θ.
        let theta = theta_of_gamma(&triangle(), tol()).unwrap();
        assert_abs_diff_eq!(theta.pseudo_inverse(tol()).unwrap(), sigma, epsilon = 1e-12);
    }

    #[test]
    fn realization_is_deterministic_and_reproduces_distances() {
        let gf = sigma_of_gamma(&triangle(), tol());
        assert_abs_diff_eq!(Variogram::from_points(&gf.b).matrix(), triangle().matrix(), epsilon = 1e-12);
        for row in gf.b.row_iter() {
            let first = row.iter().find(|x| x.abs() > 1e-12).unwrap();
            assert!(*first > 0.0);
        }
    }

    #[test]
    fn unit_simplex_agrees_with_direct_inverse() {
        let g = Variogram::new(DMatrix::from_fn(3, 3, |i, j| if i == j { 0.0 } else { 2.0 })).unwrap();
        let theta = theta_of_gamma(&g, tol()).unwrap();
        let oracle = cm_inverse_oracle(&g);
        assert_abs_diff_eq!(theta.matrix(), &oracle.view((0, 0), (3, 3)).into_owned(), epsilon = 1e-13);
        assert!(fiedler_bapat_check(&g, tol()).unwrap().residual < 1e-10);
    }

    #[test]
    fn regular_simplex_gram_is_the_projector() {
        let g = Variogram::new(DMatrix::from_fn(4, 4, |i, j| if i == j { 0.0 } else { 2.0 })).unwrap();
        let gf = sigma_of_gamma(&g, tol());
        assert_abs_diff_eq!(gf.sigma, linalg::centering(4), epsilon = 1e-13);
        assert_eq!(dimensionality(&g, tol()).unwrap(), 3);
    }

    #[test]
    fn zero_variogram() {
        let z = Variogram::zeros(4);
        let gf = sigma_of_gamma(&z, tol());
        assert_eq!(gf.dim, 0);
        assert_eq!(max_abs(&gf.sigma), 0.0);
        assert_eq!(dimensionality(&z, tol()).unwrap(), 0);
        assert_eq!(cnd_certificate(&z, tol()).status, Definiteness::Weak);
        assert_eq!(gamma_of_sigma(&DMatrix::zeros(3, 3), tol()).unwrap(), Variogram::zeros(3));
        assert_eq!(covariance_mapping(&z, 2).unwrap(), DMatrix::zeros(3, 3));
    }

    #[test]
    fn certificates() {
        assert!(cnd_certificate(&triangle(), tol()).is_strict());
        let mut m = DMatrix::zeros(3, 3);
        m[(0, 1)] = -1.0;
        m[(1, 0)] = -1.0;
        assert_eq!(cnd_certificate(&Variogram::new(m).unwrap(), tol()).status, Definiteness::NotCnd);
        // Collinear points in d = 4 are on the boundary.
        let pts = DMatrix::from_row_slice(1, 4, &[0.0, 1.0, 3.0, 7.0]);
        let cert = cnd_certificate(&Variogram::from_points(&pts), tol());
        assert_eq!(cert.status, Definiteness::Weak);
        assert_eq!(cert.eigenvalues.len(), 3);
        assert!(cert.margin <= 0.0);
        // A single vertex is vacuously strict.
        assert!(cnd_certificate(&Variogram::zeros(1), tol()).is_strict());
    }

    #[test]
    fn theta_rejects_boundary() {
        let pts = DMatrix::from_row_slice(1, 3, &[0.0, 1.0, 2.0]);
        assert!(matches!(
            theta_of_gamma(&Variogram::from_points(&pts), tol()),
            Err(VarAlgError::NotStrictlyCnd { .. })
        ));
    }

    #[test]
    fn covariance_mapping_by_hand_and_by_inverse() {
        let s3 = covariance_mapping(&triangle(), 3).unwrap();
        assert_eq!(s3, DMatrix::from_row_slice(2, 2, &[25.0, 16.0, 16.0, 16.0]));
        let theta = theta_of_gamma(&triangle(), tol()).unwrap();
        for k in 1..=3 {
            let inv = covariance_mapping(&triangle(), k).unwrap().try_inverse().unwrap();
            let rest: Vec<usize> = (0..3).filter(|&i| i != k - 1).collect();
            assert_abs_diff_eq!(inv, linalg::select(theta.matrix(), &rest, &rest), epsilon = 1e-13);
        }
        assert_eq!(covariance_mapping(&triangle(), 4), Err(VarAlgError::VertexOutOfRange(4, 3)));
    }

    #[test]
    fn scaling_variogram_scales_laplacian_inversely() {
        let c = 3.7;
        let a = fiedler_bapat_check(&triangle(), tol()).unwrap();
        let b = fiedler_bapat_check(&triangle().scaled(c), tol()).unwrap();
        assert_abs_diff_eq!(b.bordered.theta.matrix() * c, a.bordered.theta.matrix().clone(), epsilon = 1e-13);
        assert!(b.residual < 1e-12);
    }

    #[test]
    fn pseudo_determinants() {
        let path = SignedLaplacian::from_edge_weights(3, &[(1, 2, 1.0 / 9.0), (2, 3, 1.0 / 16.0)]);
        assert_abs_diff_eq!(pseudo_determinant(&path, tol()).unwrap(), 1.0 / 48.0, epsilon = 1e-15);
        let k3 = SignedLaplacian::from_edge_weights(3, &[(1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)]);
        assert_abs_diff_eq!(pseudo_determinant(&k3, tol()).unwrap(), 9.0, epsilon = 1e-12);
        let zero = SignedLaplacian::from_edge_weights(3, &[]);
        assert!(matches!(pseudo_determinant(&zero, tol()), Err(VarAlgError::RankDeficient { .. })));
    }

    #[test]
    fn pseudo_determinant_is_d_times_a_cofactor() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..20 {
            let theta = model::random_complete_laplacian(5, &mut rng);
            let minor = theta.matrix().clone().remove_row(0).remove_column(0);
            let expected = 5.0 * minor.determinant();
            let got = pseudo_determinant(&theta, tol()).unwrap();
            assert!((got - expected).abs() <= 1e-10 * expected.abs());
        }
    }

    #[test]
    fn round_trips() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..50 {
            let d = rng.random_range(2..8);
            let raw = DMatrix::from_fn(d, d, |_, _| rng.random_range(-5.0..5.0));
            let mut g = symmetrize(&raw);
            g.fill_diagonal(0.0);
            let g = Variogram::new(g).unwrap();
            let back = gamma_of_sigma(&sigma_matrix(g.matrix()), tol()).unwrap();
            assert_abs_diff_eq!(back.matrix(), g.matrix(), epsilon = 1e-12);

            let theta = model::random_complete_laplacian(d, &mut rng);
            let gamma = gamma_of_theta(&theta, tol()).unwrap();
            let again = theta_of_gamma(&gamma, tol()).unwrap();
            let scale = max_abs(theta.matrix());
            assert!(max_abs(&(again.matrix() - theta.matrix())) < 1e-9 * scale);
        }
    }

    #[test]
    fn bordered_determinant_variants_differ_by_power_of_two() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for d in 2..7 {
            let g = model::generic_variogram(d, &mut rng);
            let a = linalg::det(&cayley_menger(&g, CmVariant::Scaled));
            let b = linalg::det(&cayley_menger(&g, CmVariant::Standard));
            let factor = (-2.0f64).powi(d as i32 - 1);
            assert!((a - factor * b).abs() <= 1e-10 * a.abs().max(1.0));
        }
    }

    #[test]
    fn low_rank_gram_gives_rank_plus_two() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let d = 6;
        for r in 1..=3 {
            for _ in 0..100 {
                let sigma = model::random_low_rank_gram(d, r, &mut rng);
                let gamma = gamma_of_sigma(&sigma, tol()).unwrap();
                assert_eq!(linalg::numerical_rank(gamma.matrix(), tol()), (r + 2).min(d));
                if r <= d - 3 {
                    assert_eq!(dimensionality(&gamma, tol()).unwrap(), r);
                }
            }
        }
    }

    #[test]
    fn corank_one_gram_is_not_strict() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let d = 5;
        for _ in 0..20 {
            let sigma = model::random_low_rank_gram(d, d - 2, &mut rng);
            let gamma = gamma_of_sigma(&sigma, tol()).unwrap();
            // Witness: kernel vector of Σ orthogonal to 1.
            let v = ones_complement_basis(d);
            let (vals, vecs) = sym_eigen_sorted(&(v.transpose() * &sigma * &v));
            assert!(vals[0].abs() < 1e-10 * vals[vals.len() - 1]);
            let x = &v * vecs.column(0);
            let q = (x.transpose() * gamma.matrix() * &x)[(0, 0)];
            assert!(q.abs() < 1e-9 * max_abs(gamma.matrix()));
            assert!(!cnd_certificate(&gamma, tol()).is_strict());
        }
    }

    #[test]
    fn principal_submatrices_stay_strict() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for _ in 0..50 {
            let theta = model::random_complete_laplacian(6, &mut rng);
            let g = gamma_of_theta(&theta, tol()).unwrap();
            let idx: Vec<usize> = (0..6).filter(|_| rng.random_bool(0.6)).collect();
            if idx.len() >= 2 {
                assert!(cnd_certificate(&g.principal(&idx), tol()).is_strict());
            }
        }
    }

    #[test]
    fn shape_validation() {
        assert!(matches!(
            Variogram::new(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 0.0])),
            Err(VarAlgError::NotHollow(1))
        ));
        assert!(matches!(
            Variogram::new(DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 3.0, 0.0])),
            Err(VarAlgError::NotSymmetric(1, 2))
        ));
        assert!(matches!(
            Variogram::new(DMatrix::zeros(2, 3)),
            Err(VarAlgError::NotSquare { .. })
        ));
        let bad_sigma = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        assert!(matches!(gamma_of_sigma(&bad_sigma, tol()), Err(VarAlgError::KernelViolation(_))));
    }

    #[test]
    fn json_round_trip() {
        let text = serde_json::to_string(&triangle()).unwrap();
        assert_eq!(text, r#"{"d":3,"rows":[[0.0,9.0,25.0],[9.0,0.0,16.0],[25.0,16.0,0.0]]}"#);
        let back: Variogram = serde_json::from_str(&text).unwrap();
        assert_eq!(back, triangle());
    }
}
