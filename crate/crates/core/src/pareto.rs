//! Hüsler–Reiss multivariate Pareto data: exponent-measure density,
//! conditional Gaussian laws, exact sampling, thresholding and the empirical
//! variogram.
//!
//! The exponent measure density is
//!
//! ```text
//! λ(y) = c₁ exp(−½ (y, 1) CM(Γ)⁻¹ (y, 1)ᵀ),   c₁ = (−det CM(2πΓ))^{−1/2}.
//! ```
//!
//! Restricted to the halfspace `{y_k ≥ 0}`, `λ` is the law of `Y^k` with
//! `Y_k ~ Exp(1)` and `Y_{∖k} | Y_k ~ N(Y_k 1 − ½Γ_{∖k,k}, Σ^(k))`.
//!
//! # Exact sampler
//!
//! Pick `k` uniformly and draw `Y^k`. The mixture density is
//! `λ(y) m(y) / d` on `L = {y ≰ 0}`, where `m(y) = #{j : y_j ≥ 0}`. Accepting with
//! probability `1 / m(y)` leaves density proportional to `λ` on `L`, which is
//! the Pareto law. The acceptance rate is `Λ(L) / d ∈ [1/d, 1]`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::VertexSet;
use crate::linalg::{self, Tolerance};
use crate::varalg::{
    cayley_menger, cnd_certificate, covariance_mapping, fiedler_bapat_check, pseudo_determinant,
    CmVariant, VarAlgError, Variogram,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParetoError {
    #[error(transparent)]
    VarAlg(#[from] VarAlgError),
    #[error("halfspace {k} has {count} observations, at least 2 are needed")]
    InsufficientHalfspaceData { k: usize, count: usize },
    #[error("no row exceeds the threshold {u}")]
    EmptyExceedanceSet { u: f64 },
    #[error("conditioning block is singular")]
    SingularConditioning,
    #[error("invalid index sets: {0}")]
    InvalidSets(String),
    #[error("point has dimension {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("quantile level {0} outside [0, 1)")]
    InvalidQuantile(f64),
    #[error("row {0} has no nonnegative coordinate")]
    OutsideSupport(usize),
}

/// Observations `y_ℓ ∈ L = {y : y ≰ 0}`, one per row.
#[derive(Clone, Debug, PartialEq)]
pub struct ParetoSample {
    data: DMatrix<f64>,
}

impl ParetoSample {
    /// Checks the support condition row by row.
    pub fn new(data: DMatrix<f64>) -> Result<Self, ParetoError> {
        for (l, row) in data.row_iter().enumerate() {
            if !row.iter().any(|&x| x >= 0.0) {
                return Err(ParetoError::OutsideSupport(l + 1));
            }
        }
        Ok(ParetoSample { data })
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_data(self) -> DMatrix<f64> {
        self.data
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn d(&self) -> usize {
        self.data.ncols()
    }

    /// `J_k = {ℓ : y_{ℓk} ≥ 0}` as 0-based row indices, for 1-based `k`.
    pub fn halfspace(&self, k: usize) -> Vec<usize> {
        (0..self.n()).filter(|&l| self.data[(l, k - 1)] >= 0.0).collect()
    }
}

fn require_strict(gamma: &Variogram) -> Result<(), ParetoError> {
    let cert = cnd_certificate(gamma, Tolerance::global());
    if cert.is_strict() {
        Ok(())
    } else {
        Err(VarAlgError::NotStrictlyCnd { margin: cert.margin }.into())
    }
}

/// Precomputed pieces of `log λ`.
#[derive(Clone, Debug)]
pub struct ExponentDensity {
    theta: DMatrix<f64>,
    p: DVector<f64>,
    r2: f64,
    log_c1: f64,
}

impl ExponentDensity {
    pub fn new(gamma: &Variogram) -> Result<Self, ParetoError> {
        require_strict(gamma)?;
        let tol = Tolerance::global();
        let fb = fiedler_bapat_check(gamma, tol)?;
        let d = gamma.d() as f64;
        // −det CM(2πΓ) = (2π)^{d−1} · d / Det Θ.
        let log_pdet = pseudo_determinant(&fb.bordered.theta, tol)?.ln();
        let log_c1 = -0.5 * (d.ln() + (d - 1.0) * (2.0 * std::f64::consts::PI).ln() - log_pdet);
        Ok(ExponentDensity {
            theta: fb.bordered.theta.into_matrix(),
            p: fb.bordered.p,
            r2: fb.bordered.r2,
            log_c1,
        })
    }

    pub fn log_c1(&self) -> f64 {
        self.log_c1
    }

    pub fn log_density(&self, y: &DVector<f64>) -> Result<f64, ParetoError> {
        if y.len() != self.p.len() {
            return Err(ParetoError::DimensionMismatch { got: y.len(), expected: self.p.len() });
        }
        let quad = y.dot(&(&self.theta * y)) + 2.0 * self.p.dot(y) + self.r2;
        Ok(self.log_c1 - 0.5 * quad)
    }
}

/// `log λ(y)` for a strictly CND Γ.
pub fn log_exponent_density(gamma: &Variogram, y: &DVector<f64>) -> Result<f64, ParetoError> {
    ExponentDensity::new(gamma)?.log_density(y)
}

/// `log c₁` straight from the dense determinant `−det CM(2πΓ)`.
pub fn log_c1_dense(gamma: &Variogram) -> f64 {
    let scaled = gamma.scaled(2.0 * std::f64::consts::PI);
    -0.5 * (-linalg::det(&cayley_menger(&scaled, CmVariant::Standard))).ln()
}

/// Gaussian law of `Y_A` given `Y_C = y_C`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalGaussian {
    pub a: VertexSet,
    pub c: VertexSet,
    pub sigma: DMatrix<f64>,
    pub mu: DVector<f64>,
}

/// `Σ* = −½Γ_AA − (−½Γ_AC, 1) CM(Γ_CC)⁻¹ (−½Γ_CA; 1ᵀ)` and
/// `μ* = (−½Γ_AC, 1) CM(Γ_CC)⁻¹ (y_C; 1)`.
pub fn conditional_params(
    gamma: &Variogram,
    a: VertexSet,
    c: VertexSet,
    y_c: &DVector<f64>,
) -> Result<ConditionalGaussian, ParetoError> {
    let d = gamma.d();
    let full = VertexSet::full(d);
    if a.is_empty() || c.is_empty() || !a.is_disjoint(c) || !a.union(c).is_subset(full) {
        return Err(ParetoError::InvalidSets(format!("A = {a}, C = {c} on {d} vertices")));
    }
    if y_c.len() != c.len() {
        return Err(ParetoError::DimensionMismatch { got: y_c.len(), expected: c.len() });
    }
    require_strict(gamma)?;
    let (ai, ci) = (a.indices(), c.indices());
    let g = gamma.matrix();
    let cm = crate::varalg::cayley_menger_block(g, &ci, &ci, CmVariant::Standard);
    let inv = cm.try_inverse().ok_or(ParetoError::SingularConditioning)?;
    let m = ci.len();
    let left = DMatrix::from_fn(ai.len(), m + 1, |r, s| if s < m { -0.5 * g[(ai[r], ci[s])] } else { 1.0 });
    let gain = &left * inv;
    let sigma = linalg::select(g, &ai, &ai) * -0.5 - &gain * left.transpose();
    let mut rhs = DVector::from_element(m + 1, 1.0);
    rhs.rows_mut(0, m).copy_from(y_c);
    Ok(ConditionalGaussian { a, c, sigma: linalg::symmetrize(&sigma), mu: gain * rhs })
}

/// Mean shift and Cholesky factor of `Y_{∖k} − Y_k 1`.
#[derive(Clone, Debug)]
struct HalfspaceLaw {
    k: usize,
    shift: DVector<f64>,
    chol: DMatrix<f64>,
}

impl HalfspaceLaw {
    fn new(gamma: &Variogram, k: usize) -> Result<Self, ParetoError> {
        let cov = covariance_mapping(gamma, k)?;
        let chol = cov
            .cholesky()
            .ok_or(VarAlgError::NotStrictlyCnd { margin: 0.0 })?
            .l();
        let shift = DVector::from_iterator(
            gamma.d() - 1,
            (1..=gamma.d()).filter(|&i| i != k).map(|i| -0.5 * gamma.get(i, k)),
        );
        Ok(HalfspaceLaw { k, shift, chol })
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        let m = self.shift.len();
        let yk: f64 = rng.sample(Exp1);
        let z = DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
        let rest = &self.shift + &self.chol * z;
        let mut r = 0;
        for (i, slot) in out.iter_mut().enumerate() {
            if i + 1 == self.k {
                *slot = yk;
            } else {
                *slot = yk + rest[r];
                r += 1;
            }
        }
    }
}

/// RNG for `(seed, stream)`: halfspace `k` uses stream `k`, the mixture
/// sampler stream 0.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `n` exact draws from the halfspace law `Y^k`.
pub fn sample_halfspace(gamma: &Variogram, k: usize, n: usize, seed: u64) -> Result<ParetoSample, ParetoError> {
    sample_halfspace_with(gamma, k, n, &mut stream_rng(seed, k as u64))
}

pub fn sample_halfspace_with<R: Rng + ?Sized>(gamma: &Variogram, k: usize, n: usize, rng: &mut R) -> Result<ParetoSample, ParetoError> {
    require_strict(gamma)?;
    let law = HalfspaceLaw::new(gamma, k)?;
    let d = gamma.d();
    let mut data = DMatrix::zeros(n, d);
    let mut row = vec![0.0; d];
    for l in 0..n {
        law.draw(rng, &mut row);
        for (i, &x) in row.iter().enumerate() {
            data[(l, i)] = x;
        }
    }
    Ok(ParetoSample { data })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerStats {
    pub proposals: usize,
    pub accepted: usize,
}

impl SamplerStats {
    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.proposals as f64
    }
}

/// `n` exact draws from the Pareto law by halfspace mixture and rejection.
pub fn sample_pareto(gamma: &Variogram, n: usize, seed: u64) -> Result<(ParetoSample, SamplerStats), ParetoError> {
    sample_pareto_with(gamma, n, &mut stream_rng(seed, 0))
}

pub fn sample_pareto_with<R: Rng + ?Sized>(gamma: &Variogram, n: usize, rng: &mut R) -> Result<(ParetoSample, SamplerStats), ParetoError> {
    require_strict(gamma)?;
    let d = gamma.d();
    let laws = (1..=d).map(|k| HalfspaceLaw::new(gamma, k)).collect::<Result<Vec<_>, _>>()?;
    let mut data = DMatrix::zeros(n, d);
    let mut row = vec![0.0; d];
    let mut stats = SamplerStats { proposals: 0, accepted: 0 };
    while stats.accepted < n {
        stats.proposals += 1;
        let k = rng.random_range(0..d);
        laws[k].draw(rng, &mut row);
        let m = row.iter().filter(|&&x| x >= 0.0).count();
        if rng.random::<f64>() * (m as f64) < 1.0 {
            for (i, &x) in row.iter().enumerate() {
                data[(stats.accepted, i)] = x;
            }
            stats.accepted += 1;
        }
    }
    Ok((ParetoSample { data }, stats))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceDenominator {
    /// Unbiased, `n − 1`.
    #[default]
    Unbiased,
    /// Maximum likelihood, `n`.
    Plain,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfspaceWeighting {
    /// Plain average over the `d` halfspaces.
    #[default]
    Uniform,
    /// Halfspace `k` weighted by `|J_k|`.
    BySize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalOptions {
    pub denominator: VarianceDenominator,
    pub weighting: HalfspaceWeighting,
}

/// `Γ̄_ij = (1/d) Σ_k Var(y_ℓi − y_ℓj : ℓ ∈ J_k)`.
pub fn empirical_variogram(s: &ParetoSample) -> Result<Variogram, ParetoError> {
    empirical_variogram_with(s, EmpiricalOptions::default())
}

pub fn empirical_variogram_with(s: &ParetoSample, opts: EmpiricalOptions) -> Result<Variogram, ParetoError> {
    let d = s.d();
    let mut acc = DMatrix::zeros(d, d);
    let mut total_weight = 0.0;
    for k in 1..=d {
        let rows = s.halfspace(k);
        let n = rows.len();
        if n < 2 {
            return Err(ParetoError::InsufficientHalfspaceData { k, count: n });
        }
        let block = DMatrix::from_fn(n, d, |r, c| s.data[(rows[r], c)]);
        let mean = block.row_mean();
        let centered = DMatrix::from_fn(n, d, |r, c| block[(r, c)] - mean[c]);
        let denom = match opts.denominator {
            VarianceDenominator::Unbiased => (n - 1) as f64,
            VarianceDenominator::Plain => n as f64,
        };
        let cov = centered.transpose() * &centered / denom;
        let weight = match opts.weighting {
            HalfspaceWeighting::Uniform => 1.0,
            HalfspaceWeighting::BySize => n as f64,
        };
        acc += crate::varalg::gamma_matrix(&cov) * weight;
        total_weight += weight;
    }
    Ok(Variogram::new(acc / total_weight)?)
}

/// Rows `x − u1` with `max x > u`, where `u = −log(1 − q)`.
pub fn threshold_exceedances(raw: &DMatrix<f64>, q: f64) -> Result<ParetoSample, ParetoError> {
    if !(0.0..1.0).contains(&q) {
        return Err(ParetoError::InvalidQuantile(q));
    }
    let u = -(1.0 - q).ln();
    let kept: Vec<usize> = (0..raw.nrows())
        .filter(|&l| raw.row(l).iter().any(|&x| x > u))
        .collect();
    if kept.is_empty() {
        return Err(ParetoError::EmptyExceedanceSet { u });
    }
    let data = DMatrix::from_fn(kept.len(), raw.ncols(), |r, c| raw[(kept[r], c)] - u);
    Ok(ParetoSample { data })
}

/// Column-wise `x ↦ −log(1 − rank/(n + 1))`, ties sharing their average rank.
pub fn rank_transform(raw: &DMatrix<f64>) -> DMatrix<f64> {
    let n = raw.nrows();
    let mut out = DMatrix::zeros(n, raw.ncols());
    for c in 0..raw.ncols() {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| raw[(a, c)].total_cmp(&raw[(b, c)]));
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && raw[(order[end], c)] == raw[(order[start], c)] {
                end += 1;
            }
            // Ranks start+1 ..= end share their mean.
            let rank = (start + 1 + end) as f64 / 2.0;
            for &l in &order[start..end] {
                out[(l, c)] = -(1.0 - rank / (n + 1) as f64).ln();
            }
            start = end;
        }
    }
    out
}

/// Two-sample Kolmogorov–Smirnov statistic and asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut stat) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        stat = stat.max((i as f64 / n - j as f64 / m).abs());
    }
    let ne = (n * m / (n + m)).sqrt();
    (stat, kolmogorov_survival((ne + 0.12 + 0.11 / ne) * stat))
}

/// `P(K > x)` for the Kolmogorov distribution.
fn kolmogorov_survival(x: f64) -> f64 {
    if x < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * x * x).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model;
    use statrs::distribution::{ContinuousCDF, Normal};

    fn example_triangle() -> Variogram {
        Variogram::from_rows(&[&[0.0, 9.0, 25.0], &[9.0, 0.0, 16.0], &[25.0, 16.0, 0.0]]).unwrap()
    }

    fn pair(g: f64) -> Variogram {
        Variogram::from_rows(&[&[0.0, g], &[g, 0.0]]).unwrap()
    }

    fn phi(x: f64) -> f64 {
        Normal::standard().cdf(x)
    }

    #[test]
    fn bivariate_density_matches_closed_form() {
        let g = 1.7;
        let dens = ExponentDensity::new(&pair(g)).unwrap();
        for (y1, y2) in [(0.3, -0.2), (1.0, 2.0), (-0.5, 0.4)] {
            let z = (y2 - y1 + g / 2.0) / g.sqrt();
            let want = -y1 - 0.5 * z * z - 0.5 * (2.0 * std::f64::consts::PI).ln() - 0.5 * g.ln();
            let got = dens.log_density(&DVector::from_vec(vec![y1, y2])).unwrap();
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn density_normalizer_and_translation() {
        let mut rng = stream_rng(5, 0);
        for d in 2..7 {
            let gamma = model::generic_variogram(d, &mut rng);
            let dens = ExponentDensity::new(&gamma).unwrap();
            assert!((dens.log_c1() - log_c1_dense(&gamma)).abs() < 1e-9 * dens.log_c1().abs().max(1.0));
            let y = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
            let t: f64 = rng.random_range(-2.0..2.0);
            let shifted = y.add_scalar(t);
            let diff = dens.log_density(&shifted).unwrap() - dens.log_density(&y).unwrap();
            assert!((diff + t).abs() < 1e-9, "d = {d}: {diff} vs {}", -t);
        }
        assert!(log_exponent_density(&Variogram::zeros(3), &DVector::zeros(3)).is_err());
    }

    #[test]
    fn singleton_conditioning_is_covariance_mapping() {
        let gamma = example_triangle();
        let a = VertexSet::from_labels([1, 3]);
        let c = VertexSet::singleton(2);
        let yk = 0.7;
        let cg = conditional_params(&gamma, a, c, &DVector::from_vec(vec![yk])).unwrap();
        let want = covariance_mapping(&gamma, 2).unwrap();
        assert!(linalg::max_abs(&(&cg.sigma - want)) < 1e-12);
        assert!((cg.mu[0] - (yk - 4.5)).abs() < 1e-12);
        assert!((cg.mu[1] - (yk - 8.0)).abs() < 1e-12);
        assert!(conditional_params(&gamma, VertexSet::EMPTY, c, &DVector::from_vec(vec![yk])).is_err());
        assert!(conditional_params(&gamma, a, a, &DVector::from_vec(vec![0.0, 0.0])).is_err());
    }

    #[test]
    fn halfspace_variances_recover_gamma() {
        let gamma = example_triangle();
        let n = 50_000;
        for k in 1..=3 {
            let s = sample_halfspace(&gamma, k, n, 11).unwrap();
            assert!(s.data().column(k - 1).iter().all(|&x| x >= 0.0));
            for i in 1..=3 {
                for j in i + 1..=3 {
                    let diffs: Vec<f64> = s.data().row_iter().map(|r| r[i - 1] - r[j - 1]).collect();
                    let mean = diffs.iter().sum::<f64>() / n as f64;
                    let var = diffs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
                    let target = gamma.get(i, j);
                    let se = target * (2.0 / (n - 1) as f64).sqrt();
                    assert!((var - target).abs() < 3.0 * se, "k={k} ({i},{j}): {var} vs {target}");
                }
            }
        }
    }

    #[test]
    fn pareto_sampler_bivariate_cdf() {
        let g = 1.3;
        let n = 40_000;
        let (s, stats) = sample_pareto(&pair(g), n, 21).unwrap();
        let rate = stats.acceptance_rate();
        assert!(rate > 0.5 && rate <= 1.0);
        // Λ(L) = 2Φ(√γ/2); the rate estimates Λ(L)/2.
        let mass = 2.0 * phi(g.sqrt() / 2.0);
        assert!((rate - mass / 2.0).abs() < 4.0 * (0.25 / stats.proposals as f64).sqrt());
        assert!(s.data().row_iter().all(|r| r.iter().any(|&x| x >= 0.0)));
        let exponent = |y1: f64, y2: f64| {
            let r = g.sqrt();
            (-y1).exp() * phi(r / 2.0 + (y2 - y1) / r) + (-y2).exp() * phi(r / 2.0 + (y1 - y2) / r)
        };
        for y1 in [0.0, 0.5, 1.5] {
            for y2 in [0.2, 1.0, 2.5] {
                let p = 1.0 - exponent(y1, y2) / mass;
                let hits = s.data().row_iter().filter(|r| r[0] <= y1 && r[1] <= y2).count();
                let se = (p * (1.0 - p) / n as f64).sqrt();
                assert!((hits as f64 / n as f64 - p).abs() < 3.0 * se, "({y1}, {y2})");
            }
        }
    }

    #[test]
    fn empirical_variogram_basics() {
        let rows = DMatrix::from_row_slice(2, 3, &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0]);
        let s = ParetoSample::new(rows).unwrap();
        assert_eq!(empirical_variogram(&s).unwrap(), Variogram::zeros(3));
        let lonely = ParetoSample::new(DMatrix::from_row_slice(2, 2, &[1.0, -1.0, 2.0, -0.5])).unwrap();
        assert_eq!(
            empirical_variogram(&lonely),
            Err(ParetoError::InsufficientHalfspaceData { k: 2, count: 0 })
        );
        let (s, _) = sample_pareto(&example_triangle(), 2_000, 3).unwrap();
        let est = empirical_variogram(&s).unwrap();
        let mut rev = s.data().clone();
        for (l, row) in s.data().row_iter().enumerate() {
            rev.set_row(s.n() - 1 - l, &row);
        }
        let est_rev = empirical_variogram(&ParetoSample::new(rev).unwrap()).unwrap();
        assert!(linalg::max_abs(&(est.matrix() - est_rev.matrix())) < 1e-10);
        let plain = empirical_variogram_with(&s, EmpiricalOptions { denominator: VarianceDenominator::Plain, ..Default::default() }).unwrap();
        assert!(plain.get(1, 2) < est.get(1, 2));
    }

    #[test]
    fn thresholding() {
        let raw = DMatrix::from_row_slice(3, 2, &[0.5, -1.0, -0.2, -0.3, 3.0, 0.0]);
        let s = threshold_exceedances(&raw, 0.0).unwrap();
        assert_eq!(s.n(), 2);
        let q = 0.9;
        let u = -(1.0f64 - q).ln();
        let s = threshold_exceedances(&raw, q).unwrap();
        assert_eq!(s.n(), 1);
        assert!((s.data()[(0, 0)] - (3.0 - u)).abs() < 1e-15);
        assert!(matches!(threshold_exceedances(&raw, 0.999), Err(ParetoError::EmptyExceedanceSet { .. })));
        assert!(threshold_exceedances(&raw, 1.0).is_err());
    }

    #[test]
    fn kept_fraction_under_independence() {
        let (n, d, q) = (20_000, 3, 0.95);
        let mut rng = stream_rng(9, 0);
        let raw = DMatrix::from_fn(n, d, |_, _| rng.sample::<f64, _>(Exp1));
        let kept = threshold_exceedances(&raw, q).unwrap().n() as f64 / n as f64;
        let p = 1.0 - q.powi(d as i32);
        assert!((kept - p).abs() < 3.0 * (p * (1.0 - p) / n as f64).sqrt());
    }

    #[test]
    fn rank_transform_is_exponential_scores() {
        let raw = DMatrix::from_row_slice(4, 1, &[10.0, -2.0, 10.0, 3.0]);
        let t = rank_transform(&raw);
        let score = |r: f64| -(1.0 - r / 5.0f64).ln();
        assert_eq!(t[(1, 0)], score(1.0));
        assert_eq!(t[(3, 0)], score(2.0));
        assert_eq!(t[(0, 0)], score(3.5));
        assert_eq!(t[(2, 0)], score(3.5));
    }

    #[test]
    fn ks_detects_shift() {
        let mut rng = stream_rng(4, 0);
        let a: Vec<f64> = (0..2000).map(|_| rng.sample(StandardNormal)).collect();
        let b: Vec<f64> = (0..2000).map(|_| rng.sample(StandardNormal)).collect();
        let c: Vec<f64> = b.iter().map(|x| x + 0.3).collect();
        assert!(ks_two_sample(&a, &b).1 > 0.01);
        assert!(ks_two_sample(&a, &c).1 < 1e-6);
    }

    #[test]
    fn sampling_is_reproducible() {
        let g = example_triangle();
        assert_eq!(sample_pareto(&g, 50, 8).unwrap(), sample_pareto(&g, 50, 8).unwrap());
        assert_ne!(sample_pareto(&g, 50, 8).unwrap().0, sample_pareto(&g, 50, 9).unwrap().0);
    }
}
