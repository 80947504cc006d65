//! Random parameter generators for tests, examples and reproduction runs.
//!
//! A *model point* for a graph is `γ(Θ⁺)` where Θ is a Laplacian supported on
//! the graph's edges with positive weights, so every nonedge is a saturated
//! conditional independence.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{StandardNormal, Uniform};

use crate::graphs::UndirectedGraph;
use crate::linalg::{ones_complement_basis, Tolerance};
use crate::varalg::{gamma_of_theta, SignedLaplacian, Variogram};

/// Edge weights are drawn uniformly from this range.
pub const WEIGHT_RANGE: (f64, f64) = (0.5, 2.0);

/// Laplacian with independent positive weights on the edges of `g`.
pub fn random_laplacian_on<R: Rng + ?Sized>(g: &UndirectedGraph, rng: &mut R) -> SignedLaplacian {
    let w = Uniform::new(WEIGHT_RANGE.0, WEIGHT_RANGE.1).expect("valid range");
    let weights: Vec<_> = g
        .edges()
        .into_iter()
        .map(|(i, j)| (i, j, rng.sample(w)))
        .collect();
    SignedLaplacian::from_edge_weights(g.num_vertices(), &weights)
}

pub fn random_complete_laplacian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> SignedLaplacian {
    random_laplacian_on(&UndirectedGraph::complete(d), rng)
}

/// Variogram of a random positive Laplacian on a connected graph.
pub fn model_point<R: Rng + ?Sized>(g: &UndirectedGraph, rng: &mut R) -> Variogram {
    assert!(g.is_connected(), "model points need a connected graph");
    let theta = random_laplacian_on(g, rng);
    gamma_of_theta(&theta, Tolerance::default()).expect("connected positive Laplacian is invertible on 1⊥")
}

/// Squared distances of `d` standard-normal points in ℝ^m.
pub fn random_points_variogram<R: Rng + ?Sized>(d: usize, m: usize, rng: &mut R) -> Variogram {
    let pts = DMatrix::from_fn(m, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    Variogram::from_points(&pts)
}

/// A strictly CND variogram with no structural zeros in Θ (almost surely):
/// `d` Gaussian points in general position in ℝ^(d-1).
pub fn generic_variogram<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Variogram {
    random_points_variogram(d, d.saturating_sub(1).max(1), rng)
}

/// Random PSD `Σ = V W Wᵀ Vᵀ` of rank `r` with `Σ1 = 0`.
pub fn random_low_rank_gram<R: Rng + ?Sized>(d: usize, r: usize, rng: &mut R) -> DMatrix<f64> {
    let v = ones_complement_basis(d);
    let w = DMatrix::from_fn(d - 1, r, |_, _| rng.sample::<f64, _>(StandardNormal));
    let b = &v * w;
    &b * b.transpose()
}
