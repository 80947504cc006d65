//! Univariate polynomial utilities: coefficients by interpolation on a circle
//! and roots from companion-matrix eigenvalues with Newton polishing.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Evaluates `Σ c_k x^k` by Horner's rule, with the derivative.
pub fn eval_with_derivative(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

pub fn eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    eval_with_derivative(coeffs, x).0
}

/// Coefficients (ascending powers) of a polynomial of degree at most
/// `degree`, recovered from its values at `degree + 1` equispaced points on
/// the circle of radius `radius` by a discrete Fourier transform.
pub fn interpolate_on_circle<F>(f: F, degree: usize, radius: f64) -> Vec<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let n = degree + 1;
    let nodes: Vec<Complex64> = (0..n)
        .map(|m| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * m as f64 / n as f64))
        .collect();
    let values: Vec<Complex64> = nodes.iter().map(|&w| f(w * radius)).collect();
    (0..n)
        .map(|k| {
            let s: Complex64 = values
                .iter()
                .zip(&nodes)
                .map(|(&v, &w)| v * w.powi(-(k as i32)))
                .sum();
            s / (n as f64) / radius.powi(k as i32)
        })
        .collect()
}

/// Drops trailing coefficients whose magnitude is at most `rel` times the
/// largest one.
pub fn trim(coeffs: &[Complex64], rel: f64) -> Vec<Complex64> {
    let top = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut end = coeffs.len();
    while end > 0 && coeffs[end - 1].norm() <= rel * top {
        end -= 1;
    }
    coeffs[..end].to_vec()
}

/// All complex roots of a polynomial with real coefficients (ascending),
/// from the eigenvalues of the companion matrix, each polished by a few
/// Newton steps on the original polynomial.
pub fn real_poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    assert!(lead != 0.0, "leading coefficient must be nonzero");
    let mut companion = DMatrix::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        companion[(i, n - 1)] = -coeffs[i] / lead;
    }
    let complex: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    companion
        .complex_eigenvalues()
        .iter()
        .map(|&z| polish(&complex, z))
        .collect()
}

/// Newton refinement; keeps the starting point if a step would not improve.
pub fn polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..8 {
        let (p, dp) = eval_with_derivative(coeffs, z);
        if dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        if eval(coeffs, next).norm() >= p.norm() {
            break;
        }
        z = next;
    }
    z
}

/// Smallest pairwise `|r_i − r_j| / max(|r_i|, |r_j|)`; infinite for fewer
/// than two roots.
pub fn min_relative_separation(roots: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let scale = roots[i].norm().max(roots[j].norm());
            let gap = (roots[i] - roots[j]).norm();
            best = best.min(if scale > 0.0 { gap / scale } else { 0.0 });
        }
    }
    best
}
