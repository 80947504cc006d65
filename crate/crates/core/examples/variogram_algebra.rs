//! Conversions between a variogram Γ, its Gram matrix Σ and its signed
//! Laplacian Θ, on the right triangle with squared sides 9, 16, 25.

use hrgm::varalg::{cnd_certificate, dimensionality, fiedler_bapat_check, sigma_of_gamma, theta_of_gamma, Variogram};
use hrgm::Tolerance;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerance::global();
    let gamma = Variogram::from_rows(&[&[0.0, 9.0, 25.0], &[9.0, 0.0, 16.0], &[25.0, 16.0, 0.0]])?;

    let cert = cnd_certificate(&gamma, tol);
    println!("CND status {:?}, margin {:.3e}", cert.status, cert.margin);
    println!("embedding dimension {}", dimensionality(&gamma, tol)?);

    let gram = sigma_of_gamma(&gamma, tol);
    println!("Σ = σ(Γ):{:.6}", gram.sigma);

    let theta = theta_of_gamma(&gamma, tol)?;
    println!("Θ = θ(Γ):{:.6}", theta.matrix());
    println!("edge weight 1-3: {:.1e}", theta.edge_weight(1, 3));

    let fb = fiedler_bapat_check(&gamma, tol)?;
    println!("[[Θ, p], [pᵀ, R²]]:{:.6}", fb.bordered.matrix());
    Ok(())
}
