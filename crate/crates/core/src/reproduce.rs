//! Registered reproduction targets: each runs a fixed, seeded experiment
//! and reports named PASS/FAIL checks together with the numbers behind them.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::degree::{emld, emld_cycle, emld_k2n_numeric, mld_gaussian_cycle, mld_relations_check, Degree, NumericOptions};
use crate::eci::{pentad_graph, pentad_residual};
use crate::graphs::UndirectedGraph;
use crate::linalg::{max_abs, numerical_rank, Tolerance};
use crate::model;
use crate::threshold::{cycle4_rank1_experiment, elimination_surrogate, emlt_bounds, C4Outcome, Verdict};
use crate::varalg::{
    cnd_certificate, fiedler_bapat_check, gamma_matrix, kernel_witness, Variogram,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    #[serde(rename = "example-2.2")]
    Example22,
    CycleDegrees,
    K2nDegrees,
    C4Thresholds,
    Pentad,
    RankLaw,
}

impl Target {
    pub const ALL: [Target; 6] = [
        Target::Example22,
        Target::CycleDegrees,
        Target::K2nDegrees,
        Target::C4Thresholds,
        Target::Pentad,
        Target::RankLaw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Example22 => "example-2.2",
            Target::CycleDegrees => "cycle-degrees",
            Target::K2nDegrees => "k2n-degrees",
            Target::C4Thresholds => "c4-thresholds",
            Target::Pentad => "pentad",
            Target::RankLaw => "rank-law",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown reproduction target {0:?}")]
pub struct UnknownTarget(pub String);

impl FromStr for Target {
    type Err = UnknownTarget;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| UnknownTarget(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reproduction {
    pub target: Target,
    pub checks: Vec<CheckLine>,
    pub table: Value,
}

impl Reproduction {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// One `PASS`/`FAIL` line per check.
    pub fn render(&self) -> String {
        self.checks
            .iter()
            .map(|c| format!("{} {}: {} ({})\n", if c.pass { "PASS" } else { "FAIL" }, self.target, c.name, c.detail))
            .collect()
    }
}

fn check(name: &str, pass: bool, detail: String) -> CheckLine {
    CheckLine { name: name.to_string(), pass, detail }
}

/// Seeds fixed before any run; never tuned.
pub const PENTAD_SEED: u64 = 1;
pub const RANK_LAW_SEED: u64 = 2;

pub fn run(target: Target) -> Reproduction {
    match target {
        Target::Example22 => example_22(),
        Target::CycleDegrees => cycle_degrees(),
        Target::K2nDegrees => k2n_degrees(),
        Target::C4Thresholds => c4_thresholds(),
        Target::Pentad => pentad(),
        Target::RankLaw => rank_law(),
    }
}

/// The right-triangle variogram with squared sides 9, 16, 25.
pub fn example_22_gamma() -> Variogram {
    Variogram::from_rows(&[&[0.0, 9.0, 25.0], &[9.0, 0.0, 16.0], &[25.0, 16.0, 0.0]]).expect("valid")
}

/// `[[Θ, p], [pᵀ, R²]]` for the right triangle, in exact fractions.
pub fn example_22_bordered() -> DMatrix<f64> {
    DMatrix::from_row_slice(4, 4, &[
        1.0 / 9.0, -1.0 / 9.0, 0.0, 0.5,
        -1.0 / 9.0, 25.0 / 144.0, -1.0 / 16.0, 0.0,
        0.0, -1.0 / 16.0, 1.0 / 16.0, 0.5,
        0.5, 0.0, 0.5, 25.0 / 4.0,
    ])
}

/// Θ⁺ for the right triangle.
pub fn example_22_sigma() -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[52.0, -2.0, -50.0, -2.0, 25.0, -23.0, -50.0, -23.0, 73.0]) / 9.0
}

fn example_22() -> Reproduction {
    let gamma = example_22_gamma();
    let tol = Tolerance::global();
    let fb = fiedler_bapat_check(&gamma, tol).expect("strictly CND");
    let bordered = fb.bordered.matrix();
    let inverse = crate::varalg::cayley_menger(&gamma, crate::varalg::CmVariant::Standard)
        .try_inverse()
        .expect("invertible");
    let sigma = fb.bordered.theta.pseudo_inverse(tol).expect("rank d-1");
    let e_inv = max_abs(&(&inverse - example_22_bordered()));
    let e_fb = max_abs(&(&bordered - example_22_bordered()));
    let e_sigma = max_abs(&(&sigma - example_22_sigma()));
    let rows: Vec<Vec<f64>> = inverse.row_iter().map(|r| r.iter().copied().collect()).collect();
    Reproduction {
        target: Target::Example22,
        checks: vec![
            check("bordered inverse", e_inv < 1e-12, format!("max error {e_inv:.1e}")),
            check("Fiedler–Bapat blocks", e_fb < 1e-12, format!("max error {e_fb:.1e}")),
            check("Θ⁺", e_sigma < 1e-12, format!("max error {e_sigma:.1e}")),
        ],
        table: json!({ "cm_inverse": rows }),
    }
}

fn cycle_degrees() -> Reproduction {
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for n in 3..=12 {
        let r = mld_relations_check(n).expect("n >= 3");
        let formula_e = (1u128 << (n - 1)) - n as u128;
        let formula_m = (n as u128 - 3) * (1u128 << (n - 2)) + 1;
        let dispatched = if n >= 4 { emld(&UndirectedGraph::cycle(n)).ok().map(|d| d.emld) } else { Some(Degree::Known(1)) };
        let ok = r.difference_identity
            && r.three_term_identity
            && r.emld == formula_e
            && r.mld == formula_m
            && dispatched == Some(Degree::Known(formula_e));
        checks.push(check(
            &format!("n = {n}"),
            ok,
            format!("eMLD {} MLD {} (i) {} (ii) {}", r.emld, r.mld, r.difference_identity, r.three_term_identity),
        ));
        rows.push(json!({
            "n": n, "eMLD": r.emld as u64, "MLD": r.mld as u64,
            "identity_i": r.difference_identity, "identity_ii": r.three_term_identity,
        }));
    }
    let c4 = emld(&UndirectedGraph::cycle(4)).expect("connected");
    checks.push(check(
        "four-cycle",
        c4.emld == Degree::Known(4) && c4.mld == Degree::Known(5),
        format!("eMLD {} MLD {}", c4.emld, c4.mld),
    ));
    debug_assert_eq!(emld_cycle(4), 4);
    debug_assert_eq!(mld_gaussian_cycle(4).ok(), Some(5));
    Reproduction { target: Target::CycleDegrees, checks, table: Value::Array(rows) }
}

/// Seeds 0..20 for each n in 2..=6.
fn k2n_degrees() -> Reproduction {
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for n in 2..=6 {
        let mut counts = Vec::new();
        let mut strict = Vec::new();
        let mut real = Vec::new();
        let mut failures = 0;
        for seed in 0..20 {
            match emld_k2n_numeric(n, seed, &NumericOptions::default()) {
                Ok(r) => {
                    let cert = r.numeric.expect("numeric certificate");
                    counts.push(r.emld.known().unwrap_or(0) as usize);
                    strict.push(cert.strictly_cnd_roots);
                    real.push(cert.real_roots);
                }
                Err(_) => failures += 1,
            }
        }
        let ok = failures == 0 && counts.iter().all(|&c| c == 2 * n);
        checks.push(check(
            &format!("n = {n}"),
            ok,
            format!("root counts {:?}, degenerate {failures}", summarize(&counts)),
        ));
        rows.push(json!({ "n": n, "roots": counts, "real_roots": real, "strictly_cnd_roots": strict }));
    }
    Reproduction { target: Target::K2nDegrees, checks, table: Value::Array(rows) }
}

fn summarize(v: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &x in v {
        match out.iter_mut().find(|(k, _)| *k == x) {
            Some(e) => e.1 += 1,
            None => out.push((x, 1)),
        }
    }
    out
}

fn c4_thresholds() -> Reproduction {
    let c4 = UndirectedGraph::cycle(4);
    let b = emlt_bounds(&c4).expect("non-complete");
    let exists = cycle4_rank1_experiment(0.0, 2.0).expect("distinct points");
    let none = cycle4_rank1_experiment(0.0, 0.5).expect("distinct points");
    let elim = elimination_surrogate(&c4, 2, 100, 0).expect("valid rank");
    Reproduction {
        target: Target::C4Thresholds,
        checks: vec![
            check("bounds", (b.lower, b.upper) == (1, 2), format!("[{}, {}]", b.lower, b.upper)),
            check("sample (1, 0, 2, -3)", exists.outcome == C4Outcome::ExistsCnd, format!("{:?}", exists.outcome)),
            check("sample (1, 0, 1/2, -3/2)", none.outcome == C4Outcome::NoCndSolution, format!("{:?}", none.outcome)),
            check(
                "rank-2 elimination",
                elim.verdict == Verdict::ZeroIdealLikely,
                format!("{:?} over {} trials", elim.verdict, elim.ranks.len()),
            ),
        ],
        table: json!({ "exists": exists, "none": none }),
    }
}

fn pentad() -> Reproduction {
    let mut rng = ChaCha20Rng::seed_from_u64(PENTAD_SEED);
    let g = pentad_graph();
    let model: Vec<f64> = (0..50)
        .map(|_| pentad_residual(&model::model_point(&g, &mut rng)).expect("d = 8").normalized.abs())
        .collect();
    let generic: Vec<f64> = (0..50)
        .map(|_| pentad_residual(&model::generic_variogram(8, &mut rng)).expect("d = 8").normalized.abs())
        .collect();
    let model_max = model.iter().copied().fold(0.0, f64::max);
    let generic_min = generic.iter().copied().fold(f64::INFINITY, f64::min);
    let below = generic.iter().filter(|&&x| x <= 1e-2).count();
    Reproduction {
        target: Target::Pentad,
        checks: vec![
            check("model points vanish", model_max < 1e-8, format!("max normalized {model_max:.2e} over 50")),
            check(
                "generic points do not",
                generic_min > 1e-2,
                format!("min normalized {generic_min:.2e}, {below}/50 at or below 1e-2"),
            ),
        ],
        table: json!({ "model": model, "generic": generic }),
    }
}

/// Rank of γ(Σ) for rank-`r` Σ, boundary witnesses at rank `d − 2`, and
/// strictness of principal submatrices.
fn rank_law() -> Reproduction {
    let mut rng = ChaCha20Rng::seed_from_u64(RANK_LAW_SEED);
    let tol = Tolerance::global();
    let mut rank_fail = Vec::new();
    for _ in 0..100 {
        let d = rng.random_range(3..=9);
        let r = rng.random_range(1..d);
        let sigma = model::random_low_rank_gram(d, r, &mut rng);
        let rank = numerical_rank(&gamma_matrix(&sigma), tol);
        if rank != (r + 2).min(d) {
            rank_fail.push((d, r, rank));
        }
    }
    let mut witness_fail = 0;
    let mut worst_witness = 0.0f64;
    for _ in 0..50 {
        let d = rng.random_range(3..=9);
        let sigma = model::random_low_rank_gram(d, d - 2, &mut rng);
        let gamma = Variogram::new(gamma_matrix(&sigma)).expect("symmetric hollow");
        match kernel_witness(&sigma, tol) {
            Some(x) => {
                let q = (x.transpose() * gamma.matrix() * &x)[(0, 0)].abs() / max_abs(gamma.matrix());
                worst_witness = worst_witness.max(q);
                if q > 1e-8 || cnd_certificate(&gamma, tol).is_strict() {
                    witness_fail += 1;
                }
            }
            None => witness_fail += 1,
        }
    }
    let mut sub_fail = 0;
    for _ in 0..100 {
        let d = rng.random_range(3..=9);
        let gamma = model::generic_variogram(d, &mut rng);
        let k = rng.random_range(2..=d);
        let mut idx: Vec<usize> = (0..d).collect();
        for i in 0..k {
            let j = rng.random_range(i..d);
            idx.swap(i, j);
        }
        idx.truncate(k);
        idx.sort_unstable();
        if !cnd_certificate(&gamma.principal(&idx), tol).is_strict() {
            sub_fail += 1;
        }
    }
    Reproduction {
        target: Target::RankLaw,
        checks: vec![
            check("rank γ(Σ) = min(r + 2, d)", rank_fail.is_empty(), format!("{} of 100 trials off: {rank_fail:?}", rank_fail.len())),
            check(
                "rank d − 2 boundary witness",
                witness_fail == 0,
                format!("{witness_fail} of 50 failed, worst |xᵀΓx|/max|Γ| {worst_witness:.1e}"),
            ),
            check("principal submatrices stay strict", sub_fail == 0, format!("{sub_fail} of 100 failed")),
        ],
        table: Value::Null,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_names_round_trip() {
        for t in Target::ALL {
            assert_eq!(t.name().parse::<Target>().unwrap(), t);
            assert_eq!(serde_json::to_value(t).unwrap(), t.name());
        }
        assert!("table-9".parse::<Target>().is_err());
    }

    #[test]
    fn deterministic_targets_pass() {
        for t in [Target::Example22, Target::CycleDegrees, Target::C4Thresholds, Target::RankLaw] {
            let r = run(t);
            assert!(r.passed(), "{}", r.render());
        }
    }
}
