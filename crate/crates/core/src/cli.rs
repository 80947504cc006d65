//! Command layer behind the `hrgm` binary. [`run`] parses arguments, does
//! the work and returns what to print plus the exit code, so tests can drive
//! the whole CLI in-process.
//!
//! Exit codes: 0 success, 1 error (or a completion that hit its iteration
//! cap, or a failed reproduction check), 2 a completion with no strictly CND
//! solution. Errors are written to stderr as `{"error": {"code", "message"}}`.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::completion::{self, CompletionError, CompletionOptions, CompletionStatus, Method, PartialVariogram, SeparatorChoice};
use crate::degree::{self, DegreeError, NumericOptions};
use crate::eci::{self, CiStatement, EciError};
use crate::graphs::{self, GraphError, UndirectedGraph};
use crate::io::{self, IoError};
use crate::linalg::{Tolerance, DEFAULT_REL_TOL, TOL_ENV};
use crate::pareto::{self, EmpiricalOptions, HalfspaceWeighting, ParetoError, ParetoSample, VarianceDenominator};
use crate::reproduce::{self, Target, UnknownTarget};
use crate::threshold::{self, ThresholdError};
use crate::varalg::{self, VarAlgError, Variogram};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "hrgm", version, about = "Hüsler–Reiss extremal graphical models")]
pub struct Cli {
    /// Relative rank / definiteness tolerance.
    #[arg(long, global = true, env = TOL_ENV, default_value_t = DEFAULT_REL_TOL, value_parser = positive_f64)]
    pub tol: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Surrogate maximum likelihood by CND matrix completion.
    Fit(FitArgs),
    /// Extremal conditional-independence rank tests.
    Ci(CiArgs),
    /// Extremal ML degree of a graph, or a numeric K_{2,n} root count.
    Degree(DegreeArgs),
    /// ML-threshold bounds and the four-cycle experiment.
    Mlt(MltArgs),
    /// Draw a multivariate Pareto sample.
    Simulate(SimulateArgs),
    /// Empirical variogram of Pareto or raw data.
    Empvario(EmpvarioArgs),
    /// Run a registered reproduction target.
    Reproduce(ReproduceArgs),
    /// Inspect a variogram and/or a graph.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Exceedance quantile applied to raw data (after the rank transform, if any).
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Map each column to exponential margins by ranks first.
    #[arg(long, requires = "threshold")]
    pub rank_transform: bool,
    /// Skip the first line of the data CSV.
    #[arg(long)]
    pub header: bool,
    #[arg(long, value_enum, default_value_t = Denominator::Unbiased)]
    pub denominator: Denominator,
    #[arg(long, value_enum, default_value_t = Weighting::Uniform)]
    pub weighting: Weighting,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Graph as JSON `{"d", "edges"}` or an edge list.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Partial variogram JSON, variogram matrix (JSON or CSV), or data CSV.
    #[arg(long, conflicts_with = "points")]
    pub data: Option<PathBuf>,
    /// How to read a CSV given to `--data`.
    #[arg(long, value_enum, default_value_t = CsvKind::Observations)]
    pub csv: CsvKind,
    /// Point configuration CSV, one row per vertex; Γ is the squared distances.
    #[arg(long)]
    pub points: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = SeparatorArg::First)]
    pub separator: SeparatorArg,
    /// Edge residual target relative to max|Γ̊|.
    #[arg(long, default_value_t = 1e-8, value_parser = positive_f64)]
    pub conv_tol: f64,
    /// Conditioning below which no interior solution is declared.
    #[arg(long, default_value_t = 1e-8, value_parser = positive_f64)]
    pub boundary_tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    #[command(flatten)]
    pub data_opts: DataArgs,
}

#[derive(Debug, Args)]
pub struct CiArgs {
    /// Variogram matrix, JSON or CSV.
    #[arg(long)]
    pub gamma: PathBuf,
    /// Statement `A|B|C` with comma-separated 1-based labels, e.g. `1|3|2`.
    #[arg(long = "statement", required_unless_present = "graph")]
    pub statements: Vec<CiStatement>,
    /// Test every separation statement of this graph, and its nonedges.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DegreeArgs {
    #[arg(long, required_unless_present = "numeric_k2n")]
    pub graph: Option<PathBuf>,
    /// Count roots of the K_{2,n} likelihood system on random data.
    #[arg(long, conflicts_with = "graph")]
    pub numeric_k2n: Option<usize>,
    /// Number of consecutive seeds, starting at `--seed`.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    #[arg(long)]
    pub seed: Option<SeedArg>,
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct MltArgs {
    #[command(subcommand)]
    pub experiment: Option<MltCommand>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Run the elimination surrogate at this rank.
    #[arg(long)]
    pub elim_r: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long)]
    pub seed: Option<SeedArg>,
}

#[derive(Debug, Subcommand)]
pub enum MltCommand {
    /// Strictly CND completions for the rank-one sample (1, x2, x3, −1−x2−x3).
    C4Experiment {
        #[arg(long, allow_hyphen_values = true)]
        x2: f64,
        #[arg(long, allow_hyphen_values = true)]
        x3: f64,
    },
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub gamma: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: Option<SeedArg>,
    /// Sample from the halfspace {y_k ≥ 0} only (1-based).
    #[arg(long)]
    pub halfspace: Option<usize>,
    /// Data CSV path; metadata goes to `<path>.meta.json`. Without it the CSV
    /// is printed.
    #[arg(long)]
    pub data_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EmpvarioArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[command(flatten)]
    pub data_opts: DataArgs,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// One of example-2.2, cycle-degrees, k2n-degrees, c4-thresholds, pentad, rank-law.
    #[arg(required_unless_present = "all")]
    pub target: Option<String>,
    #[arg(long, conflicts_with = "target")]
    pub all: bool,
    /// Emit the JSON report instead of PASS/FAIL lines.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, required_unless_present = "graph")]
    pub gamma: Option<PathBuf>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Chordal,
    TwoClique,
    General,
    Decomposed,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Chordal => Method::Chordal,
            MethodArg::TwoClique => Method::TwoClique,
            MethodArg::General => Method::General,
            MethodArg::Decomposed => Method::Decomposed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeparatorArg {
    First,
    Last,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CsvKind {
    /// Rows are observations.
    Observations,
    /// A d × d variogram matrix.
    Variogram,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Denominator {
    Unbiased,
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Weighting {
    Uniform,
    BySize,
}

/// `--seed 42` or `--seed auto`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedArg {
    Fixed(u64),
    Auto,
}

impl FromStr for SeedArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(SeedArg::Auto);
        }
        s.parse().map(SeedArg::Fixed).map_err(|_| format!("expected a u64 or \"auto\", got {s:?}"))
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("invalid JSON input: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    VarAlg(#[from] VarAlgError),
    #[error(transparent)]
    Eci(#[from] EciError),
    #[error(transparent)]
    Completion(#[from] CompletionError),
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
    #[error(transparent)]
    Pareto(#[from] ParetoError),
    #[error(transparent)]
    UnknownTarget(#[from] UnknownTarget),
    #[error("`{0}` is stochastic: pass --seed <u64> or --seed auto")]
    SeedRequired(&'static str),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io(_) | CliError::Write { .. } => "io",
            CliError::Json(_) => "json",
            CliError::Graph(_) => "graph",
            CliError::VarAlg(_) => "variogram",
            CliError::Eci(_) => "ci",
            CliError::Completion(_) => "completion",
            CliError::Degree(_) => "degree",
            CliError::Threshold(_) => "threshold",
            CliError::Pareto(_) => "pareto",
            CliError::UnknownTarget(_) => "unknown_target",
            CliError::SeedRequired(_) => "seed_required",
            CliError::Usage(_) => "usage",
        }
    }
}

/// What the binary should print and return.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// `{"error": {"code", "message"}}`
pub fn error_json(code: &str, message: &str) -> String {
    json!({ "error": { "code": code, "message": message } }).to_string()
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: e.to_string(), stderr: String::new() },
                _ => Outcome { code: 1, stdout: String::new(), stderr: error_json("usage", e.to_string().trim()) + "\n" },
            };
        }
    };
    let mut ctx = Context { tol: Tolerance::new(cli.tol), notes: String::new() };
    let output = cli.output.clone();
    let result = dispatch(&cli.command, &mut ctx);
    let mut out = Outcome { stderr: ctx.notes, ..Outcome::default() };
    match result {
        Ok(Report { body, code }) => {
            out.code = code;
            match (output, body) {
                (Some(path), Body::Json(v)) => {
                    if let Err(e) = write_file(&path, &(pretty(&v) + "\n")) {
                        return fail(out, &e);
                    }
                }
                (_, Body::Json(v)) => out.stdout = pretty(&v) + "\n",
                (_, Body::Text(t)) => out.stdout = t,
            }
        }
        Err(e) => return fail(out, &e),
    }
    out
}

fn fail(mut out: Outcome, e: &CliError) -> Outcome {
    out.code = 1;
    out.stderr.push_str(&error_json(e.code(), &e.to_string()));
    out.stderr.push('\n');
    out
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

struct Context {
    tol: Tolerance,
    notes: String,
}

impl Context {
    fn seed(&mut self, arg: Option<SeedArg>, command: &'static str) -> Result<u64, CliError> {
        match arg {
            None => Err(CliError::SeedRequired(command)),
            Some(SeedArg::Fixed(s)) => Ok(s),
            Some(SeedArg::Auto) => {
                let s: u64 = rand::rng().random();
                self.notes.push_str(&format!("seed: {s}\n"));
                Ok(s)
            }
        }
    }

    fn envelope(&self, result: impl Serialize, extra: Value) -> Result<Value, CliError> {
        let mut v = json!({
            "version": VERSION,
            "tolerances": { "rel": self.tol.rel },
            "result": serde_json::to_value(result)?,
        });
        if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
            m.extend(e);
        }
        Ok(v)
    }
}

enum Body {
    Json(Value),
    Text(String),
}

struct Report {
    body: Body,
    code: i32,
}

impl Report {
    fn ok(v: Value) -> Self {
        Report { body: Body::Json(v), code: 0 }
    }
}

fn dispatch(cmd: &Command, ctx: &mut Context) -> Result<Report, CliError> {
    match cmd {
        Command::Fit(a) => cmd_fit(a, ctx),
        Command::Ci(a) => cmd_ci(a, ctx),
        Command::Degree(a) => cmd_degree(a, ctx),
        Command::Mlt(a) => cmd_mlt(a, ctx),
        Command::Simulate(a) => cmd_simulate(a, ctx),
        Command::Empvario(a) => cmd_empvario(a, ctx),
        Command::Reproduce(a) => cmd_reproduce(a, ctx),
        Command::Check(a) => cmd_check(a, ctx),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.display().to_string(), source })
}

/// JSON `{"d", "edges"}` or an edge list.
pub fn read_graph(path: &Path) -> Result<UndirectedGraph, CliError> {
    let text = io::read_text(path)?;
    if text.trim_start().starts_with('{') {
        Ok(serde_json::from_str(&text)?)
    } else {
        Ok(text.parse()?)
    }
}

pub fn read_variogram(path: &Path) -> Result<Variogram, CliError> {
    Ok(Variogram::new(io::read_matrix(path)?)?)
}

fn read_observations(path: &Path, header: bool) -> Result<DMatrix<f64>, CliError> {
    let text = io::read_text(path)?;
    let body = if header { text.split_once('\n').map_or("", |(_, rest)| rest) } else { &text };
    Ok(io::parse_csv_matrix(body)?)
}

/// Raw or Pareto observations → Pareto sample.
fn pareto_sample(path: &Path, o: &DataArgs) -> Result<ParetoSample, CliError> {
    let raw = read_observations(path, o.header)?;
    match o.threshold {
        Some(q) => {
            let x = if o.rank_transform { pareto::rank_transform(&raw) } else { raw };
            Ok(pareto::threshold_exceedances(&x, q)?)
        }
        None => Ok(ParetoSample::new(raw)?),
    }
}

fn empirical(s: &ParetoSample, o: &DataArgs) -> Result<Variogram, CliError> {
    let opts = EmpiricalOptions {
        denominator: match o.denominator {
            Denominator::Unbiased => VarianceDenominator::Unbiased,
            Denominator::Plain => VarianceDenominator::Plain,
        },
        weighting: match o.weighting {
            Weighting::Uniform => HalfspaceWeighting::Uniform,
            Weighting::BySize => HalfspaceWeighting::BySize,
        },
    };
    Ok(pareto::empirical_variogram_with(s, opts)?)
}

fn need_graph(g: &Option<PathBuf>, what: &str) -> Result<UndirectedGraph, CliError> {
    match g {
        Some(p) => read_graph(p),
        None => Err(CliError::Usage(format!("--graph is required with {what}"))),
    }
}

fn cmd_fit(a: &FitArgs, ctx: &mut Context) -> Result<Report, CliError> {
    let (partial, input) = match (&a.data, &a.points) {
        (Some(path), _) => {
            let text = io::read_text(path)?;
            if text.trim_start().starts_with('{') {
                let v: Value = serde_json::from_str(&text)?;
                if v.get("entries").is_some() {
                    let p: PartialVariogram = serde_json::from_value(v)?;
                    if let Some(gp) = &a.graph {
                        if read_graph(gp)? != *p.graph() {
                            return Err(CliError::Usage("--graph differs from the graph inside the partial variogram".into()));
                        }
                    }
                    (p, json!({ "kind": "partial" }))
                } else {
                    let gamma: Variogram = serde_json::from_value(v)?;
                    let g = need_graph(&a.graph, "a variogram matrix")?;
                    (PartialVariogram::from_variogram(g, &gamma)?, json!({ "kind": "variogram" }))
                }
            } else if a.csv == CsvKind::Variogram {
                let g = need_graph(&a.graph, "a variogram matrix")?;
                let gamma = Variogram::new(io::parse_csv_matrix(&text)?)?;
                (PartialVariogram::from_variogram(g, &gamma)?, json!({ "kind": "variogram" }))
            } else {
                let g = need_graph(&a.graph, "observations")?;
                let sample = pareto_sample(path, &a.data_opts)?;
                let gamma = empirical(&sample, &a.data_opts)?;
                let input = json!({ "kind": "observations", "n": sample.n(), "threshold": a.data_opts.threshold });
                (PartialVariogram::from_variogram(g, &gamma)?, input)
            }
        }
        (None, Some(path)) => {
            let g = need_graph(&a.graph, "--points")?;
            let gamma = Variogram::from_points(&io::read_matrix(path)?.transpose());
            (PartialVariogram::from_variogram(g, &gamma)?, json!({ "kind": "points" }))
        }
        (None, None) => return Err(CliError::Usage("fit needs --data or --points".into())),
    };
    let opts = CompletionOptions {
        tol: a.conv_tol,
        max_iter: a.max_iter,
        boundary_tol: a.boundary_tol,
        rank_tol: ctx.tol,
        separator: match a.separator {
            SeparatorArg::First => SeparatorChoice::First,
            SeparatorArg::Last => SeparatorChoice::Last,
        },
        ..CompletionOptions::default()
    };
    let res = completion::complete(&partial, a.method.into(), &opts)?;
    let code = match res.status {
        CompletionStatus::Converged => 0,
        CompletionStatus::NoCndSolution => 2,
        CompletionStatus::MaxIterations => 1,
    };
    let mut v = ctx.envelope(&res, json!({ "input": input }))?;
    v["tolerances"]["convergence"] = json!(opts.tol);
    v["tolerances"]["boundary"] = json!(opts.boundary_tol);
    Ok(Report { body: Body::Json(v), code })
}

#[derive(Serialize)]
struct PairVerdict {
    i: usize,
    j: usize,
    holds: bool,
}

fn cmd_ci(a: &CiArgs, ctx: &mut Context) -> Result<Report, CliError> {
    let gamma = read_variogram(&a.gamma)?;
    let mut statements = a.statements.clone();
    let mut pairs = Vec::new();
    if let Some(gp) = &a.graph {
        let g = read_graph(gp)?;
        if g.num_vertices() != gamma.d() {
            return Err(CliError::Usage(format!("graph has {} vertices, variogram {}", g.num_vertices(), gamma.d())));
        }
        statements.extend(eci::separation_statements(&g)?);
        for (i, j) in g.non_edges() {
            pairs.push(PairVerdict { i, j, holds: eci::saturated_pair_test(&gamma, i, j, ctx.tol)? });
        }
    }
    let reports = statements
        .iter()
        .map(|s| eci::test_eci(&gamma, s, ctx.tol))
        .collect::<Result<Vec<_>, _>>()?;
    let all_hold = reports.iter().all(|r| r.holds) && pairs.iter().all(|p| p.holds);
    let v = ctx.envelope(json!({ "statements": reports, "saturated_pairs": pairs, "all_hold": all_hold }), json!({}))?;
    Ok(Report::ok(v))
}

fn cmd_degree(a: &DegreeArgs, ctx: &mut Context) -> Result<Report, CliError> {
    if let Some(n) = a.numeric_k2n {
        let start = ctx.seed(a.seed, "degree --numeric-k2n")?;
        let opts = NumericOptions::default();
        let reports = (0..a.seeds)
            .map(|k| degree::emld_k2n_numeric(n, start.wrapping_add(k), &opts))
            .collect::<Result<Vec<_>, _>>()?;
        let v = ctx.envelope(json!({ "n": n, "seed": start, "reports": reports }), json!({}))?;
        return Ok(Report::ok(v));
    }
    let g = need_graph(&a.graph, "degree")?;
    Ok(Report::ok(ctx.envelope(degree::emld(&g)?, json!({}))?))
}

fn cmd_mlt(a: &MltArgs, ctx: &mut Context) -> Result<Report, CliError> {
    if let Some(MltCommand::C4Experiment { x2, x3 }) = a.experiment {
        return Ok(Report::ok(ctx.envelope(threshold::cycle4_rank1_experiment(x2, x3)?, json!({}))?));
    }
    let elim = match a.elim_r {
        Some(r) => Some((r, a.trials, ctx.seed(a.seed, "mlt --elim-r")?)),
        None => None,
    };
    let g = need_graph(&a.graph, "mlt")?;
    Ok(Report::ok(ctx.envelope(threshold::emlt_bounds_with_evidence(&g, elim)?, json!({}))?))
}

/// Sidecar metadata of a simulated sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleMetadata {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub gamma_ref: String,
    pub halfspace: Option<usize>,
    pub proposals: Option<usize>,
}

fn cmd_simulate(a: &SimulateArgs, ctx: &mut Context) -> Result<Report, CliError> {
    let seed = ctx.seed(a.seed, "simulate")?;
    let gamma = read_variogram(&a.gamma)?;
    let (sample, proposals) = match a.halfspace {
        Some(k) => (pareto::sample_halfspace(&gamma, k, a.n, seed)?, None),
        None => {
            let (s, stats) = pareto::sample_pareto(&gamma, a.n, seed)?;
            (s, Some(stats.proposals))
        }
    };
    let meta = SampleMetadata {
        n: sample.n(),
        d: sample.d(),
        seed,
        gamma_ref: a.gamma.display().to_string(),
        halfspace: a.halfspace,
        proposals,
    };
    let csv = io::to_csv(sample.data());
    match &a.data_out {
        Some(path) => {
            write_file(path, &csv)?;
            let v = ctx.envelope(&meta, json!({}))?;
            let mut meta_path = path.clone().into_os_string();
            meta_path.push(".meta.json");
            write_file(Path::new(&meta_path), &(pretty(&v) + "\n"))?;
            Ok(Report::ok(v))
        }
        None => Ok(Report { body: Body::Text(csv), code: 0 }),
    }
}

fn cmd_empvario(a: &EmpvarioArgs, ctx: &mut Context) -> Result<Report, CliError> {
    let sample = pareto_sample(&a.data, &a.data_opts)?;
    let gamma = empirical(&sample, &a.data_opts)?;
    let halfspace_sizes: Vec<usize> = (1..=sample.d()).map(|k| sample.halfspace(k).len()).collect();
    let v = ctx.envelope(
        json!({ "n": sample.n(), "d": sample.d(), "halfspace_sizes": halfspace_sizes, "variogram": gamma }),
        json!({}),
    )?;
    Ok(Report::ok(v))
}

fn cmd_reproduce(a: &ReproduceArgs, ctx: &mut Context) -> Result<Report, CliError> {
    let targets = match &a.target {
        Some(t) => vec![t.parse::<Target>()?],
        None => Target::ALL.to_vec(),
    };
    let runs: Vec<_> = targets.into_iter().map(reproduce::run).collect();
    let code = if runs.iter().all(|r| r.passed()) { 0 } else { 1 };
    let body = if a.json {
        let mut v = ctx.envelope(&runs, json!({}))?;
        v["tolerances"]["rel"] = json!(Tolerance::global().rel);
        Body::Json(v)
    } else {
        Body::Text(runs.iter().map(|r| r.render()).collect())
    };
    Ok(Report { body, code })
}

#[derive(Serialize)]
struct GammaCheck {
    d: usize,
    certificate: varalg::CndCertificate,
    dimensionality: Option<usize>,
}

#[derive(Serialize)]
struct GraphCheck {
    d: usize,
    edges: usize,
    connected: bool,
    chordal: bool,
    clique_number: usize,
    treewidth: graphs::TreewidthReport,
    maximal_cliques: Vec<graphs::VertexSet>,
    decomposition: Option<graphs::ChordalDecomposition>,
    clique_separators: Vec<graphs::CliqueSplit>,
}

fn cmd_check(a: &CheckArgs, ctx: &mut Context) -> Result<Report, CliError> {
    let gamma = a.gamma.as_deref().map(read_variogram).transpose()?;
    let graph = a.graph.as_deref().map(read_graph).transpose()?;
    let gamma_check = gamma.as_ref().map(|g| {
        let certificate = varalg::cnd_certificate(g, ctx.tol);
        let dimensionality = certificate.is_strict().then(|| varalg::dimensionality(g, ctx.tol).ok()).flatten();
        GammaCheck { d: g.d(), certificate, dimensionality }
    });
    let graph_check = match &graph {
        Some(g) => Some(GraphCheck {
            d: g.num_vertices(),
            edges: g.num_edges(),
            connected: g.is_connected(),
            chordal: graphs::is_chordal(g),
            clique_number: graphs::clique_number(g),
            treewidth: graphs::treewidth_report(g),
            maximal_cliques: graphs::maximal_cliques(g),
            decomposition: graphs::chordal_decomposition(g).ok(),
            clique_separators: if g.is_connected() { graphs::clique_separators(g)? } else { Vec::new() },
        }),
        None => None,
    };
    let markov = match (&gamma, &graph) {
        (Some(gm), Some(g)) => {
            if g.num_vertices() != gm.d() {
                return Err(CliError::Usage(format!("graph has {} vertices, variogram {}", g.num_vertices(), gm.d())));
            }
            let pairs = g
                .non_edges()
                .into_iter()
                .map(|(i, j)| Ok(PairVerdict { i, j, holds: eci::saturated_pair_test(gm, i, j, ctx.tol)? }))
                .collect::<Result<Vec<_>, CliError>>()?;
            let holds = pairs.iter().all(|p| p.holds);
            Some(json!({ "holds": holds, "nonedges": pairs }))
        }
        _ => None,
    };
    let v = ctx.envelope(json!({ "gamma": gamma_check, "graph": graph_check, "markov": markov }), json!({}))?;
    Ok(Report::ok(v))
}
