//! End-to-end runs of the `hrgm` command layer, with every JSON report
//! validated against the shipped schema.

use std::path::{Path, PathBuf};

use hrgm::cli::{run, Outcome};
use hrgm::graphs::UndirectedGraph;
use hrgm::io::to_csv;
use hrgm::model;
use hrgm::pareto::sample_pareto;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde_json::Value;
use tempfile::TempDir;

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(name: &str, instance: &Value) {
    let validator = jsonschema::validator_for(&schema(name)).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{name} schema violations: {errors:?}\n{instance:#}");
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, text: &str) -> String {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.display().to_string()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn hrgm(args: &[&str]) -> Outcome {
    run(std::iter::once("hrgm").chain(args.iter().copied()))
}

/// Runs, checks the exit code and validates stdout against `schema`.
fn json_run(args: &[&str], code: i32, schema_name: &str) -> Value {
    let out = hrgm(args);
    assert_eq!(out.code, code, "args {args:?}\nstdout {}\nstderr {}", out.stdout, out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).expect("stdout is JSON");
    assert_valid(schema_name, &v);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    v
}

const TRIANGLE: &str = "0,9,25\n9,0,16\n25,16,0\n";

#[test]
fn fit_path_completes_to_25() {
    let f = Fixture::new();
    let p = f.file("p.json", r#"{"graph":{"d":3,"edges":[[1,2],[2,3]]},"entries":[[1,2,9],[2,3,16]]}"#);
    let v = json_run(&["fit", "--data", &p], 0, "fit");
    assert_eq!(v["result"]["status"], "converged");
    assert_eq!(v["result"]["method"], "chordal");
    let g13 = v["result"]["gamma"]["rows"][0][2].as_f64().unwrap();
    assert!((g13 - 25.0).abs() < 1e-12, "{g13}");

    let g = f.file("path.txt", "1 2\n2 3\n");
    let m = f.file("m.csv", TRIANGLE);
    let v = json_run(&["fit", "--graph", &g, "--data", &m, "--csv", "variogram"], 0, "fit");
    assert_eq!(v["input"]["kind"], "variogram");
    assert!((v["result"]["gamma"]["rows"][2][0].as_f64().unwrap() - 25.0).abs() < 1e-12);
}

#[test]
fn fit_four_cycle_counterexample_exits_2() {
    let f = Fixture::new();
    // A = {1, 2}, B = {3, 4}, complete bipartite between them.
    let g = f.file("c4.txt", "1 3\n1 4\n2 3\n2 4\n");
    let pts = f.file("pts.csv", "1\n0\n0.5\n-1.5\n");
    for method in ["auto", "general"] {
        let v = json_run(&["fit", "--graph", &g, "--points", &pts, "--method", method], 2, "fit");
        assert_eq!(v["result"]["status"], "no_cnd_solution");
    }
    let pts = f.file("pts2.csv", "1\n0\n2\n-3\n");
    let v = json_run(&["fit", "--graph", &g, "--points", &pts], 0, "fit");
    assert_eq!(v["result"]["status"], "converged");
    let out = hrgm(&["fit", "--graph", &g, "--points", &f.file("p3.csv", "1\n0\n0.5\n-1.5\n"), "--method", "general"]);
    assert_eq!(out.code, 2, "exit codes are stable across runs");
}

#[test]
fn fit_fish_from_simulated_data() {
    let fish = UndirectedGraph::fish();
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let truth = model::model_point(&fish, &mut rng);
    let (sample, _) = sample_pareto(&truth, 100_000, 5).unwrap();
    let f = Fixture::new();
    let data = f.file("fish.csv", &to_csv(sample.data()));
    let g = f.file("fish.json", &serde_json::to_string(&fish).unwrap());
    let v = json_run(&["fit", "--graph", &g, "--data", &data], 0, "fit");
    assert_eq!(v["input"]["n"], 100_000);
    let rows = &v["result"]["gamma"]["rows"];
    let mut worst = 0.0f64;
    for i in 0..6 {
        for j in 0..6 {
            if i != j {
                let est = rows[i][j].as_f64().unwrap();
                worst = worst.max((est - truth.get(i + 1, j + 1)).abs() / truth.get(i + 1, j + 1));
            }
        }
    }
    assert!(worst < 0.05, "largest relative error {worst}");
}

#[test]
fn fit_raw_data_with_threshold() {
    // Raw observations on exponential margins: exceedances of the 0.9
    // quantile shifted by u are a Pareto sample.
    let truth = hrgm::Variogram::from_rows(&[&[0.0, 1.0, 2.0], &[1.0, 0.0, 1.0], &[2.0, 1.0, 0.0]]).unwrap();
    let (sample, _) = sample_pareto(&truth, 20_000, 3).unwrap();
    let u = -(0.1f64).ln();
    let shifted = sample.data().map(|x| x + u);
    let f = Fixture::new();
    let data = f.file("raw.csv", &format!("x,y,z\n{}", to_csv(&shifted)));
    let g = f.file("path.txt", "1 2\n2 3\n");
    let v = json_run(&["fit", "--graph", &g, "--data", &data, "--header", "--threshold", "0.9"], 0, "fit");
    assert_eq!(v["input"]["kind"], "observations");
    assert_eq!(v["input"]["n"], 20_000);
    let g13 = v["result"]["gamma"]["rows"][0][2].as_f64().unwrap();
    assert!((g13 - 2.0).abs() < 0.1, "{g13}");
}

#[test]
fn ci_statements_and_graph_mode() {
    let f = Fixture::new();
    let m = f.file("g.csv", TRIANGLE);
    let v = json_run(&["ci", "--gamma", &m, "--statement", "1|3|2", "--statement", "1|2|3"], 0, "ci");
    let s = v["result"]["statements"].as_array().unwrap();
    assert_eq!(s[0]["holds"], true);
    assert_eq!(s[1]["holds"], false);

    let fish = UndirectedGraph::fish();
    let gamma = model::model_point(&fish, &mut ChaCha20Rng::seed_from_u64(3));
    let m = f.file("fish.json", &serde_json::to_string(&gamma).unwrap());
    let g = f.file("fish_g.json", &serde_json::to_string(&fish).unwrap());
    let v = json_run(&["ci", "--gamma", &m, "--graph", &g], 0, "ci");
    assert_eq!(v["result"]["all_hold"], true);
    assert!(!v["result"]["statements"].as_array().unwrap().is_empty());
}

#[test]
fn degree_and_mlt_reports() {
    let f = Fixture::new();
    let c5 = f.file("c5.txt", "1 2\n2 3\n3 4\n4 5\n5 1\n");
    let v = json_run(&["degree", "--graph", &c5], 0, "degree");
    assert_eq!(v["result"]["eMLD"], 11);
    assert_eq!(v["result"]["MLD"], 17);

    let v = json_run(&["degree", "--numeric-k2n", "3", "--seeds", "2", "--seed", "4"], 0, "degree");
    for r in v["result"]["reports"].as_array().unwrap() {
        assert_eq!(r["eMLD"], 6);
    }

    let c4 = f.file("c4.txt", "1 2\n2 3\n3 4\n4 1\n");
    let v = json_run(&["mlt", "--graph", &c4], 0, "mlt");
    assert_eq!((v["result"]["lower"].as_u64(), v["result"]["upper"].as_u64()), (Some(2), Some(2)));
    let v = json_run(&["mlt", "--graph", &c4, "--elim-r", "2", "--trials", "10", "--seed", "0"], 0, "mlt");
    assert_eq!(v["result"]["exact"], 2);
    let v = json_run(&["mlt", "c4-experiment", "--x2", "0", "--x3", "2"], 0, "mlt");
    assert_eq!(v["result"]["outcome"], "ExistsCND");
    let v = json_run(&["mlt", "c4-experiment", "--x2", "0", "--x3", "0.5"], 0, "mlt");
    assert_eq!(v["result"]["outcome"], "NoCNDSolution");
}

#[test]
fn seeds_are_required_and_auto_is_reported() {
    let f = Fixture::new();
    let m = f.file("g.csv", TRIANGLE);
    for args in [
        vec!["simulate", "--gamma", m.as_str(), "--n", "3"],
        vec!["degree", "--numeric-k2n", "2"],
        vec!["mlt", "--graph", m.as_str(), "--elim-r", "1"],
    ] {
        let out = hrgm(&args);
        assert_eq!(out.code, 1);
        let e: Value = serde_json::from_str(out.stderr.trim()).unwrap();
        assert_valid("error", &e);
        assert_eq!(e["error"]["code"], "seed_required", "{args:?}");
    }
    let out = hrgm(&["simulate", "--gamma", &m, "--n", "3", "--seed", "auto"]);
    assert_eq!(out.code, 0);
    assert!(out.stderr.starts_with("seed: "), "{}", out.stderr);
}

#[test]
fn simulate_then_empvario() {
    let f = Fixture::new();
    let m = f.file("g.csv", TRIANGLE);
    let data = f.path("sample.csv").display().to_string();
    let v = json_run(&["simulate", "--gamma", &m, "--n", "2000", "--seed", "9", "--data-out", &data], 0, "simulate");
    assert_eq!((v["result"]["n"].as_u64(), v["result"]["d"].as_u64()), (Some(2000), Some(3)));
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(format!("{data}.meta.json")).unwrap()).unwrap();
    assert_eq!(meta, v);

    let again = hrgm(&["simulate", "--gamma", &m, "--n", "2000", "--seed", "9"]);
    assert_eq!(again.stdout, std::fs::read_to_string(&data).unwrap(), "same seed, same bytes");

    let v = json_run(&["empvario", "--data", &data], 0, "empvario");
    let rows = &v["result"]["variogram"]["rows"];
    assert!((rows[0][2].as_f64().unwrap() - 25.0).abs() < 5.0);
    let sizes: u64 = v["result"]["halfspace_sizes"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).sum();
    assert!(sizes >= 2000);

    let v = json_run(&["simulate", "--gamma", &m, "--n", "50", "--seed", "1", "--halfspace", "2", "--data-out", &data], 0, "simulate");
    assert_eq!(v["result"]["halfspace"], 2);
}

#[test]
fn reproduce_targets() {
    let out = hrgm(&["reproduce", "example-2.2"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_eq!(out.stdout.lines().count(), 3);
    assert!(out.stdout.lines().all(|l| l.starts_with("PASS example-2.2")));

    let v = json_run(&["reproduce", "cycle-degrees", "--json"], 0, "reproduce");
    let table = v["result"][0]["table"].as_array().unwrap();
    assert_eq!(table.len(), 10);
    assert_eq!(table[9]["eMLD"], 2036);

    let v = json_run(&["reproduce", "c4-thresholds", "--json"], 0, "reproduce");
    assert_eq!(v["result"][0]["table"]["none"]["outcome"], "NoCNDSolution");

    let out = hrgm(&["reproduce", "table-9"]);
    let e: Value = serde_json::from_str(out.stderr.trim()).unwrap();
    assert_valid("error", &e);
    assert_eq!(e["error"]["code"], "unknown_target");
}

#[test]
fn check_reports_and_tolerance_override() {
    let f = Fixture::new();
    let m = f.file("g.csv", TRIANGLE);
    let g = f.file("path.txt", "1 2\n2 3\n");
    let v = json_run(&["check", "--gamma", &m, "--graph", &g], 0, "check");
    assert_eq!(v["result"]["gamma"]["certificate"]["status"], "strict");
    assert_eq!(v["result"]["graph"]["chordal"], true);
    assert_eq!(v["result"]["markov"]["holds"], true);

    let v = json_run(&["check", "--graph", &g, "--tol", "1e-6"], 0, "check");
    assert_eq!(v["tolerances"]["rel"], 1e-6);
    assert!(v["result"]["gamma"].is_null());

    let out = hrgm(&["check", "--graph", &g, "--tol", "0"]);
    assert_eq!(out.code, 1, "tolerances must be positive");
}

#[test]
fn output_flag_writes_the_report() {
    let f = Fixture::new();
    let g = f.file("path.txt", "1 2\n2 3\n");
    let out_path = f.path("report.json").display().to_string();
    let out = hrgm(&["check", "--graph", &g, "--output", &out_path]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_valid("check", &v);
}

#[test]
fn input_errors_have_stable_codes() {
    let f = Fixture::new();
    let bad = f.file("bad.csv", "0,1\n2,0\n");
    let out = hrgm(&["check", "--gamma", &bad]);
    let e: Value = serde_json::from_str(out.stderr.trim()).unwrap();
    assert_valid("error", &e);
    assert_eq!(e["error"]["code"], "variogram");
    let out = hrgm(&["check", "--gamma", "/nonexistent/g.csv"]);
    let e: Value = serde_json::from_str(out.stderr.trim()).unwrap();
    assert_eq!(e["error"]["code"], "io");
    let p = f.file("p.json", r#"{"graph":{"d":3,"edges":[[1,2]]},"entries":[[1,3,9]]}"#);
    let out = hrgm(&["fit", "--data", &p]);
    assert_eq!(out.code, 1);
    let e: Value = serde_json::from_str(out.stderr.trim()).unwrap();
    assert_eq!(e["error"]["code"], "json");
}

#[test]
fn partial_variogram_files_match_their_schema() {
    let p = hrgm::completion::PartialVariogram::new(UndirectedGraph::path(3), &[(1, 2, 9.0), (2, 3, 16.0)]).unwrap();
    assert_valid("partial_variogram", &serde_json::to_value(&p).unwrap());
}
