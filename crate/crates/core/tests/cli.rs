use std::path::Path;
use std::process::Command;

use parascale::cli::run_with;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("parascale").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (code, out, err) = run(&full);
    let doc = serde_json::from_str(&out).unwrap_or_else(|e| panic!("bad json ({e}): {out} {err}"));
    (code, doc)
}

fn config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn num(doc: &Value, key: &str) -> f64 {
    doc["summary"][key].as_f64().unwrap_or_else(|| panic!("missing {key}: {}", doc["summary"]))
}

#[test]
fn parabolic_exponents_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "e.toml", "[exponents]\nphi = 0.5\nalpha = 0.4\nbeta = 0.0\ngamma = 2.0\n");
    let (code, doc) = run_json(&["check-parabolicity", "--config", &cfg]);
    assert_eq!(code, 0);
    assert!((num(&doc, "chi") - 0.7).abs() < 1e-15);
    assert_eq!(doc["summary"]["verdict"], "parabolic");
    assert!(num(&doc, "T_star") > 0.0);
}

#[test]
fn non_parabolic_exponents_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "e.toml", "[exponents]\nphi = 1.0\nalpha = 0.5\ngamma = 2.0\n");
    let (code, doc) = run_json(&["check-parabolicity", "--config", &cfg]);
    assert_eq!(code, 2);
    assert_eq!(num(&doc, "chi"), 1.25);
    assert_eq!(doc["summary"]["verdict"], "not parabolic");
}

#[test]
fn critical_nonlocal_points_to_divergence_demo() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "n.toml", "problem = \"nonlocal\"\n[nonlocal]\nn = 1\nlambda = 1.0\n");
    let (code, doc) = run_json(&["check-parabolicity", "--config", &cfg]);
    assert_eq!(code, 2);
    assert_eq!(num(&doc, "chi"), 1.0);
    assert_eq!(doc["summary"]["see_also"], "parascale example divergence");
}

#[test]
fn configuration_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = config(dir.path(), "u.toml", "[exponents]\nphi = 0.5\nbogus = 1\n");
    assert_eq!(run(&["check-parabolicity", "--config", &unknown]).0, 1);
    let broken = config(dir.path(), "b.toml", "[exponents\nphi = ");
    assert_eq!(run(&["check-parabolicity", "--config", &broken]).0, 1);
    let missing = dir.path().join("absent.toml");
    assert_eq!(run(&["check-parabolicity", "--config", missing.to_str().unwrap()]).0, 1);
    assert_eq!(run(&["check-parabolicity"]).0, 1);
    assert_eq!(run(&["solve"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["solve", "--tol", "-1"]).0, 1);
    let (code, _, err) = run(&["check-parabolicity", "--config", &unknown]);
    assert_eq!(code, 1);
    assert!(err.contains("bogus"), "{err}");
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for cmd in ["check-parabolicity", "verify-semigroup", "solve", "example", "certificate"] {
        assert!(out.contains(cmd), "{cmd} missing from help");
    }
}

#[test]
fn semigroup_sweep_summary() {
    let (code, doc) = run_json(&["verify-semigroup"]);
    assert_eq!(code, 0);
    assert!(num(&doc, "max_l1_ratio") <= 1.0 + 1e-9);
    assert!((num(&doc, "decay_slope_gap_1") + 0.5).abs() <= 0.05);
    assert_eq!(doc["tables"]["sweep"]["columns"][1], "t");
    assert_eq!(doc["tables"]["sweep"]["rows"].as_array().unwrap().len(), 100 * 400);
}

#[test]
fn empty_sweep_grid_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "s.toml", "[semigroup]\nt_count = 0\n");
    assert_eq!(run(&["verify-semigroup", "--config", &cfg]).0, 1);
}

#[test]
fn seeded_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "s.toml", "[semigroup]\nfields = 5\nt_count = 4\ndelta_count = 3\nstrip = true\n");
    let a = run(&["verify-semigroup", "--config", &cfg, "--seed", "7", "--format", "csv"]);
    let b = run(&["verify-semigroup", "--config", &cfg, "--seed", "7", "--format", "csv"]);
    let c = run(&["verify-semigroup", "--config", &cfg, "--seed", "8", "--format", "csv"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    assert_ne!(a.1, c.1);
    assert!(a.1.starts_with("# summary\nkey,value\n"));
    assert!(a.1.contains("\n# sweep\nfield,t,delta,s,ratio_l1,ratio_strip\n"));

    let x = run(&["example", "nonlocal", "--format", "json"]);
    let y = run(&["example", "nonlocal", "--format", "json"]);
    assert_eq!(x.0, 0);
    assert_eq!(x.1, y.1);
}

#[test]
fn nonlocal_example_matches_closed_form() {
    let (code, doc) = run_json(&["example", "nonlocal"]);
    assert_eq!(code, 0);
    assert_eq!(doc["summary"]["status"], "Converged");
    assert!(num(&doc, "max_rel_nonzero") <= 1e-12);
    assert!(num(&doc, "max_rel_mode0") <= 1e-3);
    let table = &doc["tables"]["closed_form"];
    assert_eq!(table["columns"], serde_json::json!(["t", "mode0_solver", "mode0_exact", "abs_diff"]));
    assert_eq!(table["rows"].as_array().unwrap().len(), 257);
}

#[test]
fn critical_nonlocal_example_refuses_and_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "n.toml", "problem = \"nonlocal\"\n[nonlocal]\nlambda = 1.0\n");
    let (code, doc) = run_json(&["example", "nonlocal", "--config", &cfg]);
    assert_eq!(code, 2);
    assert!(doc["tables"]["closed_form"].is_null());
    assert!(num(&doc, "slope") > 0.0);
    assert!(num(&doc, "r_squared") >= 0.99);
}

#[test]
fn zero_forcing_gives_zero_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "z.toml", "problem = \"zero\"\n");
    let (code, doc) = run_json(&["solve", "--config", &cfg]);
    assert_eq!(code, 0);
    assert_eq!(num(&doc, "final_residual"), 0.0);
    assert!(doc["tables"]["trajectory"]["rows"].as_array().unwrap().is_empty());
}

#[test]
fn constant_forcing_grows_linearly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.toml", "problem = \"constant\"\n[constant]\nvalue = 2.0\n");
    let (code, doc) = run_json(&["solve", "--config", &cfg]);
    assert_eq!(code, 0);
    for row in doc["tables"]["trajectory"]["rows"].as_array().unwrap() {
        let (t, re) = (row[0].as_f64().unwrap(), row[5].as_f64().unwrap());
        assert!((re - 2.0 * t).abs() <= 1e-14, "{row}");
    }
}

#[test]
fn non_convergence_exits_three_and_still_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "g.toml", "problem = \"gradient\"\n");
    let out = dir.path().join("run.csv");
    let (code, text, _) = run(&["solve", "--config", &cfg, "--max-iter", "2", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(text.contains("NotConverged"));
    // the residual history is the primary table of `solve`
    let residuals = std::fs::read_to_string(&out).unwrap();
    assert_eq!(residuals.lines().count(), 3);
    assert!(residuals.starts_with("iteration,residual\n"));
    for side in ["run.summary.csv", "run.seminorms.csv", "run.trajectory.csv"] {
        assert!(dir.path().join(side).exists(), "{side} missing");
    }
}

#[test]
fn certificate_command() {
    let (code, doc) = run_json(&["certificate"]);
    assert_eq!(code, 0);
    assert_eq!(doc["summary"]["certificate"], true);
    let rows = doc["tables"]["certificate"]["rows"].as_array().unwrap();
    assert!((rows[1][1].as_f64().unwrap() - 0.375).abs() < 1e-12);

    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.toml", "[ns3d]\nrho = 0.45\nr = 0.5\na = 1.6\neps = 0.05\n");
    let (code, doc) = run_json(&["certificate", "--config", &cfg]);
    assert_eq!(code, 2);
    assert_eq!(doc["summary"]["feasible_for_r"], false);
}

#[test]
fn ns3d_example_reports_certificate_and_energy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "ns.toml", "problem = \"ns3d\"\ndim = 3\nN = 8\n");
    let (code, doc) = run_json(&["example", "ns3d", "--config", &cfg]);
    assert_eq!(code, 0);
    assert_eq!(doc["summary"]["certificate"], true);
    assert!(num(&doc, "max_energy_budget_residual") <= 1e-6);
    assert!(num(&doc, "final_divergence_defect") <= 1e-12);
}

#[test]
fn example_rejects_mismatched_problem() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "g.toml", "problem = \"gradient\"\n");
    assert_eq!(run(&["example", "nonlocal", "--config", &cfg]).0, 1);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_parascale");
    let problems = Path::new(env!("CARGO_MANIFEST_DIR")).join("problems");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code().unwrap();
    let path = |name: &str| problems.join(name).to_str().unwrap().to_string();
    assert_eq!(status(&["check-parabolicity", "--config", &path("parabolic.toml")]), 0);
    assert_eq!(status(&["check-parabolicity", "--config", &path("not_parabolic.toml")]), 2);
    assert_eq!(status(&["check-parabolicity", "--config", &path("nonlocal_critical.toml")]), 2);
    assert_eq!(status(&["solve", "--config", &path("zero.toml")]), 0);
    assert_eq!(status(&["no-such-command"]), 1);
}
