use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hypsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypsym")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("report is JSON")
}

fn config_path(name: &str) -> String {
    format!("{}/configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn energy_config(dir: &Path, n: f64, steps: usize, xi: &str, state: &str) -> String {
    let text = format!(
        r#"{{
  "symbol": {{"a": "0", "b": "t", "c": "0"}},
  "energy": {{
    "run": {{"n": {n}, "gamma": 1, "lambda": 1, "eps1": 0.1, "t_start": 0.001, "t_end": 1,
             "steps": {steps}, "initial_state": {state}}},
    "xi": {xi}
  }}
}}"#
    );
    let path = dir.join(format!("energy_{n}_{steps}.json"));
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn bezout_symmetrizer_of_x3_minus_x() {
    let o = hypsym(&["poly", "symmetrize", "--coeffs", "0,-1,0"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["holds"], true);
    assert_eq!(r["constants"]["det_h"], 4.0);
    assert_eq!(r["constants"]["discriminant"], 4.0);
    assert_eq!(r["details"]["h"], serde_json::json!([[1.0, 0.0, -1.0], [0.0, 2.0, 0.0], [-1.0, 0.0, 3.0]]));
}

#[test]
fn complex_roots_fail_the_check() {
    let o = hypsym(&["poly", "check", "--coeffs", "0,1"]);
    assert_eq!(code(&o), 2);
    assert_eq!(report(&o)["holds"], false);
    assert_eq!(code(&hypsym(&["poly", "check", "--coeffs", "-2,1"])), 0);
}

#[test]
fn nuij_splits_a_double_root() {
    let o = hypsym(&["poly", "nuij", "--coeffs", "0,0", "--eps", "0.5"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["details"]["smoothed"], serde_json::json!([1.0, 0.0]));
    assert_eq!(r["constants"]["min_gap"], 1.0);
}

#[test]
fn random_polynomials_depend_only_on_the_seed() {
    let a = hypsym(&["poly", "symmetrize", "--random", "50", "--seed", "3"]);
    let b = hypsym(&["poly", "symmetrize", "--random", "50", "--seed", "3"]);
    let c = hypsym(&["poly", "symmetrize", "--random", "50", "--seed", "4"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(report(&a)["worst_point"], report(&c)["worst_point"]);
}

#[test]
fn input_errors_exit_with_one() {
    assert_eq!(code(&hypsym(&["poly", "check", "--coeffs", "x"])), 1);
    assert_eq!(code(&hypsym(&["poly", "check"])), 1);
    assert_eq!(code(&hypsym(&["poly", "check", "--coeffs", "1", "--tol", "-1"])), 1);
    assert_eq!(code(&hypsym(&["--config", "/nonexistent/config.json", "poly", "check"])), 1);
    assert_eq!(code(&hypsym(&["cubic", "conditions"])), 1);
    assert_eq!(code(&hypsym(&["frobnicate"])), 1);
    assert_eq!(code(&hypsym(&["--help"])), 0);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"polynomial": {"coeffs": [0, -1], "typo": 1}}"#).unwrap();
    let o = hypsym(&["--config", bad.to_str().unwrap(), "poly", "check"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("typo"));
}

#[test]
fn config_round_trips_through_the_report() {
    for name in ["canonical_energy.json", "example_conditions.json", "extend.json"] {
        let path = config_path(name);
        let o = hypsym(&["--config", &path, "cubic", "classify"]);
        if name == "canonical_energy.json" {
            // no grid section
            assert_eq!(code(&o), 1);
            continue;
        }
        let echoed = report(&o)["config"].clone();
        let original: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        // defaults are filled in, but what was given survives unchanged
        for (k, v) in original.as_object().unwrap() {
            if k != "conditions" {
                assert_eq!(&echoed[k]["a"], &v["a"], "{name}: {k}");
            }
        }
        let dir = tempfile::tempdir().unwrap();
        let again = dir.path().join("again.json");
        fs::write(&again, serde_json::to_string(&echoed).unwrap()).unwrap();
        let o2 = hypsym(&["--config", again.to_str().unwrap(), "cubic", "classify"]);
        assert_eq!(report(&o2)["config"], echoed);
    }
}

#[test]
fn cubic_commands_on_sample_configs() {
    let o = hypsym(&["--config", &config_path("example_conditions.json"), "cubic", "conditions"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let o = hypsym(&["--config", &config_path("degenerate_conditions.json"), "cubic", "conditions"]);
    assert_eq!(code(&o), 2);
    let r = report(&o);
    assert!(r["constants"]["condition_E.margin"].as_f64().unwrap() < 0.0);
    assert!(r["constants"]["condition_H.margin"].as_f64().unwrap() >= 0.0);
    assert!(r["worst_point"]["t"].is_number());
    // the example family: structural assumptions and (H) hold, (E) does not
    let o = hypsym(&["--config", &config_path("example_eh.json"), "cubic", "conditions"]);
    assert_eq!(code(&o), 2);
    let holds: Vec<(String, bool)> = report(&o)["details"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| (d["name"].as_str().unwrap().to_string(), d["holds"].as_bool().unwrap()))
        .collect();
    let want = [("structural_assumptions", true), ("condition_E", false), ("condition_H", true)];
    assert_eq!(holds, want.map(|(n, h)| (n.to_string(), h)));
    let o = hypsym(&["--config", &config_path("trivial.json"), "cubic", "conditions"]);
    assert_eq!(code(&o), 0);
    // b = t² is too flat at t = 0
    let o = hypsym(&["--config", &config_path("b_t_squared.json"), "cubic", "conditions"]);
    assert_eq!(code(&o), 2);
    let r = report(&o);
    assert_eq!(r["worst_point"]["t"], 1e-6);
    assert!(r["details"][0]["clauses"].as_array().unwrap().iter().any(|c| c["name"] == "b >= delta1 t" && c["holds"] == false));
    let o = hypsym(&["--config", &config_path("extend.json"), "cubic", "extend"]);
    assert_eq!(code(&o), 0);
    let o = hypsym(&["--config", &config_path("classify.json"), "cubic", "classify"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["constants"]["triple"], 1.0);
}

#[test]
fn energy_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let zero = "[[0, 0], [0, 0], [0, 0]]";
    let unit = "[[1, 0], [1, 0], [1, 0]]";
    let cfg = energy_config(dir.path(), 4.0, 4096, "[[1], [2]]", zero);
    assert_eq!(code(&hypsym(&["--config", &cfg, "energy", "run"])), 0);
    let cfg = energy_config(dir.path(), 4.0, 4096, "[[1], [2]]", unit);
    assert_eq!(code(&hypsym(&["--config", &cfg, "energy", "run"])), 0);
    assert_eq!(code(&hypsym(&["--config", &cfg, "energy", "adjoint"])), 0);
    // below the measured threshold, which is negative for the lowest modes
    let cfg = energy_config(dir.path(), 0.0, 8192, "[[16], [64]]", unit);
    let o = hypsym(&["--config", &cfg, "energy", "run"]);
    assert_eq!(code(&o), 2);
    assert!(report(&o)["constants"]["keiyaku.margin"].as_f64().unwrap() < 0.0);
    // far too few steps for ⟨ξ⟩ = 128
    let cfg = energy_config(dir.path(), 4.0, 16, "[[128]]", unit);
    let o = hypsym(&["--config", &cfg, "energy", "run"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("step size"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let cfg = energy_config(dirs[0].path(), 4.0, 2048, "[[1], [4]]", "[[1, 0], [0, 0.5], [0, 0]]");
    let mut stdout = Vec::new();
    for d in &dirs {
        let out = d.path().join("out");
        let o = hypsym(&["--config", &cfg, "--out", out.to_str().unwrap(), "energy", "run"]);
        assert_eq!(code(&o), 0);
        stdout.push(o.stdout);
    }
    assert_eq!(stdout[0], stdout[1]);
    let (a, b) = (dirs[0].path().join("out"), dirs[1].path().join("out"));
    for f in ["report.json", "mode_0.csv", "mode_1.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let csv = fs::read_to_string(a.join("mode_0.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("t,reU1,") && header.ends_with(",err_est"));
    assert_eq!(csv.lines().count(), 2048 + 2);
    let meta: Value = serde_json::from_slice(&fs::read(a.join("run_meta.json")).unwrap()).unwrap();
    assert_eq!(meta["exit_code"], 0);
    assert_eq!(meta["files"], serde_json::json!(["mode_0.csv", "mode_1.csv", "report.json"]));
}

#[test]
fn scan_reports_a_feasible_cell() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    fs::write(
        &path,
        r#"{
  "symbol": {"a": "0", "b": "t", "c": "0"},
  "energy": {
    "run": {"n": 4, "gamma": 1, "lambda": 1, "eps1": 0.1, "t_start": 0.001, "t_end": 1,
            "steps": 4096, "initial_state": [[1, 0], [1, 0], [1, 0]]},
    "xi": [[1], [2], [4]],
    "scan": {"n_list": [0, 4, 16], "gamma_list": [0, 1], "lambda_list": [1]}
  },
  "output": {"csv": false}
}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = hypsym(&["--config", path.to_str().unwrap(), "--out", out.to_str().unwrap(), "energy", "scan"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["constants"]["cells"], 6.0);
    assert!(r["details"]["cells"].as_array().unwrap().iter().filter(|c| c["n"] == 0.0).all(|c| c["keiyaku"] == false));
    assert!(!out.join("mode_0.csv").exists());
    assert!(out.join("report.json").exists());
}
