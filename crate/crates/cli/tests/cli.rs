use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}):\n{}", self.stdout))
    }

    /// The last stderr line, which is the diagnostic on failure.
    fn diagnostic(&self) -> Value {
        let line = self.stderr.lines().last().expect("stderr is empty");
        serde_json::from_str(line).unwrap_or_else(|e| panic!("diagnostic is not JSON ({e}): {line}"))
    }
}

fn hodgekit(args: &[&str], scenario_dir: Option<&Path>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hodgekit"));
    cmd.args(args);
    match scenario_dir {
        Some(d) => cmd.env("HODGEKIT_SCENARIO_DIR", d),
        None => cmd.env_remove("HODGEKIT_SCENARIO_DIR"),
    };
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run(args: &[&str]) -> Run {
    hodgekit(args, None)
}

fn scenario(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/scenarios").join(format!("{name}.json"));
    p.to_string_lossy().into_owned()
}

fn write_json(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

fn closing_with(key: &str, value: Value) -> Value {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(scenario("closing5")).unwrap()).unwrap();
    v[key] = value;
    v
}

#[test]
fn check_accepts_the_unitary_example() {
    let r = run(&["mhs", "check", &scenario("example-2-7")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["membership"], "InM");
}

#[test]
fn deligne_grading_equals_relative_grading_on_closing_pair() {
    let r = run(&["weights", "deligne-grading", &scenario("closing5")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["deligne_grading"], v["relative_grading"]);
}

#[test]
fn flat_scan_csv_has_two_pi_slope() {
    let r = run(&["orbit", "scan", &scenario("flat-hodge-tate"), "--format", "csv"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let slope: f64 = r
        .stdout
        .lines()
        .find_map(|l| l.strip_prefix("# slope,"))
        .expect("slope line")
        .parse()
        .unwrap();
    assert!((slope + 2.0 * PI).abs() <= 1e-3 * 2.0 * PI, "slope {slope}");
    let header = r.stdout.lines().next().unwrap();
    assert!(header.starts_with("y,"), "{header}");
}

#[test]
fn every_bundled_orbit_scenario_decays_as_declared() {
    for name in ["flat-hodge-tate", "sharpness-L3", "tensor-4", "tensor-6"] {
        let r = run(&["orbit", "scan", &scenario(name)]);
        assert_eq!(r.code, 0, "{name}: {}", r.stderr);
        let slope: f64 = r.json()["fit"]["slope"].as_str().unwrap().parse().unwrap();
        if name == "sharpness-L3" {
            assert!(slope.abs() <= 1e-9, "{name}: {slope}");
        } else {
            assert!((slope + 2.0 * PI).abs() <= 1e-3 * 2.0 * PI, "{name}: {slope}");
        }
    }
}

#[test]
fn scenario_runs_report_their_expectations() {
    let r = run(&["scenario", "run", "example-2-7"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    let gram = v["checks"].as_array().unwrap().iter().find(|c| c["check"] == "unitary_graded_frame").unwrap();
    assert_eq!(gram["value"], serde_json::json!([["1", "0"], ["0", "1"]]));

    let r = run(&["scenario", "run", "sharpness-L3", "--format", "csv"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("sharpness-L3,constant_distance,true"), "{}", r.stdout);
}

#[test]
fn scenario_run_all_passes() {
    let r = run(&["scenario", "run", "all"]);
    assert_eq!(r.code, 0, "{}\n{}", r.stdout, r.stderr);
    let v = r.json();
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 10);
    assert_eq!(v["scenarios"].as_array().unwrap().len(), 6);
}

#[test]
fn failed_checks_exit_one_with_reason() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_json(dir.path(), "bad.json", &closing_with("hodge_filtration", serde_json::json!({ "0": [["1", "0"]], "1": [["1", "0"]] })));
    let r = run(&["mhs", "check", &bad]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["membership"], "NotInFlagCheck");
    let d = r.diagnostic();
    assert_eq!(d["exit_code"], 1);
    assert_eq!(d["reason"]["membership"], "NotInFlagCheck");

    let neg = write_json(dir.path(), "neg.json", &closing_with("polarizations", serde_json::json!({ "0": [["1"]], "2": [["-1"]] })));
    let r = run(&["mhs", "check", &neg]);
    assert_eq!(r.code, 1);
    assert_eq!(r.diagnostic()["reason"]["membership"], "InCheckM");
}

#[test]
fn input_errors_exit_two_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    let floats = write_json(dir.path(), "floats.json", &closing_with("nilpotent", serde_json::json!([[0.0, 1.5], [0, 0]])));
    let cases: Vec<(Vec<String>, &str)> = vec![
        (vec!["mhs".into(), "check".into(), "/nonexistent/x.json".into()], "Io"),
        (vec!["mhs".into(), "check".into(), garbage.to_string_lossy().into()], "Parse"),
        (vec!["weights".into(), "monodromy".into(), scenario("example-2-7")], "Invalid"),
        (vec!["scenario".into(), "run".into(), "no-such-scenario".into()], "UnknownScenario"),
        (vec!["mhs".into(), "metric".into(), scenario("closing5"), "--format".into(), "csv".into()], "Invalid"),
        (vec!["weights".into(), "monodromy".into(), floats, "--exact".into()], "Parse"),
        (vec!["mhs".into(), "frobnicate".into()], "Usage"),
    ];
    for (args, code) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let r = run(&args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stderr);
        assert!(r.stdout.is_empty());
        let d = r.diagnostic();
        assert_eq!(d["status"], "error");
        assert_eq!(d["code"], code, "{args:?}");
    }
}

#[test]
fn float_input_selects_the_floating_path() {
    let dir = tempfile::tempdir().unwrap();
    let floats = write_json(dir.path(), "floats.json", &closing_with("nilpotent", serde_json::json!([[0.0, 1.5], [0, 0]])));
    let r = run(&["weights", "monodromy", &floats]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["nilpotent"][0][1], 1.5);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["orbit", "scan", "SC:tensor-6", "--format", "csv"],
        vec!["weights", "admissible", "SC:closing5"],
        vec!["orbit", "horizontality", "SC:tensor-4"],
        vec!["scenario", "list"],
    ] {
        let args: Vec<String> = args
            .iter()
            .map(|a| a.strip_prefix("SC:").map_or(a.to_string(), scenario))
            .collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.code, 0, "{}", a.stderr);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn structure_outputs_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for verb in [["mhs", "metric"], ["mhs", "delta-split"], ["weights", "admissible"]] {
        for tol in [None, Some("1e-12")] {
            let mut args = vec![verb[0], verb[1], ""];
            let first_in = scenario("closing5");
            args[2] = &first_in;
            if let Some(t) = tol {
                args.extend(["--tolerance", t]);
            }
            let first = run(&args);
            assert_eq!(first.code, 0, "{}", first.stderr);
            let path = dir.path().join("out.json");
            std::fs::write(&path, &first.stdout).unwrap();
            let p = path.to_string_lossy().into_owned();
            args[2] = &p;
            let second = run(&args);
            assert_eq!(second.code, 0, "{}", second.stderr);
            assert_eq!(first.stdout, second.stdout, "{verb:?} {tol:?}");
        }
    }
}

#[test]
fn orbit_eval_moves_the_hodge_filtration() {
    let r = run(&["orbit", "eval", &scenario("closing5"), "--z", "-1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["z"], "-1");
    // F^1 = <e0 + c e2>, c = 2/5 - 4/5 i; e^{-N} sends it to <e0 + c/(1-c) e2>.
    assert_eq!(v["hodge_filtration"]["1"], serde_json::json!([["1", "-2/5-4/5i"]]));
}

#[test]
fn scenario_dir_override_replaces_bundled_set() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(scenario("closing5"), dir.path().join("mine.json")).unwrap();
    let r = hodgekit(&["scenario", "list", "--format", "csv"], Some(dir.path()));
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "name,kind\nmine,structure\n");
    let r = hodgekit(&["scenario", "run", "mine"], Some(dir.path()));
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = hodgekit(&["scenario", "run", "example-2-7"], Some(dir.path()));
    assert_eq!(r.code, 2);
    assert_eq!(r.diagnostic()["code"], "UnknownScenario");
}

#[test]
fn library_entry_point_matches_binary() {
    let path = scenario("example-2-7");
    let lib = hodgekit_cli::run(["hodgekit", "mhs", "bigrading", path.as_str()]);
    let bin = run(&["mhs", "bigrading", &path]);
    assert_eq!(lib.code, bin.code);
    assert_eq!(lib.stdout, bin.stdout);
}
