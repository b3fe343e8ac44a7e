use std::process::{Command, Output};

use serde_json::Value;

fn spaqt(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spaqt"));
    cmd.args(args).env_remove("SPAQT_DIM_CAP");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn groups_scenario_reports_group_facts() {
    let out = spaqt(&["groups"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["scenario"], "groups");
    assert_eq!(v["passed"], true);
    let facts = &v["results"]["criteria"][0]["results"]["rotations"];
    assert_eq!((facts["order"].as_u64(), facts["center"].as_u64(), facts["derived"].as_u64()), (Some(16), Some(4), Some(2)));
    for a in v["assertions"].as_array().unwrap() {
        assert!(a["tolerance"].is_number() && a["measured"].is_number());
    }
}

#[test]
fn elementary_gap_profile_as_csv() {
    let out = spaqt(&["--scenario", "elementary", "--n", "2", "--beta", "-0.3333333333333333", "--axis", "x", "--steps", "32", "--format", "csv"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,gap"));
    assert_eq!(lines.count(), 33);
}

#[test]
fn elementary_gate_json_is_complex_pairs() {
    let out = spaqt(&["elementary", "--n", "2", "--steps", "32"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let gate = &json(&out)["results"]["gate"]["gate"];
    assert_eq!(gate.as_array().unwrap().len(), 2);
    // σᶻ up to phase, leading entry real positive.
    assert!((gate[0][0][0].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!((gate[1][1][0].as_f64().unwrap() + 1.0).abs() < 1e-6);
}

#[test]
fn failed_assertion_exits_with_one() {
    let out = spaqt(&["universality", "--embeddings", "standard"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("H reached"));
}

#[test]
fn tolerance_flags_apply() {
    let out = spaqt(&["universality", "--tol-residual", "1e-300"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["config"]["tol"]["residual"], 1e-300);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    let report = dir.path().join("report.json");
    std::fs::write(&cfg, "# elementary gate on a short chain\nscenario = \"elementary\"\nn = 3\nsteps = 16\naxis = \"y\"\n").unwrap();
    let out = spaqt(&["--config", cfg.to_str().unwrap(), "--n", "2", "--out", report.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["config"]["n"], 2);
    assert_eq!(v["config"]["steps"], 16);
    assert_eq!(v["config"]["axis"], serde_json::json!([0.0, 1.0, 0.0]));
}

#[test]
fn usage_errors_exit_with_two() {
    let bad = spaqt(&["elementary", "--steps", "1"], &[]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("steps"));
    let none = spaqt(&[], &[]);
    assert_eq!(none.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&none.stderr).contains("scenario"));
    let csv = spaqt(&["groups", "--format", "csv"], &[]);
    assert_eq!(csv.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&csv.stderr).contains("no tabular profile"));
}

#[test]
fn dimension_cap_from_environment() {
    let out = spaqt(&["elementary", "--n", "3"], &[("SPAQT_DIM_CAP", "50")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds the cap 50"));
}

#[test]
fn identical_config_gives_identical_payload() {
    let strip = |out: &Output| {
        let mut v = json(out);
        v.as_object_mut().unwrap().remove("wall_time_s");
        // Criterion runtimes are wall-clock measurements as well.
        for c in v["results"]["criteria"].as_array_mut().into_iter().flatten() {
            c["assertions"].as_array_mut().unwrap().retain(|a| a["name"] != "runtime_s");
        }
        v["assertions"].as_array_mut().unwrap().retain(|a| !a["name"].as_str().unwrap().ends_with("runtime_s"));
        serde_json::to_string(&v).unwrap()
    };
    for args in [&["universality", "--seed", "11"][..], &["reps"][..]] {
        assert_eq!(strip(&spaqt(args, &[])), strip(&spaqt(args, &[])));
    }
}
