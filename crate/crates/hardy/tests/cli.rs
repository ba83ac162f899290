use std::fs;
use std::path::PathBuf;
use std::process::Command;

const SUITE: &str = r#"{
  "seed": 7,
  "runs": [
    {"id": "hardy", "check": {"theorem": "radial_hardy",
      "geometry": {"m": 2, "k": 1, "gamma": 1.0}, "weights": {"alpha1": 0.0, "alpha2": 0.0}}},
    {"id": "log", "sharpness": {"target": {"theorem": "radial_p_log", "hom_dim": 3.0, "p": 2.0},
      "options": {"schedule": [0.5, 0.2]}}},
    {"id": "sweep", "random": {"theorem": "radial_p_poincare", "count": 3}}
  ]
}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hardy-verify"))
}

fn workdir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("hardy-verify-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn verify_writes_a_reproducible_report() {
    let dir = workdir("verify");
    let cfg = dir.join("suite.json");
    fs::write(&cfg, SUITE).unwrap();
    let mut outputs = Vec::new();
    for name in ["a.json", "b.json"] {
        let out = dir.join(name);
        let status = bin().args(["verify", "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap();
        assert!(status.success());
        outputs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let report: serde_json::Value = serde_json::from_slice(&outputs[0]).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["runs"].as_array().unwrap().len(), 3);
    assert_eq!(report["runs"][0]["wall_clock_s"], serde_json::Value::Null);
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn timings_are_opt_in() {
    let dir = workdir("timings");
    let cfg = dir.join("suite.json");
    fs::write(&cfg, SUITE).unwrap();
    let out = dir.join("r.json");
    let status = bin().args(["--timings", "verify", "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert!(status.success());
    let report: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert!(report["runs"][0]["wall_clock_s"].as_f64().unwrap() >= 0.0);
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn sweep_writes_csv_per_sharpness_run() {
    let dir = workdir("sweep");
    let cfg = dir.join("suite.json");
    fs::write(&cfg, r#"{"runs": [{"id": "log", "sharpness": {"target": {"theorem": "radial_p_log", "hom_dim": 3.0, "p": 2.0}, "options": {"schedule": [0.5, 0.2]}}}]}"#).unwrap();
    let out = dir.join("out");
    let status = bin().args(["sweep", "--config"]).arg(&cfg).arg("--out-dir").arg(&out).status().unwrap();
    assert!(status.success());
    let csv = fs::read_to_string(out.join("log.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.starts_with("theorem_id,epsilon,quotient,sharp_constant,gap\n"));
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn list_prints_every_theorem() {
    let out = bin().arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for id in ["radial_hardy", "ab_hardy", "landau_log", "radial_p_superweight", "constant_field"] {
        assert!(text.lines().any(|l| l == id), "{id} missing");
    }
}

#[test]
fn bad_config_exits_with_two() {
    let dir = workdir("bad");
    let cfg = dir.join("suite.json");
    fs::write(&cfg, r#"{"runs": [{"id": "x", "check": {"theorem": "no_such_theorem"}}]}"#).unwrap();
    let status = bin().args(["verify", "--config"]).arg(&cfg).arg("--out").arg(dir.join("r.json")).status().unwrap();
    assert_eq!(status.code(), Some(2));
    let _ = fs::remove_dir_all(&dir);
}
