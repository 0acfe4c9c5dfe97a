//! End-to-end checks of the `anderson-lab` binary: config parsing, flag
//! overrides, exit-code semantics, and byte-identical reruns.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_anderson-lab"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("anderson_lab_cli_{name}"));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const WEGNER_CONFIG: &str = r#"{
    "experiment": "wegner",
    "d": 1,
    "radius": 2,
    "dist": {"kind": "uniform", "a": 0.0, "b": 1.0},
    "energy": 2.5,
    "eps": 0.05,
    "trials": 1000,
    "base_seed": 4
}"#;

#[test]
fn wegner_run_exits_zero_and_reruns_identically() {
    let dir = scratch("wegner");
    let cfg = dir.join("wegner.json");
    std::fs::write(&cfg, WEGNER_CONFIG).unwrap();

    let out1 = dir.join("run1");
    let status = bin()
        .args(["wegner", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out1)
        .args(["--workers", "1"])
        .status()
        .unwrap();
    assert!(status.success());

    let out2 = dir.join("run2");
    let status = bin()
        .args(["wegner", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out2)
        .args(["--workers", "6"])
        .status()
        .unwrap();
    assert!(status.success());

    let b1 = std::fs::read(out1.join("wegner.csv")).unwrap();
    let b2 = std::fs::read(out2.join("wegner.csv")).unwrap();
    assert_eq!(b1, b2, "different worker counts changed the bytes");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn seed_override_changes_output() {
    let dir = scratch("seed");
    let cfg = dir.join("wegner.json");
    std::fs::write(&cfg, WEGNER_CONFIG).unwrap();
    let out1 = dir.join("a");
    let out2 = dir.join("b");
    assert!(bin()
        .args(["wegner", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out1)
        .status()
        .unwrap()
        .success());
    assert!(bin()
        .args(["wegner", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out2)
        .args(["--seed", "99"])
        .status()
        .unwrap()
        .success());
    let b1 = std::fs::read(out1.join("wegner.csv")).unwrap();
    let b2 = std::fs::read(out2.join("wegner.csv")).unwrap();
    assert_ne!(b1, b2, "seed override had no effect");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn json_format_flag() {
    let dir = scratch("json");
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, WEGNER_CONFIG).unwrap();
    let out = dir.join("out");
    assert!(bin()
        .args(["wegner", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(["--format", "json"])
        .status()
        .unwrap()
        .success());
    let body = std::fs::read_to_string(out.join("wegner.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&body).unwrap();
    let rows = parsed.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["experiment"], "wegner");
    assert!(rows[0]["columns"]["mean"].is_number());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn malformed_config_exits_two() {
    let dir = scratch("bad");
    let cfg = dir.join("sched.json");
    std::fs::write(
        &cfg,
        r#"{"experiment": "msa_schedule", "alpha": 2.5, "l0": 100}"#,
    )
    .unwrap();
    let output = bin()
        .args(["msa_schedule", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("2p/(p+2d)"), "error should name the alpha constraint: {err}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn subcommand_config_mismatch_exits_two() {
    let dir = scratch("mismatch");
    let cfg = dir.join("wegner.json");
    std::fs::write(&cfg, WEGNER_CONFIG).unwrap();
    let output = bin()
        .args(["dos", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn schedule_run_emits_gate_rows() {
    let dir = scratch("sched_ok");
    let cfg = dir.join("sched.json");
    std::fs::write(
        &cfg,
        r#"{"experiment": "msa_schedule", "d": 1, "alpha": 1.1, "p_exponent": 4.0,
            "gamma": 1.0, "l0": 10000, "k_max": 20, "trials": 1}"#,
    )
    .unwrap();
    let output = bin()
        .args(["msa_schedule", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let body = std::fs::read_to_string(dir.join("msa_schedule.csv")).unwrap();
    assert!(body.lines().count() > 20);
    let _ = std::fs::remove_dir_all(&dir);
}
