use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use welded_harness::cli::attachment_path;
use welded_harness::ExperimentConfig;

const SMALL: &str = r#"{
  "seed": 3,
  "walk": { "heights": [3], "steps": 100, "walker_trials": 100, "cross_checks": 1 },
  "discovery": { "heights": [3], "queries": [1], "trials": 500 },
  "simulate": { "labelings": 3, "family": { "count": 2 } },
  "e2e": { "walker_height": 5, "walker_trials": 100, "walk_heights": [3] }
}"#;

fn welded(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_welded"));
    cmd.args(args).env_remove("WELDED_JOBS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn setup() -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, SMALL).unwrap();
    (dir, cfg)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn stdout_report_matches_file_report() {
    let (dir, cfg) = setup();
    let out = dir.path().join("r.json");
    let a = welded(&["discovery", "--config", s(&cfg)], &[]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = welded(&["discovery", "--config", s(&cfg), "--out", s(&out)], &[]);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(a.stdout, std::fs::read(&out).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "welded-report/1");
    assert_eq!(v["command"], "discovery");
    assert_eq!(v["config"]["seed"], 3);
    assert!(v["config"].get("out").is_none());
}

#[test]
fn seed_flag_overrides_config() {
    let (_dir, cfg) = setup();
    let a = welded(&["discovery", "--config", s(&cfg), "--seed", "99"], &[]);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 99);
    let b = welded(&["discovery", "--config", s(&cfg)], &[]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let (dir, cfg) = setup();
    for command in ["walk", "simulate"] {
        let one = dir.path().join(format!("{command}-1.json"));
        let four = dir.path().join(format!("{command}-4.json"));
        assert!(welded(&[command, "--config", s(&cfg), "--out", s(&one), "--jobs", "1"], &[]).status.success());
        assert!(welded(&[command, "--config", s(&cfg), "--out", s(&four)], &[("WELDED_JOBS", "4")]).status.success());
        assert_eq!(std::fs::read(&one).unwrap(), std::fs::read(&four).unwrap(), "{command}");
    }
    let a = std::fs::read(attachment_path(&dir.path().join("walk-1.json"), "walk-n3.csv")).unwrap();
    let b = std::fs::read(attachment_path(&dir.path().join("walk-4.json"), "walk-n3.csv")).unwrap();
    assert_eq!(a, b);
    assert!(String::from_utf8(a).unwrap().starts_with("t,p\n0,0\n"));
}

#[test]
fn existing_outputs_are_never_overwritten() {
    let (dir, cfg) = setup();
    let out = dir.path().join("walk.json");
    std::fs::write(&out, "keep").unwrap();
    let r = welded(&["walk", "--config", s(&cfg), "--out", s(&out)], &[]);
    assert_eq!(r.status.code(), Some(2));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "keep");

    let fresh = dir.path().join("w2.json");
    let csv = attachment_path(&fresh, "walk-n3.csv");
    std::fs::write(&csv, "keep").unwrap();
    let r = welded(&["walk", "--config", s(&cfg), "--out", s(&fresh)], &[]);
    assert_eq!(r.status.code(), Some(2));
    assert!(!fresh.exists());
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), "keep");
}

#[test]
fn bad_inputs_exit_with_two() {
    let (dir, _) = setup();
    let unknown = dir.path().join("unknown.json");
    std::fs::write(&unknown, r#"{ "walk": { "height": [3] } }"#).unwrap();
    let r = welded(&["walk", "--config", s(&unknown)], &[]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("height"));

    let invalid = dir.path().join("invalid.json");
    std::fs::write(&invalid, r#"{ "walk": { "steps": 0 } }"#).unwrap();
    assert_eq!(welded(&["walk", "--config", s(&invalid)], &[]).status.code(), Some(2));

    let missing = dir.path().join("nothing.json");
    assert_eq!(welded(&["walk", "--config", s(&missing)], &[]).status.code(), Some(2));
    assert_eq!(welded(&["walk", "--jobs", "0"], &[]).status.code(), Some(2));
    assert_eq!(welded(&["walk"], &[("WELDED_JOBS", "0")]).status.code(), Some(2));
    assert!(!welded(&["teleport"], &[]).status.success());
}

#[test]
fn failed_checks_exit_with_one() {
    let (dir, _) = setup();
    let cfg = dir.path().join("strict.json");
    // a walk 10^6 times as likely as the walker cannot be asked for
    std::fs::write(
        &cfg,
        r#"{ "e2e": { "walker_height": 3, "walker_trials": 200, "walk_heights": [3] },
             "walk": { "heights": [3], "steps": 50, "factor": 1000000.0 },
             "simulate": { "labelings": 2, "family": { "count": 1 } } }"#,
    )
    .unwrap();
    let r = welded(&["e2e", "--config", s(&cfg)], &[]);
    assert_eq!(r.status.code(), Some(1), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(String::from_utf8_lossy(&r.stderr).contains("failed:"));
}

#[test]
fn configs_fill_defaults() {
    let cfg = ExperimentConfig::from_json(r#"{ "seed": 5 }"#).unwrap();
    assert_eq!(cfg.seed, 5);
    assert_eq!(cfg, ExperimentConfig { seed: 5, ..ExperimentConfig::default() });
    assert!(ExperimentConfig::from_json(r#"{ "sed": 5 }"#).is_err());
    let echoed = serde_json::to_string(&cfg).unwrap();
    assert_eq!(ExperimentConfig::from_json(&echoed).unwrap(), cfg);
    let shipped = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/quick.json");
    assert!(ExperimentConfig::load(&shipped).is_ok());
}

#[test]
fn attachment_names_follow_the_report() {
    assert_eq!(attachment_path(Path::new("out/r.json"), "walk-n4.csv"), Path::new("out/r.walk-n4.csv"));
    assert_eq!(attachment_path(Path::new("r"), "walk-n4.csv"), Path::new("r.walk-n4.csv"));
}
