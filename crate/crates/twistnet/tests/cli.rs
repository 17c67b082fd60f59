//! The `twistnet` binary end to end.

use std::path::PathBuf;
use std::process::{Command, Output};
use twistnet::Tensor;

fn twistnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistnet")).args(args).env_remove("TWISTNET_OUT").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn config(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name).display().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("twistnet-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn explain_known_and_unknown() {
    let o = twistnet(&["explain", "fusion-pp"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("claim:"));
    let o = twistnet(&["explain", "no-such-check"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-such-check"));
}

#[test]
fn run_suite_writes_report_and_dump() {
    let dir = scratch("run");
    let report = dir.join("anyons.json");
    let o = twistnet(&["run", "anyons", "--out", report.to_str().unwrap(), "--dump", dir.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let records = v["checks"].as_array().unwrap();
    assert!(!records.is_empty());
    assert!(records.iter().all(|r| r["status"] == "pass"), "{v}");
    let t = Tensor::parse_dump(&std::fs::read_to_string(dir.join("toric_site.tensor")).unwrap()).unwrap();
    assert_eq!(t.labels().len(), 8);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn bad_suite_and_tolerance_are_errors() {
    assert_eq!(twistnet(&["run", "everything"]).status.code(), Some(2));
    assert_eq!(twistnet(&["run", "anyons", "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn failing_check_exits_one() {
    // periodic D†D = 1 + Z..Z holds to ~1e-15, not to 1e-30
    let o = twistnet(&["walls", "verify", "--wall", "D", "--n", "4", "--closure", "periodic", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let o = twistnet(&["walls", "verify", "--wall", "D", "--n", "4", "--closure", "periodic"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn aps_and_fusion_tables() {
    let o = twistnet(&["aps", "enumerate", "--model", "zn:5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains('8'));
    let o = twistnet(&["twists", "fuse", "--model", "toric", "--pair", "pm"]);
    let s = stdout(&o);
    assert!(o.status.success() && s.contains('e') && s.contains('m'), "{s}");
}

#[test]
fn stabilizer_configs_verify_and_export() {
    let dir = scratch("stab");
    for f in ["toric_duality_twists.net", "color_swap_twists.net"] {
        let export = dir.join(format!("{f}.txt"));
        let o = twistnet(&["stabilizers", "verify", "--config", &config(f), "--export", export.to_str().unwrap()]);
        assert!(o.status.success(), "{f}: {}", stdout(&o));
        let text = std::fs::read_to_string(&export).unwrap();
        assert!(text.lines().any(|l| l.starts_with("at-twist")), "{text}");
    }
    std::fs::remove_dir_all(dir).unwrap();
}
