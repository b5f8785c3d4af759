use std::process::{Command, Output};

fn supercalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supercalc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_passes_with_exit_zero() {
    let o = supercalc(&["verify", "constants", "--beta", "2", "--a", "2", "--c", "1", "--d", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["summary"]["fail"], 0);
    assert_eq!(v["checks"][0]["identity_id"], "constants");
}

#[test]
fn impossible_tolerance_exits_one() {
    let o = supercalc(&["verify", "ingham_siegel", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_id_exits_two_with_usage() {
    let o = supercalc(&["verify", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("unknown identity") && err.contains("Usage"), "{err}");
}

#[test]
fn invalid_spec_exits_two() {
    assert_eq!(supercalc(&["verify", "theorem1", "--beta", "3"]).status.code(), Some(2));
    assert_eq!(supercalc(&["verify", "theorem1", "--F", "sin"]).status.code(), Some(2));
    assert_eq!(supercalc(&["verify", "duality", "--beta", "x"]).status.code(), Some(2));
}

#[test]
fn empty_report_exits_two() {
    let o = supercalc(&["report"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no checks selected"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("supercalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# constants\nbeta = 4\na=3\nc=1\nd=2\n").unwrap();
    let o = supercalc(&["verify", "constants", "--config", cfg.to_str().unwrap(), "--a", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let spec = &v["checks"][0]["spec"];
    assert_eq!((spec["beta"].as_u64(), spec["a"].as_u64(), spec["d"].as_u64()), (Some(4), Some(2), Some(2)));

    std::fs::write(&cfg, "gamma=1\n").unwrap();
    assert_eq!(supercalc(&["verify", "constants", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn report_is_deterministic_and_csv_has_rows() {
    let args = ["report", "--criterion", "9", "--seed", "3"];
    let x = supercalc(&args);
    let y = supercalc(&args);
    assert_eq!(x.status.code(), Some(0));
    assert_eq!(x.stdout, y.stdout);
    let csv = supercalc(&["report", "--criterion", "2", "--format", "csv"]);
    let text = stdout(&csv);
    assert!(text.starts_with("identity_id,"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn out_file() {
    let path = std::env::temp_dir().join(format!("supercalc-out-{}.json", std::process::id()));
    let o = supercalc(&["verify", "calibration", "--beta", "1", "--a", "2", "--d", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["checks"][0]["runtime_ms"], 0);
    std::fs::remove_file(&path).unwrap();
}
