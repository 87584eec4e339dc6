use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn s6v(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_s6v")).args(args).current_dir(dir).env_remove("S6V_WORKERS").output().unwrap()
}

fn json_file(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn error_object(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stderr).unwrap()
}

#[test]
fn verify_default_grid_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = s6v(&["verify", "--n", "3", "--grid", "default", "--out", "report.json"], dir.path());
    assert!(out.status.success());
    let doc = json_file(&dir.path().join("report.json"));
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["provenance"]["config"]["colors"], 3);
    let names: Vec<&str> = doc["reports"].as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    for prefix in ["stochastic", "color ignorance", "mod-2 erasure", "modified min", "hammersley equivalence"] {
        assert!(names.iter().any(|n| n.starts_with(prefix)), "missing {prefix}");
    }
}

#[test]
fn verify_reports_resource_limits_per_verifier() {
    let dir = tempfile::tempdir().unwrap();
    let out = s6v(&["verify", "--n", "5", "--out", "report.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let doc = json_file(&dir.path().join("report.json"));
    assert_eq!(doc["passed"], false);
    let reports = doc["reports"].as_array().unwrap();
    let limited: Vec<_> = reports.iter().filter(|r| r["error"]["kind"] == "resource").collect();
    assert!(!limited.is_empty());
    assert!(limited.iter().all(|r| r["name"].as_str().unwrap().contains("n=5")));
    // smaller color counts still ran and passed
    assert!(reports.iter().any(|r| r["name"] == "stochastic n=4" && r["violation_count"] == 0));
}

#[test]
fn converge_meets_reference() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "converge", "--b1", "0.2", "--b2", "0.6", "--dir", "1/1", "--sizes", "500,1000,2000", "--replicas", "8", "--seed", "7",
        "--csv", "conv.csv", "--out", "conv.json",
    ];
    let out = s6v(&args, dir.path());
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("conv.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Value = serde_json::from_str(lines.next().unwrap().strip_prefix("# ").unwrap()).unwrap();
    assert_eq!(header["config"]["seed"], 7);
    assert_eq!(lines.next().unwrap(), "size,replica,ratio,reference,abs_error");
    let worst = lines
        .map(|l| l.split(',').collect::<Vec<_>>())
        .filter(|f| f[0] == "2000")
        .map(|f| f[4].parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(worst <= 0.02, "max error {worst}");
    let doc = json_file(&dir.path().join("conv.json"));
    assert_eq!(doc["report"]["rows"].as_array().unwrap().len(), 24);
}

#[test]
fn tolerance_failure_sets_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["converge", "--b1", "0.2", "--b2", "0.6", "--dir", "1,1", "--sizes", "10", "--replicas", "2", "--seed", "1", "--tolerance", "0"];
    let out = s6v(&args, dir.path());
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["passed"], false);
}

#[test]
fn sample_is_deterministic_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sample", "--model", "cs6v", "--b1", "0", "--b2", "0.75", "--w", "8", "--h", "8", "--seed", "1", "--svg", "out.svg", "--out", "out.bin"];
    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    let mut runs = Vec::new();
    for workers in ["1", "4", "8"] {
        let mut full = vec!["--workers", workers];
        full.extend(args);
        assert!(s6v(&full, dir.path()).status.success());
        runs.push((read("out.svg"), read("out.bin")));
    }
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    let svg = String::from_utf8(runs[0].0.clone()).unwrap();
    assert!(svg.starts_with("<!-- {"));
    assert!(svg.contains("<svg"));
    let (e, prov) = s6v_core::lattice::export::from_binary(&runs[0].1).unwrap();
    assert_eq!((e.width(), e.height()), (8, 8));
    let prov: Value = serde_json::from_str(&prov).unwrap();
    assert_eq!(prov["version"], s6v_core::VERSION);
    assert_eq!(prov["config"]["model"], "cs6v");
}

#[test]
fn embedded_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sample", "--model", "colored-cs6v", "--b1", "0.3", "--b2", "0.6", "--dir", "2,1", "--blocks", "3", "--seed", "5", "--out", "a.bin"];
    assert!(s6v(&args, dir.path()).status.success());
    let first = std::fs::read(dir.path().join("a.bin")).unwrap();
    let (e, prov) = s6v_core::lattice::export::from_binary(&first).unwrap();
    assert_eq!(e.n_colors(), 3);
    let config = serde_json::from_str::<Value>(&prov).unwrap()["config"].clone();
    std::fs::write(dir.path().join("config.json"), config.to_string()).unwrap();
    std::fs::remove_file(dir.path().join("a.bin")).unwrap();
    assert!(s6v(&["run", "--config", "config.json"], dir.path()).status.success());
    assert_eq!(std::fs::read(dir.path().join("a.bin")).unwrap(), first);
}

#[test]
fn workers_env_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_s6v"))
        .args(["export-golden"])
        .env("S6V_WORKERS", "many")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(error_object(&out)["kind"], "config");
}

#[test]
fn invalid_configs_give_error_objects() {
    let dir = tempfile::tempdir().unwrap();
    let missing_seed = s6v(&["converge", "--b1", "0.2", "--b2", "0.6", "--dir", "1,1", "--sizes", "10", "--replicas", "2"], dir.path());
    let obj = error_object(&missing_seed);
    assert_eq!(obj["kind"], "config");
    assert!(obj["message"].as_str().unwrap().contains("seed"));

    let bad_b1 = s6v(&["sample", "--b1", "1.5", "--b2", "0.5", "--w", "3", "--h", "3", "--seed", "1"], dir.path());
    assert_eq!(error_object(&bad_b1)["kind"], "config");

    let bad_dir = s6v(&["sample", "--model", "colored-cs6v", "--b1", "0.5", "--b2", "0.5", "--dir", "0,1", "--blocks", "2", "--seed", "1"], dir.path());
    assert_eq!(error_object(&bad_dir)["kind"], "config");

    let no_dir = s6v(&["verify", "--out", "missing/report.json"], dir.path());
    assert_eq!(error_object(&no_dir)["kind"], "config");

    std::fs::write(dir.path().join("c.json"), r#"{"command": "verify", "colours": 2}"#).unwrap();
    let unknown = s6v(&["run", "--config", "c.json"], dir.path());
    assert_eq!(error_object(&unknown)["kind"], "config");

    let usage = s6v(&["converge", "--sizes", "ten"], dir.path());
    assert_eq!(error_object(&usage)["kind"], "usage");
}

#[test]
fn flags_and_config_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = s6v(
        &["--print-config", "hammersley", "--p", "0.25", "--dir", "1/2", "--sizes", "10,20", "--replicas", "3", "--seed", "9"],
        dir.path(),
    );
    assert!(out.status.success());
    let printed = String::from_utf8(out.stdout).unwrap();
    std::fs::write(dir.path().join("h.json"), &printed).unwrap();
    let again = s6v(&["--print-config", "run", "--config", "h.json"], dir.path());
    assert_eq!(String::from_utf8(again.stdout).unwrap(), printed);
    let doc: Value = serde_json::from_str(&printed).unwrap();
    assert_eq!(doc["direction"], "1,2");
    assert_eq!(doc["sizes"], serde_json::json!([10, 20]));
}

#[test]
fn hammersley_runs_exact_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = s6v(&["hammersley", "--p", "0.5", "--dir", "1,1", "--sizes", "50", "--replicas", "2", "--seed", "2", "--exact-max", "2"], dir.path());
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["checks"].as_array().unwrap().len(), 4);
    assert_eq!(doc["report"]["experiment"], "hammersley");
}

#[test]
fn golden_export_matches_library_table() {
    let dir = tempfile::tempdir().unwrap();
    assert!(s6v(&["export-golden", "--out", "golden.txt"], dir.path()).status.success());
    let text = std::fs::read_to_string(dir.path().join("golden.txt")).unwrap();
    let (header, table) = text.split_once('\n').unwrap();
    assert!(header.starts_with("# {"));
    let expected = s6v_core::lmatrix::render_golden_table(&s6v_core::lmatrix::l2_golden_table());
    assert_eq!(table, expected);
    assert_eq!(table.lines().count(), 32);
}
