use std::path::Path;
use std::process::{Command, Output};

use qnl_core::PiecewiseFunction;

fn qnl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qnl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn norm_of_characteristic_function() {
    let o = qnl(&["norm", "--space", "weak-lp:2", "--function", "char(0,1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1.00000000000\n");
}

#[test]
fn norm_of_f1_is_one() {
    let o = qnl(&["norm", "--space", "weak-lp:2", "--function", "powerleft(1,0.5) on (0,1)"]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 1.0).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    let divergent = qnl(&["norm", "--space", "lp:2", "--function", "powerleft(1,0.5) on (0,1)"]);
    assert_eq!(divergent.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&divergent.stderr).contains("divergent"));
    assert_eq!(qnl(&["norm", "--space", "lp:2", "--function", "char(1,0)"]).status.code(), Some(2));
    assert_eq!(qnl(&["norm", "--space", "nope:2", "--function", "char(0,1)"]).status.code(), Some(2));
    assert_eq!(qnl(&["norm", "--space", "lp:2"]).status.code(), Some(2));
    assert_eq!(qnl(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn indices_of_powers() {
    let o = stdout(&qnl(&["indices", "--phi", "power:2"]));
    assert_eq!(o.matches("0.707106781187").count(), 2, "{o}");
    let o = stdout(&qnl(&["indices", "--phi", "power:4", "--format", "json"]));
    let j: serde_json::Value = serde_json::from_str(&o).unwrap();
    let want = 2f64.powf(-0.25);
    assert!((j["indices"]["alpha_bar"].as_f64().unwrap() - want).abs() < 1e-12);
    assert!((j["indices"]["beta_bar"].as_f64().unwrap() - want).abs() < 1e-12);
}

fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["p", "lambda", "mu", "constant_id", "estimate", "paper_lower", "paper_upper", "consistent"]
    );
    r.records().map(|x| x.unwrap()).collect()
}

#[test]
fn sweep_nj_recovers_classical_values() {
    let o = qnl(&["sweep", "--constant", "nj", "--space", "lp", "--p", "1.5,2,3,4", "--budget", "2000"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 4);
    for r in rows {
        let p: f64 = r[0].parse().unwrap();
        let v: f64 = r[4].parse().unwrap();
        let cap = 2f64.powf(2.0 / p - 1.0).max(2f64.powf(1.0 - 2.0 / p));
        assert!(v >= cap - 0.05 && v <= cap + 1e-9, "p={p}: {v}");
    }
}

#[test]
fn sweep_cp1_lower_bound_and_inconsistency() {
    let o = qnl(&[
        "sweep",
        "--constant",
        "c1",
        "--space",
        "weak-lp",
        "--p",
        "2,4",
        "--lambda",
        "1,8",
        "--mu",
        "1,8",
        "--budget",
        "50",
    ]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 8);
    for r in &rows {
        let (p, l, m) = (r[0].parse::<f64>().unwrap(), &r[1], &r[2]);
        if l == "1" && m == "1" {
            let lower: f64 = r[5].parse().unwrap();
            assert!((lower - 2f64.powf(1.0 / p)).abs() < 1e-12);
        }
        if p == 2.0 && l == "8" && m == "8" {
            assert_eq!(&r[7], "false");
        }
    }
}

#[test]
fn estimate_json_and_witness_round_trip() {
    let o =
        qnl(&["estimate", "--constant", "c1", "--space", "weak-lp:3", "--lambda", "1", "--mu", "2", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["constant", "space", "lambda", "mu", "value", "witness", "bounds", "consistent", "seed"] {
        assert!(j.get(key).is_some(), "missing {key}");
    }
    for side in ["f", "g"] {
        let text = j["witness"][side].as_str().unwrap();
        let f: PiecewiseFunction = text.parse().unwrap();
        assert_eq!(f.to_string(), text);
        let again: PiecewiseFunction = f.to_string().parse().unwrap();
        assert_eq!(again, f);
    }
}

#[test]
fn sweep_is_byte_stable_across_threads() {
    let args = [
        "sweep",
        "--constant",
        "lyj",
        "--space",
        "weak-lp",
        "--p",
        "2,3",
        "--lambda",
        "1,2",
        "--budget",
        "300",
        "--seed",
        "7",
    ];
    let a = qnl(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_qnl")).args(args).env("QNL_THREADS", "1").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_thread_count_is_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_qnl"))
        .args(["indices", "--phi", "power:2"])
        .env("QNL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

fn small_audit_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("run.toml");
    std::fs::write(
        &path,
        r#"
[audit.config]
ps = [2.0]
skews = [[1.0, 1.0], [8.0, 8.0]]
phis = []
pexps = [3.0]
samples = 10
"#,
    )
    .unwrap();
    path
}

#[test]
fn audit_from_config_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_audit_config(dir.path());
    let out = dir.path().join("report.json");
    let o = qnl(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "audit"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let j: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let items = j["items"].as_array().unwrap();
    assert!(items.iter().any(|i| i["claim_id"] == "cp.c1-bounds[p=2,lambda=8,mu=8]" && i["verdict"] == "inconsistent"));
    assert_eq!(j["summary"]["total"].as_u64().unwrap() as usize, items.len());
}

#[test]
fn audit_table_and_csv_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_audit_config(dir.path());
    let run = |fmt: &str| stdout(&qnl(&["--config", cfg.to_str().unwrap(), "--format", fmt, "audit", "--seed", "3"]));
    let table = run("table");
    assert!(table.starts_with("claim_id"));
    assert!(table.contains("cp.h1-norm[p=2,lambda=1,mu=1]"));
    assert_eq!(run("csv"), run("csv"));
}

#[test]
fn audit_slow_oracle_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_audit_config(dir.path());
    let o = qnl(&["--config", cfg.to_str().unwrap(), "--format", "json", "audit", "--slow-oracle"]);
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mut seen = 0;
    for it in j["items"].as_array().unwrap() {
        if let Some(d) = it["oracle_rel_diff"].as_f64() {
            assert!(d <= 1e-4, "{}: {d}", it["claim_id"]);
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "[estimate]\nlamda = 2.0\n").unwrap();
    let o = qnl(&["--config", path.to_str().unwrap(), "estimate", "--constant", "c1", "--space", "weak-lp:2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_supplies_norm_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n.toml");
    std::fs::write(&path, "[norm]\nspace = \"weak-lp:2\"\nfunction = \"char(0,4)\"\n").unwrap();
    let o = qnl(&["--config", path.to_str().unwrap(), "norm"]);
    assert_eq!(stdout(&o), "2.00000000000\n");
}
