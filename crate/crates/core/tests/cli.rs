//! End-to-end checks of the command-line binary: exit codes, output
//! formats, and determinism.

use std::process::{Command, Output};

fn conn2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conn2"))
        .args(args)
        .output()
        .expect("spawn conn2")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn gen_writes_edge_list() {
    let out = conn2(&["gen", "--gen", "triangle_pendant:4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("4 4"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn run_bridges_finds_pendant_edge() {
    let out = conn2(&["run", "--algo", "bridges", "--gen", "triangle_pendant:4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "3 4");
}

#[test]
fn run_biconn_reports_two_color_classes_on_two_cycles() {
    let out = conn2(&["run", "--algo", "biconn", "--gen", "two_cycles:100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let colors: std::collections::BTreeSet<&str> = text
        .lines()
        .filter(|l| !l.starts_with("cut"))
        .map(|l| l.split_whitespace().nth(2).unwrap())
        .collect();
    assert_eq!(colors.len(), 2);
}

#[test]
fn verify_passes_on_gadgets() {
    for algo in ["bridges", "biconn", "dfs", "lca", "rmq", "components"] {
        let out = conn2(&["verify", "--algo", algo, "--gen", "wheel_apex:17"]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{algo}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        vec!["run", "--algo", "nonsense", "--gen", "path:5"],
        vec!["run", "--algo", "bridges"],
        vec!["run", "--algo", "bridges", "--gen", "path:5", "--delta", "1.5"],
        vec!["gen", "--gen", "pathological"],
        vec!["frobnicate"],
    ] {
        let out = conn2(&args);
        assert_eq!(out.status.code(), Some(1), "args {args:?}");
    }
    let help = conn2(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn missing_input_file_exits_4() {
    let out = conn2(&["run", "--algo", "bridges", "--input", "/no/such/file"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn same_seed_same_bytes() {
    let a = conn2(&["run", "--algo", "biconn", "--gen", "gnm40:30", "--seed", "9"]);
    let b = conn2(&["run", "--algo", "biconn", "--gen", "gnm40:30", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn metrics_record_is_json() {
    let dir = std::env::temp_dir().join(format!("conn2-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let metrics = dir.join("metrics.json");
    let out = conn2(&[
        "run",
        "--algo",
        "bridges",
        "--gen",
        "cycle:64",
        "--gamma",
        "1.0",
        "--metrics",
        metrics.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&metrics).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v["rounds"].as_u64().unwrap() > 0);
    assert!(v["peak_space_words"].as_u64().unwrap() > 0);
    assert!(v["charges"].is_array());
    assert_eq!(v["audit_failures"].as_u64(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bench_emits_scaling_rows() {
    let out = conn2(&["bench", "--algo", "components", "--gen", "cycle:0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "n diameter rounds peak_space");
    assert_eq!(rows.len(), 12); // header + k = 4..=14
    for row in &rows[1..] {
        assert_eq!(row.split_whitespace().count(), 4);
    }
}
