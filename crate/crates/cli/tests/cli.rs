use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbench")).args(args).output().expect("spawn qbench")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn built_circuit_round_trips_through_stats() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("ghz5.txt");
    assert!(qbench(&["build", "ghz", "5", "--out", path(&file)]).status.success());
    let o = qbench(&["stats", path(&file)]);
    assert!(o.status.success());
    let stats: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(stats["depth"], 6);
    assert_eq!(stats["width"], 10);
    assert_eq!(stats["gates"], 5);
}

#[test]
fn transpile_writes_parseable_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = qbench(&["transpile", "qft:4", "--verify", "--seed", "3", "--out", path(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("\"equivalent\": true"));
    let text = fs::read_to_string(dir.path().join("circuit.txt")).unwrap();
    assert!(text.starts_with("qubits 127 clbits 4"));
    let o = qbench(&["stats", path(&dir.path().join("circuit.txt"))]);
    let stats: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(stats["width"], 131);
    let layout: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("layout.json")).unwrap()).unwrap();
    assert_eq!(layout["initial"].as_object().unwrap().len(), 4);
}

#[test]
fn sample_then_compare() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    assert!(qbench(&["sample", "w:4", "--ideal", "--shots", "2000", "--out", path(&a)]).status.success());
    assert!(qbench(&["sample", "w:4", "--shots", "2000", "--seed", "1", "--out", path(&b)]).status.success());
    let o = qbench(&["compare", path(&a), path(&b)]);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let tvd = r["tvd"].as_f64().unwrap();
    assert!(tvd > 0.0 && tvd < 0.5, "{tvd}");
}

#[test]
fn sweep_success_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = qbench(&[
        "sweep",
        "--families",
        "ghz,w",
        "--n-min",
        "4",
        "--n-max",
        "5",
        "--shots",
        "512",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "sweep.csv",
        "sweep.json",
        "metrics_plot.svg",
        "metrics_plot.csv",
        "gate_breakdown.csv",
        "gate_breakdown.svg",
        "tables.csv",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    assert_eq!(fs::read_to_string(dir.path().join("sweep.csv")).unwrap().lines().count(), 5);
}

#[test]
fn sweep_with_unplaceable_rows_exits_partial() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("line5.json");
    fs::write(
        &target,
        r#"{"n": 5, "edges": [[0,1],[1,2],[2,3],[3,4]], "basis": ["ECR","ID","RZ","SX","X"],
            "durations_ns": {"ECR": 500, "ID": 35, "MEASURE": 800, "RZ": 0, "SX": 35, "X": 35}}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = qbench(&[
        "sweep",
        "--families",
        "ghz",
        "--n-min",
        "4",
        "--n-max",
        "6",
        "--shots",
        "64",
        "--target",
        path(&target),
        "--out",
        path(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n=6"));
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let noise = dir.path().join("noise.json");
    fs::write(&noise, r#"{"p1": 0.1, "p2": 1.5, "p_readout": 0.0, "seed": 0}"#).unwrap();
    let out = dir.path().join("o");
    for args in [
        vec!["sweep", "--noise", path(&noise), "--out", path(&out)],
        vec!["sweep", "--shots", "0", "--out", path(&out)],
        vec!["sweep", "--n-min", "1", "--families", "ghz", "--out", path(&out)],
        vec!["stats", "missing-file.txt"],
        vec!["transpile", "ghz:4", "--target", "heavy-hex:0"],
        vec!["build", "ghz", "1"],
        vec!["cost", "--n-min", "0"],
        vec!["frobnicate"],
    ] {
        assert_eq!(qbench(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn resource_tables() {
    let o = qbench(&["mem"]);
    let text = stdout(&o);
    assert!(text.contains("30,17179869184,16 GB"));
    assert!(text.contains("37,2199023255552,2048 GB"));
    let o = qbench(&["cost", "--n-min", "20", "--n-max", "20"]);
    assert!(stdout(&o).contains("20,1048576,20971520,16777216,20,220"));
}
