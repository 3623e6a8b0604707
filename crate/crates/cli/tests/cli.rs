use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(name)
}

fn entflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entflow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn flow_writes_every_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let input = data("karate.edges");
    let out = entflow(&[
        "flow",
        "--input",
        input.to_str().unwrap(),
        "--alpha",
        "0.5",
        "--steps",
        "30",
        "--step-size",
        "0.1",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 1 + 31 * 78);
    let summary = stdout_json(&out);
    assert_eq!(summary["verdict"]["kind"], "diverging");
    assert!(summary["flow_seconds"].as_f64().unwrap() >= 0.0);
    for name in ["hist_entropy.csv", "hist_weight.csv"] {
        assert!(dir.path().join(name).exists());
    }
}

#[test]
fn zero_steps_keeps_initial_weights() {
    let dir = tempfile::tempdir().unwrap();
    let input = data("bridged_triangles.edges");
    let out = entflow(&[
        "flow",
        "--input",
        input.to_str().unwrap(),
        "--steps",
        "0",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 1 + 7);
    assert!(trace.lines().skip(1).all(|l| l.ends_with(',')));
    assert!(stdout_json(&out)["verdict"].is_null());
}

#[test]
fn bad_alpha_is_a_usage_error() {
    let input = data("bridged_triangles.edges");
    let out = entflow(&["flow", "--input", input.to_str().unwrap(), "--alpha", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha must lie in (0,1)"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(entflow(&["flow", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        entflow(&["flow", "--input", "/nonexistent/graph.edges"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn overflow_exits_with_numerical_abort() {
    let input = data("bridged_triangles.edges");
    let out = entflow(&[
        "flow",
        "--input",
        input.to_str().unwrap(),
        "--alpha",
        "1e-300",
        "--step-size",
        "1e308",
        "--steps",
        "5",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn detect_splits_example_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = data("bridged_triangles.edges");
    let out = entflow(&[
        "detect",
        "--input",
        input.to_str().unwrap(),
        "--steps",
        "10",
        "--step-size",
        "0.1",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    let sweep = &report["sweep"];
    let best = &sweep["entries"][sweep["best_by_modularity"].as_u64().unwrap() as usize];
    assert_eq!(best["num_communities"], 2);
    assert_eq!(best["modularity"], 0.5);
    // no ground truth: modularity only
    assert!(best.get("ari").is_none() && best.get("nmi").is_none());
    assert!(sweep.get("best_by_ari").is_none());
}

#[test]
fn detect_karate_with_labels() {
    let dir = tempfile::tempdir().unwrap();
    let (edges, labels) = (data("karate.edges"), data("karate.labels"));
    let out = entflow(&[
        "detect",
        "--input",
        edges.to_str().unwrap(),
        "--labels",
        labels.to_str().unwrap(),
        "--steps",
        "30",
        "--step-size",
        "0.1",
        "--each-step",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(
        text.contains("best ari") && text.contains("best nmi") && text.contains("best modularity")
    );
    let iterations = std::fs::read_to_string(dir.path().join("iterations.csv")).unwrap();
    assert_eq!(iterations.lines().count(), 1 + 31);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let input = data("karate.edges");
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let out = entflow(&[
            "detect",
            "--input",
            input.to_str().unwrap(),
            "--threads",
            "3",
            "--out-dir",
            dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
        [
            "trace.csv",
            "report.json",
            "hist_entropy.csv",
            "hist_weight.csv",
        ]
        .map(|f| std::fs::read(dir.path().join(f)).unwrap())
    };
    assert_eq!(run(), run());
}

#[test]
fn entropy_dumps_walks() {
    let dir = tempfile::tempdir().unwrap();
    let input = data("bridged_triangles.edges");
    let out = entflow(&[
        "entropy",
        "--input",
        input.to_str().unwrap(),
        "--bins",
        "3",
        "--dump-walks",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let summary = stdout_json(&out);
    assert!((summary["max"].as_f64().unwrap() - 2.1863).abs() < 1e-3);
    let hist = std::fs::read_to_string(dir.path().join("hist_entropy.csv")).unwrap();
    let counts: Vec<&str> = hist
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(counts, ["6", "0", "1"]);
    let walks: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("walks.json")).unwrap())
            .unwrap();
    let x1 = walks
        .as_array()
        .unwrap()
        .iter()
        .find(|w| w["source"] == "x1")
        .unwrap();
    assert_eq!(x1["mass"]["x1"], 0.5);
}

#[test]
fn oracle_passes_and_catches_fault() {
    let out = entflow(&["oracle"]);
    assert!(out.status.success());
    assert!(stdout_json(&out)["max_deviation"].as_f64().unwrap() < 1e-9);
    let faulty = entflow(&["oracle", "--inject-fault"]);
    assert!(!faulty.status.success());
}

#[test]
fn metrics_on_label_files() {
    let labels = data("karate.labels");
    let out = entflow(&[
        "metrics",
        "--labels",
        labels.to_str().unwrap(),
        "--truth",
        labels.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["ari"], 1.0);
    assert_eq!(v["nmi"], 1.0);

    let edges = data("karate.edges");
    let out = entflow(&[
        "metrics",
        "--labels",
        labels.to_str().unwrap(),
        "--input",
        edges.to_str().unwrap(),
    ]);
    let q = stdout_json(&out)["modularity"].as_f64().unwrap();
    // 78 edges; the two clubs hold 35 + 32 internal edges and degrees 81 + 75
    let exact = (4.0 * 78.0 * 67.0 - (81.0_f64.powi(2) + 75.0_f64.powi(2))) / (4.0 * 78.0 * 78.0);
    assert!((q - exact).abs() < 1e-15, "{q} vs {exact}");
}

#[test]
fn metrics_mismatch_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.labels");
    let b = dir.path().join("b.labels");
    std::fs::write(&a, "1 0\n2 0\n3 1\n").unwrap();
    std::fs::write(&b, "1 0\n2 1\n").unwrap();
    let out = entflow(&[
        "metrics",
        "--labels",
        a.to_str().unwrap(),
        "--truth",
        b.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}
