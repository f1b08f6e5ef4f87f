use std::process::{Command, Output};

fn conjlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conjlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn analyze_prints_invariants() {
    let out = conjlab(&["analyze", "alternating:5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("class sizes: {1,12,15,20}"), "{text}");
    assert!(text.contains("gamma components: 3"), "{text}");

    let out = conjlab(&["analyze", "direct:frobenius:5,4+heisenberg:3", "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["order"], 540);
    assert_eq!(value["factorizations"][0]["n"], 3);
    assert_eq!(
        value["factorizations"][0]["omega"],
        serde_json::json!([1, 4, 5])
    );
}

#[test]
fn analyze_abelian_group() {
    let out = conjlab(&["analyze", "cyclic:6", "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["class_sizes"]["sizes"], serde_json::json!([1]));
    assert_eq!(value["gamma_components"], serde_json::json!([]));
}

#[test]
fn verify_exit_codes() {
    let out = conjlab(&["verify", "direct:frobenius:5,4+heisenberg:3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"], "VerifiedDecomposition");
    assert_eq!(report["decompositions"][0]["a"]["order"], 20);

    let out = conjlab(&["verify", "symmetric:4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict: HypothesisNotMet"));

    assert_eq!(conjlab(&["verify", "frobenius:5,3"]).status.code(), Some(2));
    assert_eq!(conjlab(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(
        conjlab(&[
            "verify",
            "direct:frobenius:5,4+heisenberg:3",
            "--budget",
            "2"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        conjlab(&["verify", "symmetric:8", "--cap", "1000"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_conjlab"))
        .args(["analyze", "symmetric:5"])
        .env("CONJLAB_CAP", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = conjlab(&["verify", "frobenius:7,3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["group_order"], 21);
    assert_eq!(report["timings"], serde_json::json!({}));
}

#[test]
fn verify_reads_grp_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s3.grp");
    std::fs::write(
        &path,
        "# symmetric group on three points\ndegree 3\nname s3\n(0 1)\n(0 1 2)\n",
    )
    .unwrap();
    let out = conjlab(&["analyze", path.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("order: 6"));
}

#[test]
fn scan_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    std::fs::create_dir(&corpus).unwrap();
    std::fs::write(corpus.join("a.grp"), "degree 4\nname c4\n(0 1 2 3)\n").unwrap();
    std::fs::write(
        corpus.join("b.grp"),
        "degree 4\nname s4\n(0 1)\n(0 1 2 3)\n",
    )
    .unwrap();
    std::fs::write(corpus.join("notes.txt"), "ignored").unwrap();
    let mut outputs = Vec::new();
    for jobs in ["1", "3"] {
        let path = dir.path().join(format!("scan-{jobs}.jsonl"));
        let out = conjlab(&[
            "scan",
            "--corpus",
            corpus.to_str().unwrap(),
            "--out",
            path.to_str().unwrap(),
            "--jobs",
            jobs,
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        outputs.push(std::fs::read_to_string(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0].lines().count(), 2);
}

#[test]
fn scan_rejects_unwritable_output() {
    let out = conjlab(&["scan", "--out", "/nonexistent-dir/scan.jsonl"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gamma_components_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let out = conjlab(&["gamma", "--set", "3,6,8", "--dot", dot.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("components: 2"));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph gamma {"));
    assert!(text.contains("3 -> 6;"));

    assert!(stdout(&conjlab(&["gamma", "--set", "12,15,20"])).starts_with("components: 3"));
    assert!(stdout(&conjlab(&["gamma", "--set", "2,4,8"])).starts_with("components: 1"));
    assert_eq!(conjlab(&["gamma", "--set", "2,x"]).status.code(), Some(2));
    assert_eq!(conjlab(&["gamma", "--set", "0,2"]).status.code(), Some(2));
}
