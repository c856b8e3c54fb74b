use std::process::Command;

fn gclosure() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gclosure"))
}

fn run_ok(args: &[&str]) -> String {
    let out = gclosure().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "expected success for {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn disc_algebra_symbolic_text() {
    let out = run_ok(&["--ring", "Z[a,b]", "--poly", "x^3+a*x+b", "disc-algebra"]);
    assert!(out.contains("quadratic: y^2-3*b*y+(a^3+9*b^2)"), "{out}");
    assert!(out.contains("disc: -4*a^3-27*b^2"), "{out}");
}

#[test]
fn enumerate_counts_with_zero_data_is_success() {
    let out = run_ok(&[
        "--ring",
        "GF(2)",
        "--poly",
        "x^2+x+1",
        "--group",
        "1",
        "enumerate",
    ]);
    assert!(out.contains("count: 0"), "{out}");
}

#[test]
fn d4_enumerate_count() {
    let out = run_ok(&[
        "--ring",
        "GF(7)",
        "--poly",
        "x^4+1",
        "--group",
        "D4",
        "enumerate",
    ]);
    assert!(out.contains("count: 3"), "{out}");
}

#[test]
fn nilpotent_closure_report() {
    let out = run_ok(&[
        "--ring",
        "Z/9",
        "--poly",
        "x^3",
        "--group",
        "A3",
        "--from-root",
        "3",
        "closure-algebra",
    ]);
    assert!(out.contains("faithful: false"), "{out}");
    assert!(out.contains("kernel_contains: 3"), "{out}");
}

#[test]
fn parse_errors_exit_2() {
    let out = gclosure()
        .args(["--ring", "GF(6)", "--poly", "x^2+1", "ferrand"])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(3),
        "GF(6) is a precondition failure"
    );
    let out = gclosure()
        .args(["--ring", "Z/(", "--poly", "x^2+1", "ferrand"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = gclosure()
        .args(["--ring", "GF(5)", "--poly", "x^2+%", "ferrand"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn guard_violations_exit_3() {
    let out = gclosure()
        .args([
            "--ring",
            "GF(2)",
            "--poly",
            "x^3+x+1",
            "--group",
            "S3",
            "--guard-n",
            "2",
            "closure-algebra",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("guard"), "{msg}");
}

#[test]
fn capability_errors_exit_3() {
    let out = gclosure()
        .args([
            "--ring",
            "Z[a]",
            "--poly",
            "x^2+a",
            "--group",
            "1",
            "enumerate",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn machine_output_is_deterministic_and_reparses() {
    let args = [
        "--ring",
        "GF(7)",
        "--poly",
        "x^3-x",
        "--group",
        "A3",
        "--format",
        "machine",
        "enumerate",
    ];
    let a: serde_json::Value = serde_json::from_str(&run_ok(&args)).unwrap();
    let b: serde_json::Value = serde_json::from_str(&run_ok(&args)).unwrap();
    assert_eq!(a["results"], b["results"]);
    assert_eq!(a["results"]["count"], serde_json::json!(2));
}

#[test]
fn datum_documents_round_trip_through_verify() {
    let out = run_ok(&[
        "--ring",
        "GF(2)",
        "--poly",
        "x^3+x+1",
        "--group",
        "A3",
        "--from-root",
        "0",
        "--format",
        "machine",
        "from-root",
    ]);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    let datum = &report["results"]["datum"];
    let dir = std::env::temp_dir().join(format!("gclosure-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("datum.json");
    std::fs::write(&path, serde_json::to_string(datum).unwrap()).unwrap();
    let out = run_ok(&[
        "--ring",
        "GF(2)",
        "--poly",
        "x^3+x+1",
        "--datum-file",
        path.to_str().unwrap(),
        "verify",
    ]);
    assert!(out.contains("verified: true"), "{out}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn shipped_corpus_passes() {
    let corpus = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../corpus/paper-examples.json"
    );
    let out = gclosure()
        .args(["suite", corpus, "--jobs", "4"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("passed"), "{text}");
}

#[test]
fn empty_corpus_is_success() {
    let dir = std::env::temp_dir().join(format!("gclosure-empty-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("empty.json");
    std::fs::write(&path, "[]").unwrap();
    let out = gclosure()
        .args(["suite", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn wrong_expectation_fails_with_exit_5() {
    let dir = std::env::temp_dir().join(format!("gclosure-wrong-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("wrong.json");
    std::fs::write(
        &path,
        r#"[
            {"id": "good", "command": "enumerate", "ring": "GF(2)",
             "poly": "x^3+x+1", "group": "A3", "expect": {"count": 2}},
            {"id": "bad", "command": "enumerate", "ring": "GF(2)",
             "poly": "x^3+x+1", "group": "A3", "expect": {"count": 5}}
        ]"#,
    )
    .unwrap();
    let out = gclosure()
        .args(["suite", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(
        text.contains("1/2 passed") || text.contains("suite: 1/2"),
        "{text}"
    );
    assert!(text.contains("MISMATCH bad"), "{text}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn ferrand_table_prints_rows() {
    let out = run_ok(&["--ring", "GF(3)", "--trivial", "2", "ferrand"]);
    assert!(out.contains("orbit_count: 3"), "{out}");
}

#[test]
fn sqrt_disc_over_gf7() {
    let out = run_ok(&["--ring", "GF(7)", "--poly", "x^3-x", "sqrt-disc"]);
    assert!(out.contains("disc: 4"), "{out}");
    assert!(out.contains("count: 2"), "{out}");
}
