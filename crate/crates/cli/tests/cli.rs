use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fockpoisson"))
        .args(args)
        .env_remove("FOCKPOISSON_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn cfree_moment_rows() {
    let out = stdout(&[
        "moments", "--nmax", "7", "--engine", "all", "--s-one", "--t-zero", "--format", "plain",
    ]);
    let expected = "\
m_1 = l
m_2 = l^2 + l
m_3 = l^3 + 3*l^2 + l
m_4 = l^4 + 6*l^3 + 6*l^2 + l
m_5 = l^5 + 10*l^4 + 20*l^3 + 9*l^2 + l
m_6 = l^6 + 15*l^5 + 50*l^4 + 44*l^3 + 12*l^2 + l
m_7 = l^7 + 21*l^6 + 105*l^5 + 154*l^4 + 77*l^3 + 15*l^2 + l
ENGINES AGREE
";
    assert_eq!(out, expected);
}

#[test]
fn sequence_line() {
    assert_eq!(
        stdout(&["sequence", "--nmax", "10"]),
        "1 2 5 14 41 123 374 1147 3538 10958\n"
    );
}

#[test]
fn word_check() {
    let out = stdout(&["words", "--check", "CMCKAA"]);
    assert!(out.contains("admissible: yes"));
    assert!(out.contains("partition: [[1,2,6],[3,5],[4]]"));
    assert!(out.contains("weight: l^3*s^3\n"));
    let out = stdout(&["words", "--check", "CCCAMAA", "--degenerate", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc[0]["partition"], serde_json::json!([[1, 7], [2, 5, 6], [3, 4]]));
    assert_eq!(doc[0]["weight"], "l^3*s^3");
    let out = stdout(&["words", "--from-partition", "[[1,2,6],[3,5],[4]]"]);
    assert!(out.starts_with("word: CMCKAA\n"));
    assert!(stdout(&["words", "--check", "AC"]).contains("admissible: no"));
}

#[test]
fn exact_evaluation() {
    let out = stdout(&[
        "moments", "--nmax", "3", "--engine", "jacobi", "--lambda", "2", "--s", "1/2", "--t", "1/3",
    ]);
    assert_eq!(out, "m_1 = 2\nm_2 = 6\nm_3 = 20\n");
    let out = run(&["moments", "--nmax", "3", "--lambda", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn partition_counts_json() {
    let out = stdout(&[
        "partitions",
        "--n",
        "7",
        "--family",
        "nc12-inner",
        "--count",
        "--format",
        "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["by_blocks"], serde_json::json!([1, 15, 77, 154, 105, 21, 1]));
    assert_eq!(doc["total"], 374);
    assert_eq!(doc["family"], "nc12-inner");
}

#[test]
fn enumeration_cap() {
    let out = run(&["partitions", "--n", "15", "--count"]);
    assert_eq!(out.status.code(), Some(3));
    let with_cap = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_fockpoisson"))
            .args(["partitions", "--n", "6", "--count"])
            .env("FOCKPOISSON_MAX_N", cap)
            .output()
            .unwrap()
    };
    assert_eq!(with_cap("5").status.code(), Some(3));
    assert!(with_cap("6").status.success());
    assert_eq!(with_cap("six").status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["moments", "--s-one", "--s-zero"]).status.code(), Some(2));
    assert_eq!(run(&["words", "--check", "CXA"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn fock_report_and_matrix() {
    let out = stdout(&["fock", "--n", "6", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["relations"].as_array().unwrap().len(), 7);
    let out = stdout(&["fock", "--n", "3", "--matrix", "poisson"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["entries"][1][0], "l^(1/2)");
    assert_eq!(doc["entries"][0][0], "l");
}

#[test]
fn cauchy_grid() {
    let out = stdout(&["cauchy", "--steps", "3"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 10);
    for line in &lines[1..] {
        let diff: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(diff < 1e-9, "{line}");
    }
    let out = stdout(&["cauchy", "--steps", "2", "--s", "0.5", "--t", "0.5"]);
    assert!(out.starts_with("re_z,im_z,re_g_cf,im_g_cf\n"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["moments", "--nmax", "6", "--format", "json"][..],
        &["partitions", "--n", "6", "--family", "almost-interval"][..],
        &["cauchy", "--steps", "4", "--lambda", "2"][..],
        &["words", "--list", "4", "--cards"][..],
    ] {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
}
