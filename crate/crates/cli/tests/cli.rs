//! End-to-end tests against the built binary: golden stdout for every
//! subcommand, the exit-code contract, and report-file round trips.

use std::process::{Command, Output};

use fpc_core::check_point_capped;
use fpc_core::conjecture::SweepReport;

fn fpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn assert_exit(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        stdout_of(output),
        stderr_of(output)
    );
}

// ---------------------------------------------------------------------------
// partitions
// ---------------------------------------------------------------------------

#[test]
fn partitions_n3_golden() {
    let output = fpc(&["partitions", "--n", "3"]);
    assert_exit(&output, 0);
    assert_eq!(
        stdout_of(&output),
        "[0,0,0] {0,1,2}\n\
         [0,0,1] {0,1}|{2}\n\
         [0,1,0] {0,2}|{1}\n\
         [0,1,1] {0}|{1,2}\n\
         [0,1,2] {0}|{1}|{2}\n\
         5 partitions\n"
    );
}

#[test]
fn partitions_n1_golden() {
    let output = fpc(&["partitions", "--n", "1"]);
    assert_exit(&output, 0);
    assert_eq!(stdout_of(&output), "[0] {0}\n1 partitions\n");
}

#[test]
fn partitions_rejects_bad_sizes() {
    let output = fpc(&["partitions", "--n", "0"]);
    assert_exit(&output, 2);
    let output = fpc(&["partitions", "--n", "20"]);
    assert_exit(&output, 5);
    assert!(stderr_of(&output).contains("ceiling"));
}

// ---------------------------------------------------------------------------
// recurrent
// ---------------------------------------------------------------------------

#[test]
fn recurrent_golden_cases() {
    let output = fpc(&[
        "recurrent",
        "--map",
        "[0,1,2]",
        "--point",
        "1",
        "--partition",
        "{0,1}|{2}",
    ]);
    assert_exit(&output, 0);
    assert_eq!(stdout_of(&output), "{0,1}\n");

    let output = fpc(&[
        "recurrent",
        "--map",
        "[0,0,0]",
        "--point",
        "2",
        "--partition",
        "{0,1}|{2}",
    ]);
    assert_exit(&output, 0);
    assert_eq!(stdout_of(&output), "{0,1}\n");

    let output = fpc(&[
        "recurrent",
        "--map",
        "[1,2,1]",
        "--point",
        "0",
        "--partition",
        "{0,1}|{2}",
    ]);
    assert_exit(&output, 0);
    assert_eq!(stdout_of(&output), "{0,1}\n{2}\n");
}

#[test]
fn error_classes_map_to_distinct_exit_codes() {
    // Parse error, with a byte position in the message.
    let output = fpc(&[
        "recurrent",
        "--map",
        "[1,x]",
        "--point",
        "0",
        "--partition",
        "{0,1}",
    ]);
    assert_exit(&output, 3);
    assert!(stderr_of(&output).contains("byte 3"));

    // Dimension mismatch.
    let output = fpc(&[
        "recurrent",
        "--map",
        "[1,2,1]",
        "--point",
        "0",
        "--partition",
        "{0,1}",
    ]);
    assert_exit(&output, 4);

    // Other domain errors.
    let output = fpc(&[
        "recurrent",
        "--map",
        "[1,2,1]",
        "--point",
        "9",
        "--partition",
        "{0,1}|{2}",
    ]);
    assert_exit(&output, 7);

    // Usage errors from the argument parser.
    let output = fpc(&["recurrent", "--map", "[0,1]"]);
    assert_exit(&output, 2);
    let output = fpc(&[
        "limit",
        "--map",
        "[0,1]",
        "--point",
        "0",
        "--semantics",
        "both",
    ]);
    assert_exit(&output, 2);

    // Missing family file.
    let output = fpc(&[
        "limit",
        "--map",
        "[0,1]",
        "--point",
        "0",
        "--semantics",
        "standard",
        "--family",
        "file:/nonexistent/members.txt",
    ]);
    assert_exit(&output, 6);
}

// ---------------------------------------------------------------------------
// limit
// ---------------------------------------------------------------------------

#[test]
fn limit_identity_golden() {
    let output = fpc(&[
        "limit",
        "--map",
        "[0,1,2]",
        "--point",
        "0",
        "--semantics",
        "standard",
        "--family",
        "full",
    ]);
    assert_exit(&output, 0);
    assert_eq!(
        stdout_of(&output),
        "thread 1: [0,0,0]->{0,1,2} [0,0,1]->{0,1} [0,1,0]->{0,2} [0,1,1]->{0} [0,1,2]->{0}\n\
         1 thread\n"
    );
}

#[test]
fn limit_constant_point_supported_is_void() {
    let output = fpc(&[
        "limit",
        "--map",
        "[0,0,0]",
        "--point",
        "1",
        "--semantics",
        "point-supported",
        "--family",
        "full",
    ]);
    assert_exit(&output, 0);
    assert_eq!(stdout_of(&output), "0 threads\n");
}

#[test]
fn limit_two_cycle_standard_golden() {
    let output = fpc(&[
        "limit",
        "--map",
        "[1,2,1]",
        "--point",
        "0",
        "--semantics",
        "standard",
        "--family",
        "full",
    ]);
    assert_exit(&output, 0);
    assert_eq!(
        stdout_of(&output),
        "thread 1: [0,0,0]->{0,1,2} [0,0,1]->{0,1} [0,1,0]->{1} [0,1,1]->{1,2} [0,1,2]->{1}\n\
         thread 2: [0,0,0]->{0,1,2} [0,0,1]->{2} [0,1,0]->{0,2} [0,1,1]->{1,2} [0,1,2]->{2}\n\
         2 threads\n"
    );
}

#[test]
fn limit_cap_flags_truncation() {
    let output = fpc(&[
        "limit",
        "--map",
        "[1,2,1]",
        "--point",
        "0",
        "--semantics",
        "standard",
        "--family",
        "full",
        "--cap",
        "1",
    ]);
    assert_exit(&output, 0);
    let stdout = stdout_of(&output);
    assert!(stdout.ends_with("1 thread (truncated by cap)\n"));
}

#[test]
fn limit_explain_documents_the_system() {
    let output = fpc(&[
        "limit",
        "--map",
        "[1,2,1]",
        "--point",
        "0",
        "--semantics",
        "standard",
        "--family",
        "full",
        "--explain",
    ]);
    assert_exit(&output, 0);
    let stdout = stdout_of(&output);
    assert!(
        stdout.contains("explain: orbit of 0 under [1,2,1]: tail [0] cycle [1,2] periodic false")
    );
    assert!(stdout.contains("explain: family has 5 members (full lattice)"));
    assert!(stdout.contains("explain: node [0,0,1]: {0,1} {2}"));
    assert!(stdout.contains("explain: edge [0,1,2] => [0,0,1]: {1}->{0,1} {2}->{2}"));
    assert!(stdout.contains("explain: thread 1 verified"));
    assert!(stdout.contains("explain: thread 2 verified"));
    assert!(stdout.ends_with("2 threads\n"));
}

#[test]
fn limit_with_family_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("members.txt");
    std::fs::write(&path, "{0,1,2}\n\n{0,1}|{2}\n").unwrap();
    let family = format!("file:{}", path.display());
    let output = fpc(&[
        "limit",
        "--map",
        "[1,2,1]",
        "--point",
        "0",
        "--semantics",
        "standard",
        "--family",
        &family,
    ]);
    assert_exit(&output, 0);
    assert_eq!(
        stdout_of(&output),
        "thread 1: [0,0,0]->{0,1,2} [0,0,1]->{0,1}\n\
         thread 2: [0,0,0]->{0,1,2} [0,0,1]->{2}\n\
         2 threads\n"
    );

    // A family whose ground set disagrees with the map is a dimension error.
    let output = fpc(&[
        "limit",
        "--map",
        "[0,1]",
        "--point",
        "0",
        "--semantics",
        "standard",
        "--family",
        &family,
    ]);
    assert_exit(&output, 4);

    // A malformed member line is a parse error naming the file and line.
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "{0,1,2}\n{0,x}\n").unwrap();
    let family = format!("file:{}", bad.display());
    let output = fpc(&[
        "limit",
        "--map",
        "[1,2,1]",
        "--point",
        "0",
        "--semantics",
        "standard",
        "--family",
        &family,
    ]);
    assert_exit(&output, 3);
    assert!(stderr_of(&output).contains("bad.txt:2"));
}

// ---------------------------------------------------------------------------
// conjecture
// ---------------------------------------------------------------------------

#[test]
fn conjecture_summary_lines_are_golden() {
    let output = fpc(&["conjecture", "--n", "3", "--semantics", "point-supported"]);
    assert_exit(&output, 0);
    assert_eq!(
        stdout_of(&output),
        "n=3 semantics=point-supported family=full-lattice mode=exhaustive points=81 \
         holds=81 counterexamples=0 forward=0 backward=0 complete=true\n"
    );

    // Counterexamples are findings, not failures: still exit 0.
    let output = fpc(&["conjecture", "--n", "3", "--semantics", "standard"]);
    assert_exit(&output, 0);
    assert_eq!(
        stdout_of(&output),
        "n=3 semantics=standard family=full-lattice mode=exhaustive points=81 \
         holds=51 counterexamples=30 forward=30 backward=0 complete=true\n"
    );
}

#[test]
fn conjecture_ceiling_requires_force() {
    let output = fpc(&["conjecture", "--n", "20", "--semantics", "standard"]);
    assert_exit(&output, 5);
}

#[test]
fn conjecture_report_file_replays_and_is_worker_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("w1.json");
    let eight = dir.path().join("w8.json");
    for (path, workers) in [(&one, "1"), (&eight, "8")] {
        let out = path.display().to_string();
        let output = fpc(&[
            "conjecture",
            "--n",
            "3",
            "--semantics",
            "standard",
            "--workers",
            workers,
            "--out",
            &out,
        ]);
        assert_exit(&output, 0);
        let stdout = stdout_of(&output);
        assert!(stdout.contains("counterexamples=30"));
        assert!(stdout.contains(&format!("report written to {out}")));
    }
    let bytes_one = std::fs::read(&one).unwrap();
    let bytes_eight = std::fs::read(&eight).unwrap();
    assert_eq!(bytes_one, bytes_eight, "worker count changed the report");

    let report = SweepReport::from_json(&String::from_utf8(bytes_one).unwrap()).unwrap();
    assert_eq!(report.counterexamples.len(), 30);
    for verdict in &report.counterexamples {
        let family = verdict.family.build().unwrap();
        let replayed = check_point_capped(
            &verdict.map,
            verdict.point,
            verdict.semantics,
            &family,
            report.thread_cap,
        )
        .unwrap();
        assert_eq!(&replayed, verdict);
    }
}

#[test]
fn conjecture_sampled_is_seed_reproducible() {
    let run = |seed: &str| {
        let output = fpc(&[
            "conjecture",
            "--n",
            "4",
            "--semantics",
            "standard",
            "--sample",
            "50",
            "--seed",
            seed,
        ]);
        assert_exit(&output, 0);
        stdout_of(&output)
    };
    let first = run("42");
    assert_eq!(first, run("42"));
    assert!(first.contains("mode=sampled(size=50,seed=42) points=200"));
    assert_ne!(first, run("43"));
}

#[test]
fn conjecture_with_family_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.txt");
    std::fs::write(&path, "{0,1,2}\n{0,1}|{2}\n{0}|{1}|{2}\n").unwrap();
    let family = format!("file:{}", path.display());
    let output = fpc(&[
        "conjecture",
        "--n",
        "3",
        "--semantics",
        "point-supported",
        "--family",
        &family,
    ]);
    assert_exit(&output, 0);
    let stdout = stdout_of(&output);
    assert!(stdout.contains("family=explicit(3)"), "stdout: {stdout}");
    assert!(stdout.contains("points=81"));
}
