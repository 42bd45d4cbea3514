//! End-to-end checks of the command-line contract: documented outputs,
//! exit codes, and the stderr/stdout split, all through the real binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn rex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rex"))
        .args(args)
        .env_remove("REX_MAX_STEPS")
        .output()
        .expect("run rex")
}

fn rex_on_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rex"))
        .args(args)
        .env_remove("REX_MAX_STEPS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn rex");
    child
        .stdin
        .take()
        .expect("child stdin")
        .write_all(input.as_bytes())
        .expect("write stdin");
    child.wait_with_output().expect("wait for rex")
}

fn out(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is utf-8")
}

fn err(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is utf-8")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn match_prints_the_lazy_span_and_exits_zero() {
    let output = rex(&["match", "X[A-Z]*?X", "XABCXABCX"]);
    assert_eq!(code(&output), 0);
    assert_eq!(out(&output), "[0,5)\n");
    assert_eq!(err(&output), "", "diagnostic stream must stay clean");
}

#[test]
fn match_prints_group_lines_in_order() {
    let output = rex(&["match", "(X)([A-Z]*?)X", "XABCXABCX"]);
    assert_eq!(code(&output), 0);
    assert_eq!(out(&output), "[0,5)\n1: X [0,1)\n2: ABC [1,4)\n");
}

#[test]
fn match_without_a_hit_says_so_and_exits_one() {
    let output = rex(&["match", "XYZ", "AAAA"]);
    assert_eq!(code(&output), 1);
    assert_eq!(out(&output), "no match\n");
    assert_eq!(err(&output), "");
}

#[test]
fn match_reports_pattern_errors_on_stderr_with_exit_two() {
    let output = rex(&["match", "X{12,3}", "X"]);
    assert_eq!(code(&output), 2);
    assert_eq!(out(&output), "", "data stream must stay clean");
    assert!(
        err(&output).contains("invalid-bounds at offset 1"),
        "stderr was: {}",
        err(&output)
    );
}

#[test]
fn match_all_prints_every_match() {
    let output = rex(&["match", "--all", "a+", "aa b aaa"]);
    assert_eq!(code(&output), 0);
    assert_eq!(out(&output), "[0,2)\n[5,8)\n");
}

#[test]
fn match_oracle_flag_reports_agreement() {
    let output = rex(&["match", "--oracle", "(a+)(b*)", "xxaabtook"]);
    assert_eq!(code(&output), 0);
    let stdout = out(&output);
    assert!(stdout.ends_with("oracle: AGREE\n"), "stdout was: {stdout}");

    let missing = rex(&["match", "--oracle", "zz", "aaaa"]);
    assert_eq!(code(&missing), 1);
    assert_eq!(out(&missing), "no match\noracle: AGREE\n");
}

#[test]
fn match_budget_exhaustion_is_exit_three_with_a_diagnostic() {
    let output = rex(&["match", "--max-steps", "5", "(a|ab)*c", "abababab"]);
    assert_eq!(code(&output), 3);
    assert_eq!(out(&output), "");
    assert!(err(&output).contains("budget exceeded"), "{}", err(&output));
}

#[test]
fn rex_max_steps_environment_variable_sets_the_default_budget() {
    let output = Command::new(env!("CARGO_BIN_EXE_rex"))
        .args(["match", "(a|ab)*c", "abababab"])
        .env("REX_MAX_STEPS", "5")
        .output()
        .expect("run rex");
    assert_eq!(code(&output), 3);
    assert!(err(&output).contains("budget exceeded"), "{}", err(&output));
}

#[test]
fn grep_prefixes_matching_lines_with_path_and_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("notes.txt");
    std::fs::write(&path, "first line\nhas DFNA3 inside\nlast line\n").unwrap();
    let path = path.to_str().unwrap();

    let output = rex(&["grep", "DFN[A-Z]\\d+", path]);
    assert_eq!(code(&output), 0);
    assert_eq!(out(&output), format!("{path}:2:has DFNA3 inside\n"));
    assert_eq!(err(&output), "");
}

#[test]
fn grep_count_prints_zero_and_exits_one_when_nothing_matches() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("notes.txt");
    std::fs::write(&path, "nothing here\nor here\n").unwrap();
    let path = path.to_str().unwrap();

    let output = rex(&["grep", "-c", "DFN[A-Z]\\d+", path]);
    assert_eq!(code(&output), 1);
    assert_eq!(out(&output), format!("{path}:0\n"));
}

#[test]
fn grep_only_matching_prints_each_hit_on_its_own_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("genes.txt");
    std::fs::write(&path, "DFNA3 DFNB40\n").unwrap();
    let path = path.to_str().unwrap();

    let output = rex(&["grep", "-o", "DFN[A-Z]\\d+", path]);
    assert_eq!(code(&output), 0);
    assert_eq!(out(&output), format!("{path}:1:DFNA3\n{path}:1:DFNB40\n"));
}

#[test]
fn grep_reads_standard_input_when_no_paths_are_given() {
    let output = rex_on_stdin(&["grep", "b+"], "abc\nxyz\nrabble\n");
    assert_eq!(code(&output), 0);
    assert_eq!(out(&output), "-:1:abc\n-:3:rabble\n");
}

#[test]
fn grep_unreadable_input_is_exit_three_but_processing_continues() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    std::fs::write(&good, "a DFNA3 line\n").unwrap();
    let missing = dir.path().join("missing.txt");

    let output = rex(&[
        "grep",
        "DFN[A-Z]\\d+",
        missing.to_str().unwrap(),
        good.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 3);
    // The readable file was still searched and its hit printed.
    assert!(out(&output).contains("a DFNA3 line"), "{}", out(&output));
    assert!(err(&output).contains("missing.txt"), "{}", err(&output));
}

#[test]
fn explain_prints_a_four_node_machine_for_a_three_letter_literal() {
    let output = rex(&["explain", "XYZ"]);
    assert_eq!(code(&output), 0);
    let stdout = out(&output);
    assert!(stdout.starts_with("digraph statemachine {"), "{stdout}");
    let nodes =
        stdout.matches("shape=circle").count() + stdout.matches("shape=doublecircle").count();
    assert_eq!(nodes, 4, "{stdout}");
    assert_eq!(err(&output), "");
}

#[test]
fn explain_of_the_empty_pattern_is_a_single_epsilon_edge() {
    let output = rex(&["explain", ""]);
    assert_eq!(code(&output), 0);
    let stdout = out(&output);
    let edges: Vec<&str> = stdout
        .lines()
        .filter(|line| line.contains("->") && !line.contains("__entry"))
        .collect();
    assert_eq!(edges, ["  s0 -> s1 [label=\"\u{3b5}\"];"], "{stdout}");
}

#[test]
fn explain_rejects_a_dangling_parenthesis_with_exit_two() {
    let output = rex(&["explain", "("]);
    assert_eq!(code(&output), 2);
    assert_eq!(out(&output), "");
    assert!(
        err(&output).contains("unbalanced-parenthesis"),
        "{}",
        err(&output)
    );
}

fn write_corpus(lines: &[(&str, &str)]) -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corpus.jsonl");
    let body: String = lines
        .iter()
        .map(|(id, text)| format!("{}\n", serde_json::json!({ "id": id, "text": text })))
        .collect();
    std::fs::write(&path, body).unwrap();
    let path = path.to_str().unwrap().to_string();
    (dir, path)
}

#[test]
fn refine_reports_counts_and_percentage_in_text_form() {
    let (_dir, path) = write_corpus(&[
        ("d1", "call DFNA3 now"),
        ("d2", "nothing to see"),
        ("d3", "DFNB40 then DFNA21"),
        ("d4", "also nothing"),
    ]);

    let output = rex(&["refine", "--pattern", "DFN[A-Z]\\d+", "--corpus", &path]);
    assert_eq!(code(&output), 0);
    assert_eq!(
        out(&output),
        "pattern: DFN[A-Z]\\d+\ndocuments: 4\nmatched: 2 (50.00%)\nd1\t1\nd3\t2\n"
    );
    assert_eq!(err(&output), "");
}

#[test]
fn refine_over_an_empty_corpus_prints_zero_percent_and_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.jsonl");
    std::fs::write(&path, "").unwrap();

    let output = rex(&[
        "refine",
        "--pattern",
        "ZZZ9",
        "--corpus",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 1);
    assert!(out(&output).contains("0.00%"), "{}", out(&output));
}

#[test]
fn refine_validates_the_pattern_before_touching_any_input() {
    // The corpus path does not exist; the pattern error must win, meaning
    // no I/O was attempted first.
    let output = rex(&[
        "refine",
        "--pattern",
        "(",
        "--corpus",
        "/nonexistent/nowhere.jsonl",
    ]);
    assert_eq!(code(&output), 2);
    assert!(
        err(&output).contains("unbalanced-parenthesis"),
        "{}",
        err(&output)
    );
    assert!(
        !err(&output).contains("io-error"),
        "pattern must be checked before I/O: {}",
        err(&output)
    );
}

#[test]
fn refine_missing_corpus_file_is_exit_three() {
    let output = rex(&[
        "refine",
        "--pattern",
        "a",
        "--corpus",
        "/nonexistent/nowhere.jsonl",
    ]);
    assert_eq!(code(&output), 3);
    assert!(err(&output).contains("io-error"), "{}", err(&output));
}

#[test]
fn refine_jsonl_output_is_machine_readable() {
    let (_dir, path) = write_corpus(&[("d1", "DFNA3"), ("d2", "quiet")]);

    let output = rex(&[
        "refine",
        "--pattern",
        "DFN([A-Z])\\d+",
        "--corpus",
        &path,
        "--format",
        "jsonl",
        "--captures",
        "1",
    ]);
    assert_eq!(code(&output), 0);
    let lines: Vec<serde_json::Value> = out(&output)
        .lines()
        .map(|line| serde_json::from_str(line).expect("every line is JSON"))
        .collect();
    assert_eq!(lines.len(), 3, "document record, summary, capture");
    assert_eq!(lines[0]["id"], "d1");
    assert_eq!(lines[0]["matchCount"], 1);
    assert_eq!(lines[1]["summary"]["matchedDocs"], 1);
    assert_eq!(lines[1]["summary"]["percentage"], "50.00%");
    assert_eq!(lines[2]["text"], "A");
}

#[test]
fn refine_rejects_an_out_of_range_capture_group_before_io() {
    let output = rex(&[
        "refine",
        "--pattern",
        "(a)",
        "--corpus",
        "/nonexistent/nowhere.jsonl",
        "--captures",
        "2",
    ]);
    assert_eq!(code(&output), 2);
    assert!(
        err(&output).contains("group-out-of-range"),
        "{}",
        err(&output)
    );
}

#[test]
fn refine_requires_exactly_one_corpus_source() {
    let neither = rex(&["refine", "--pattern", "a"]);
    assert_eq!(code(&neither), 2);

    let (_dir, path) = write_corpus(&[("d1", "a")]);
    let both = rex(&[
        "refine",
        "--pattern",
        "a",
        "--corpus",
        &path,
        "--provider",
        "http",
        "--base-url",
        "http://localhost:1",
        "--keywords",
        "x",
    ]);
    assert_eq!(code(&both), 2);
}

#[test]
fn refine_provider_failures_are_exit_three() {
    // Nothing listens on this port; the provider query must fail as an
    // I/O-class error after the pattern was accepted.
    let output = rex(&[
        "refine",
        "--pattern",
        "a",
        "--provider",
        "http",
        "--base-url",
        "http://127.0.0.1:1",
        "--keywords",
        "anything",
        "--max",
        "3",
    ]);
    assert_eq!(code(&output), 3);
    assert_eq!(out(&output), "");
    assert!(!err(&output).is_empty());
}

#[test]
fn every_command_accepts_the_same_pattern_language() {
    // One parser behind all four commands: a pattern accepted by one is
    // accepted by the rest, and a pattern rejected by one is rejected by
    // the rest with the same diagnostic kind.
    let tricky = "(\\s?(\\(?\\d{3}\\)?)[-\\s.]?(\\d{3}[-.\\s]\\d{4}))";
    let (_dir, corpus) = write_corpus(&[("d1", "(555) 123-4567")]);
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.txt");
    std::fs::write(&file, "(555) 123-4567\n").unwrap();

    assert_eq!(code(&rex(&["match", tricky, "(555) 123-4567"])), 0);
    assert_eq!(code(&rex(&["grep", tricky, file.to_str().unwrap()])), 0);
    assert_eq!(code(&rex(&["explain", tricky])), 0);
    assert_eq!(
        code(&rex(&["refine", "--pattern", tricky, "--corpus", &corpus])),
        0
    );

    let broken = "X{12,3}";
    for args in [
        vec!["match", broken, "X"],
        vec!["grep", broken, file.to_str().unwrap()],
        vec!["explain", broken],
        vec!["refine", "--pattern", broken, "--corpus", &corpus],
    ] {
        let output = rex(&args);
        assert_eq!(code(&output), 2, "{args:?}");
        assert!(err(&output).contains("invalid-bounds"), "{args:?}");
    }
}

#[cfg(unix)]
#[test]
fn a_closed_stdout_pipe_ends_grep_quietly() {
    use std::io::Read;
    use std::os::unix::process::ExitStatusExt;
    use std::process::{Command, Stdio};

    // Enough matching lines that the 64 KiB pipe buffer cannot hold the
    // output, so grep is still writing after the reader disappears.
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("big.txt");
    std::fs::write(&file, "XY\n".repeat(200_000)).unwrap();

    let mut child = Command::new(env!("CARGO_BIN_EXE_rex"))
        .args(["grep", "X", file.to_str().unwrap()])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    drop(child.stdout.take());
    let status = child.wait().unwrap();
    let mut stderr = String::new();
    child
        .stderr
        .take()
        .unwrap()
        .read_to_string(&mut stderr)
        .unwrap();

    // Killed by SIGPIPE like grep, with no panic chatter on stderr.
    assert_eq!(status.signal(), Some(13), "status: {status:?}");
    assert!(stderr.is_empty(), "stderr must stay clean: {stderr:?}");
}
