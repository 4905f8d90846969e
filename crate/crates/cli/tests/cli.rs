//! End-to-end tests of the `stratlog` binary.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn stratlog(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_stratlog"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn corpus_file(name: &str) -> String {
    corpus_dir().join(name).display().to_string()
}

#[test]
fn analyze_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(dir.path(), "ok.slt", "uttered(p(a)).\n");
    let inconsistent = write(dir.path(), "inc.slt", "uttered(p(a)).\nuttered(~p(a)).\n");
    let broken = write(dir.path(), "broken.slt", "uttered(p(a).\n");

    assert_eq!(stratlog(&["analyze", &ok], "").status.code(), Some(0));
    let out = stratlog(&["analyze", &inconsistent], "");
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("inconsistent"));
    let out = stratlog(&["analyze", &broken], "");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("broken.slt:1:"));
    let missing = dir.path().join("nope.slt").display().to_string();
    assert_eq!(stratlog(&["analyze", &missing], "").status.code(), Some(2));

    let out = stratlog(&["analyze", "--max-branches", "1", &corpus_file("or_noncancel.slt")], "");
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn zero_caps_are_rejected_by_argument_parsing() {
    let out = stratlog(&["analyze", "--max-branches", "0", &corpus_file("regret.slt")], "");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("max-branches"));
}

#[test]
fn empty_theory_has_an_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.slt", "");
    let out = stratlog(&["analyze", "--format", "json", &empty], "");
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["report"]["inferences"], Value::Array(vec![]));
    assert_eq!(v["report"]["cancelled"], Value::Array(vec![]));
    assert_eq!(v["report"]["schema_count"], 1);
}

#[test]
fn analyze_json_report() {
    let out = stratlog(&["analyze", "--format", "json", "--show-schemata", &corpus_file("regret.slt")], "");
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let inferences = v["report"]["inferences"].as_array().unwrap();
    assert_eq!(inferences.len(), 1);
    assert_eq!(inferences[0]["atom"], "come(mary,party)");
    assert_eq!(inferences[0]["polarity"], "positive");
    assert_eq!(inferences[0]["stratum"], "d");
    assert_eq!(v["report"]["schema_count"], 2);
}

#[test]
fn analyze_several_files_in_json_gives_an_array() {
    let out = stratlog(&["analyze", "--format", "json", &corpus_file("regret.slt"), &corpus_file("scalar.slt")], "");
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v.as_array().map(Vec::len), Some(2));
}

#[test]
fn analyze_table_lists_tableau_and_schemata() {
    let out = stratlog(&["analyze", "--show-tableau", "--show-schemata", &corpus_file("regret.slt")], "");
    let text = stdout(&out);
    assert!(text.contains("come^d(mary,party)"));
    assert!(text.contains("Felicitously defeasible"));
}

#[test]
fn repl_quits_immediately() {
    let out = stratlog(&["repl", &corpus_file("regret.slt")], ":quit\n");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn repl_replays_the_repair_dialogue() {
    let script = "uttered(~bachelor(john)).\n\
                  bogus(\n\
                  uttered(regret(jane, misunderstood(mary,jane))).\n\
                  uttered(five_years_old(john)).\n\
                  :history\n\
                  :quit\n";
    let out = stratlog(&["repl", "--rules-only", &corpus_file("repair.slt")], script);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("+ adult^d(john)"), "{text}");
    assert!(text.contains("- adult^d(john)"), "{text}");
    assert!(text.contains("error:"), "a bad line is reported and skipped: {text}");
    assert!(text.contains("step 3"), "{text}");
}

#[test]
fn repl_final_state_matches_batch_analysis() {
    let file = corpus_file("indirect_reply.slt");
    let text = std::fs::read_to_string(&file).unwrap();
    let utterances: String = text.lines().filter(|l| l.starts_with("uttered(")).map(|l| format!("{l}\n")).collect();
    let out = stratlog(&["repl", "--rules-only", "--format", "json", &file], &utterances);
    assert_eq!(out.status.code(), Some(0));
    let last: Value = serde_json::from_str(stdout(&out).lines().last().unwrap()).unwrap();

    let batch = stratlog(&["analyze", "--format", "json", &file], "");
    let batch: Value = serde_json::from_str(&stdout(&batch)).unwrap();
    assert_eq!(last["report"], batch["report"]);
}

fn copy_corpus(dir: &Path) {
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        std::fs::copy(&path, dir.join(path.file_name().unwrap())).unwrap();
    }
}

#[test]
fn corpus_goldens_pass() {
    let out = stratlog(&["corpus", &corpus_dir().display().to_string()], "");
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("0 failures"));
}

#[test]
fn corpus_reports_an_edited_golden() {
    let dir = tempfile::tempdir().unwrap();
    copy_corpus(dir.path());
    let golden = dir.path().join("scalar.json");
    let edited = std::fs::read_to_string(&golden).unwrap().replace("\"d\"", "\"i\"");
    std::fs::write(&golden, edited).unwrap();

    let out = stratlog(&["corpus", &dir.path().display().to_string()], "");
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let line = text.lines().find(|l| l.starts_with("mismatch")).expect("a mismatch line");
    assert!(line.contains("scalar.slt"), "{line}");
    assert!(text.contains("1 failures"), "{text}");
}

#[test]
fn corpus_filter_and_missing_golden() {
    let dir = tempfile::tempdir().unwrap();
    copy_corpus(dir.path());
    std::fs::remove_file(dir.path().join("regret.json")).unwrap();
    let root = dir.path().display().to_string();

    let out = stratlog(&["corpus", &root, "--filter", "scalar", "--format", "json"], "");
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let names: Vec<&String> = v["files"].as_object().unwrap().keys().collect();
    assert_eq!(names, ["scalar", "scalar_cancel"]);

    let out = stratlog(&["corpus", &root, "--filter", "regret"], "");
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("missing"));

    let out = stratlog(&["corpus", &root, "--filter", "regret", "--bless"], "");
    assert_eq!(out.status.code(), Some(0));
    let blessed = std::fs::read_to_string(dir.path().join("regret.json")).unwrap();
    assert_eq!(blessed, std::fs::read_to_string(corpus_dir().join("regret.json")).unwrap());
}

#[test]
fn corpus_unreadable_directory() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent").display().to_string();
    assert_eq!(stratlog(&["corpus", &missing], "").status.code(), Some(2));
}

#[test]
fn fuzz_finds_no_divergences() {
    let out = stratlog(&["fuzz", "--count", "20", "--seed", "7"], "");
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("0 divergences"));
}
