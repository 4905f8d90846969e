//! Golden-transcript regression over a directory of `.slt` files.
//!
//! Each `name.slt` is replayed as a session, one utterance per step, and the
//! transcript is compared with `name.json` next to it.

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use stratlog::pragmatics::{infer, Session};
use stratlog::Theory;

use crate::{load, Format, Options, EXIT_PARSE};

pub fn transcript(theory: &Theory, opts: &Options) -> Value {
    let mut session = Session::new(theory, opts.caps());
    let steps: Vec<Value> = theory
        .utterances()
        .iter()
        .map(|u| match session.push_utterance(u.clone()) {
            Ok((report, diff)) => json!({
                "utterance": u.to_string(),
                "report": report.to_json(),
                "appeared": diff.to_json()["appeared"],
                "disappeared": diff.to_json()["disappeared"],
            }),
            Err(e) => json!({ "utterance": u.to_string(), "error": e.to_string() }),
        })
        .collect();
    let last = match infer(theory, opts.caps()) {
        Ok(report) => report.to_json(),
        Err(e) => json!({ "error": e.to_string() }),
    };
    json!({ "steps": steps, "final": last })
}

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("json values serialize") + "\n"
}

fn first_difference(expected: &str, actual: &str) -> String {
    let (mut e, mut a) = (expected.lines(), actual.lines());
    let mut line = 1;
    loop {
        match (e.next(), a.next()) {
            (Some(x), Some(y)) if x == y => line += 1,
            (None, None) => return "identical".to_string(),
            (x, y) => {
                return format!(
                    "line {line}: expected `{}`, got `{}`",
                    x.unwrap_or("<end of file>").trim(),
                    y.unwrap_or("<end of file>").trim()
                )
            }
        }
    }
}

fn corpus_files(dir: &Path, filter: Option<&str>) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "slt"))
        .filter(|p| {
            let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            filter.is_none_or(|f| name.contains(f))
        })
        .collect();
    files.sort();
    Ok(files)
}

pub fn run(dir: &Path, filter: Option<&str>, bless: bool, opts: &Options) -> u8 {
    let files = match corpus_files(dir, filter) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {}: {e}", dir.display());
            return EXIT_PARSE;
        }
    };
    let mut failures = 0;
    let mut results = Map::new();
    for path in &files {
        let stem = path.file_stem().expect("slt files have a stem").to_string_lossy().into_owned();
        let golden_path = path.with_extension("json");
        let (status, detail, actual) = match load(path) {
            Err(e) => ("error", e, Value::Null),
            Ok(source) => {
                let actual = transcript(&source.theory, opts);
                let text = pretty(&actual);
                if bless {
                    match std::fs::write(&golden_path, &text) {
                        Ok(()) => ("blessed", golden_path.display().to_string(), actual),
                        Err(e) => ("error", format!("{}: {e}", golden_path.display()), actual),
                    }
                } else {
                    match std::fs::read_to_string(&golden_path) {
                        Err(_) => ("missing", format!("no golden {}; run with --bless", golden_path.display()), actual),
                        Ok(expected) if expected == text => ("ok", String::new(), actual),
                        Ok(expected) => ("mismatch", first_difference(&expected, &text), actual),
                    }
                }
            }
        };
        if !matches!(status, "ok" | "blessed") {
            failures += 1;
        }
        match opts.format {
            Format::Table => {
                let detail = if detail.is_empty() { String::new() } else { format!(": {detail}") };
                println!("{status:<8} {}{detail}", path.display());
            }
            Format::Json => {
                results.insert(stem, json!({ "status": status, "detail": detail, "transcript": actual }));
            }
        }
    }
    match opts.format {
        Format::Table => println!("{} files, {failures} failures", files.len()),
        Format::Json => print!("{}", pretty(&json!({ "files": results, "failures": failures }))),
    }
    u8::from(failures > 0)
}
