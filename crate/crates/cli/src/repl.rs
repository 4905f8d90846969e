//! Line-oriented session: one `uttered(...)` per line.

use std::io::{BufRead, Write};
use std::path::Path;

use serde_json::json;
use stratlog::parser::{parse_item, Item};
use stratlog::pragmatics::Session;
use stratlog::Formula;

use crate::render::{diff_table, report_table};
use crate::{load, Format, Options, EXIT_PARSE};

const HELP: &str = "enter `uttered(F).` to add an utterance, `:history` to list the session, `:quit` to exit";

fn step<W: Write>(session: &mut Session, utterance: Formula, opts: &Options, out: &mut W) -> std::io::Result<()> {
    let text = utterance.to_string();
    match session.push_utterance(utterance) {
        Ok((report, diff)) => {
            let n = session.history().len();
            match opts.format {
                Format::Table => {
                    writeln!(out, "step {n}: uttered({text})")?;
                    write!(out, "{}", diff_table(&diff))?;
                }
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({
                        "step": n,
                        "utterance": text,
                        "report": report.to_json(),
                        "appeared": diff.to_json()["appeared"],
                        "disappeared": diff.to_json()["disappeared"],
                    })
                )?,
            }
        }
        Err(e) => writeln!(out, "error: {e}; utterance not added")?,
    }
    Ok(())
}

fn history<W: Write>(session: &Session, out: &mut W) -> std::io::Result<()> {
    if session.log().is_empty() {
        writeln!(out, "(empty session)")?;
    }
    for (i, (u, report)) in session.log().iter().zip(session.history()).enumerate() {
        writeln!(out, "step {}: uttered({u})", i + 1)?;
        for line in report_table(report).lines() {
            writeln!(out, "  {line}")?;
        }
    }
    Ok(())
}

pub fn run<R: BufRead, W: Write>(file: &Path, rules_only: bool, opts: &Options, input: R, out: &mut W) -> u8 {
    let source = match load(file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    let mut session = Session::new(&source.theory, opts.caps());
    let result = (|| -> std::io::Result<()> {
        if !rules_only {
            for u in source.theory.utterances() {
                step(&mut session, u.clone(), opts, out)?;
            }
        }
        for line in input.lines() {
            let line = line?;
            let line = line.trim();
            match line {
                "" => continue,
                _ if line.starts_with('#') => continue,
                ":quit" | ":q" => break,
                ":history" => history(&session, out)?,
                ":help" => writeln!(out, "{HELP}")?,
                _ => match parse_item(line) {
                    Ok(Item::Utterance(f)) => step(&mut session, f, opts, out)?,
                    Ok(Item::Rule(_)) => writeln!(out, "error: only utterances can be added; {HELP}")?,
                    Err(e) => writeln!(out, "error: {e}")?,
                },
            }
            out.flush()?;
        }
        Ok(())
    })();
    match result {
        Ok(()) => 0,
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_PARSE
        }
    }
}
