//! Text and JSON rendering of analyses.

use std::fmt::Write;

use serde_json::{json, Value};
use stratlog::format_schema;
use stratlog::pragmatics::{Analysis, Diff, Inference, InferenceReport};
use stratlog::Theory;

use crate::Options;

pub fn theory_text(theory: &Theory) -> String {
    let rules = theory.rules().iter().map(|r| format!("{r}."));
    let utterances = theory.utterances().iter().map(|u| format!("uttered({u})."));
    rules.chain(utterances).collect::<Vec<_>>().join("\n")
}

fn list(out: &mut String, title: &str, items: &[String]) {
    writeln!(out, "{title}:").unwrap();
    if items.is_empty() {
        writeln!(out, "  (none)").unwrap();
    }
    for item in items {
        writeln!(out, "  {item}").unwrap();
    }
}

pub fn report_table(report: &InferenceReport) -> String {
    let mut out = String::new();
    writeln!(out, "schemata: {}, optimistic: {}", report.schema_count, report.optimistic_count).unwrap();
    list(&mut out, "inferences", &report.inferences.iter().map(Inference::to_string).collect::<Vec<_>>());
    list(&mut out, "cancelled", &report.cancelled.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    out
}

pub fn diff_table(diff: &Diff) -> String {
    let mut out = String::new();
    for i in &diff.appeared {
        writeln!(out, "  + {i}").unwrap();
    }
    for i in &diff.disappeared {
        writeln!(out, "  - {i}").unwrap();
    }
    if diff.is_empty() {
        writeln!(out, "  (no change)").unwrap();
    }
    out
}

pub fn analysis_table(name: &str, analysis: &Analysis, opts: &Options) -> String {
    let mut out = format!("== {name}\n");
    if opts.show_tableau {
        writeln!(out, "tableau: {} leaves, {} closed", analysis.tableau.leaf_count(), analysis.tableau.closed_count())
            .unwrap();
        for (i, leaf) in analysis.tableau.leaves.iter().enumerate() {
            let lits: Vec<String> =
                leaf.literals().iter().map(|(l, p)| if *p { format!("{l}*") } else { l.to_string() }).collect();
            let status = if leaf.is_closed() { "u-closed" } else { "open" };
            writeln!(out, "  leaf {} [{status}]: {}", i + 1, lits.join(", ")).unwrap();
        }
    }
    out.push_str(&report_table(&analysis.report));
    if opts.show_schemata {
        for (i, schema) in analysis.optimistic.iter().enumerate() {
            writeln!(out, "\noptimistic schema {} of {}:", i + 1, analysis.optimistic.len()).unwrap();
            out.push_str(&format_schema(schema));
        }
    }
    out
}

pub fn analysis_json(name: &str, analysis: &Analysis, opts: &Options) -> Value {
    let mut value = json!({ "file": name, "report": analysis.report.to_json() });
    if opts.show_schemata {
        value["optimistic"] = Value::Array(analysis.optimistic.iter().map(|m| m.to_json()).collect());
    }
    if opts.show_tableau {
        value["tableau"] = Value::Array(
            analysis
                .tableau
                .leaves
                .iter()
                .map(|leaf| {
                    json!({
                        "closed": leaf.is_closed(),
                        "literals": leaf.literals().keys().map(|l| l.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        );
    }
    value
}
