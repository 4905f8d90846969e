//! Pragmatic inferences, cancellations and incremental sessions.
//!
//! A signed atom is a candidate when some optimistic schema asserts it at `i`
//! or `d` with pragmatic provenance. A candidate becomes an inference unless
//! some optimistic schema asserts the opposite polarity at any stratum, in
//! which case it is reported as cancelled together with the strongest such
//! defeater.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};

use crate::ordering::optimistic;
use crate::schema::{branch_to_schema, ModelSchema};
use crate::syntax::{Formula, GroundAtom, Polarity, StratifiedLiteral, Stratum, Theory};
use crate::tableau::{expand, Caps, Tableau};
use crate::EngineError;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Inference {
    pub atom: GroundAtom,
    pub polarity: Polarity,
    /// Strongest defeasible stratum at which it was pragmatically derived.
    pub stratum: Stratum,
}

impl Inference {
    pub fn literal(&self) -> StratifiedLiteral {
        self.atom.literal(self.polarity, self.stratum)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "atom": self.atom.to_string(),
            "polarity": self.polarity.name(),
            "stratum": self.stratum.to_string(),
        })
    }
}

impl fmt::Display for Inference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.literal())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cancellation {
    pub atom: GroundAtom,
    pub polarity: Polarity,
    pub defeater: StratifiedLiteral,
}

impl Cancellation {
    pub fn to_json(&self) -> Value {
        json!({
            "atom": self.atom.to_string(),
            "polarity": self.polarity.name(),
            "defeater": self.defeater.to_string(),
        })
    }
}

impl fmt::Display for Cancellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.polarity == Polarity::Negative { "~" } else { "" };
        write!(f, "{sign}{} defeated by {}", self.atom, self.defeater)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InferenceReport {
    pub inferences: Vec<Inference>,
    pub cancelled: Vec<Cancellation>,
    pub optimistic_count: usize,
    pub schema_count: usize,
}

impl InferenceReport {
    pub fn to_json(&self) -> Value {
        json!({
            "inferences": self.inferences.iter().map(Inference::to_json).collect::<Vec<_>>(),
            "cancelled": self.cancelled.iter().map(Cancellation::to_json).collect::<Vec<_>>(),
            "optimistic_count": self.optimistic_count,
            "schema_count": self.schema_count,
        })
    }

    /// Whether the atom is inferred with the given polarity, at any stratum.
    pub fn infers(&self, atom: &GroundAtom, polarity: Polarity) -> bool {
        self.inferences.iter().any(|i| &i.atom == atom && i.polarity == polarity)
    }
}

/// Applies the inference criterion to a set of optimistic schemata.
pub fn report_from_optimistic(optimistic: &[ModelSchema], schema_count: usize) -> InferenceReport {
    let mut candidates: BTreeMap<(GroundAtom, Polarity), Stratum> = BTreeMap::new();
    for m in optimistic {
        for (lit, prag) in m.entries() {
            if prag && lit.stratum.is_defeasible() {
                candidates
                    .entry((lit.atom.clone(), lit.polarity))
                    .and_modify(|s| *s = (*s).min(lit.stratum))
                    .or_insert(lit.stratum);
            }
        }
    }
    let mut inferences = Vec::new();
    let mut cancelled = Vec::new();
    for ((atom, polarity), stratum) in candidates {
        let defeater = optimistic
            .iter()
            .flat_map(|m| m.literals())
            .filter(|l| l.atom == atom && l.polarity == polarity.flip())
            .min_by_key(|l| l.stratum);
        match defeater {
            None => inferences.push(Inference { atom, polarity, stratum }),
            Some(d) => cancelled.push(Cancellation { atom, polarity, defeater: d.clone() }),
        }
    }
    InferenceReport { inferences, cancelled, optimistic_count: optimistic.len(), schema_count }
}

/// Every intermediate artifact of one analysis.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub tableau: Tableau,
    pub schemata: Vec<ModelSchema>,
    pub optimistic: Vec<ModelSchema>,
    pub report: InferenceReport,
}

pub fn analyze(theory: &Theory, caps: Caps) -> Result<Analysis, EngineError> {
    let tableau = expand(theory, caps)?;
    if tableau.open.is_empty() {
        return Err(EngineError::Inconsistent);
    }
    let schemata: Vec<ModelSchema> = tableau.open.iter().map(branch_to_schema).collect();
    let optimistic = optimistic(&schemata)?;
    let report = report_from_optimistic(&optimistic, schemata.len());
    Ok(Analysis { tableau, schemata, optimistic, report })
}

pub fn infer(theory: &Theory, caps: Caps) -> Result<InferenceReport, EngineError> {
    analyze(theory, caps).map(|a| a.report)
}

/// Inferences gained and lost by one step.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diff {
    pub appeared: Vec<Inference>,
    pub disappeared: Vec<Inference>,
}

impl Diff {
    pub fn between(before: &[Inference], after: &[Inference]) -> Self {
        let b: BTreeSet<&Inference> = before.iter().collect();
        let a: BTreeSet<&Inference> = after.iter().collect();
        Diff {
            appeared: a.difference(&b).map(|i| (*i).clone()).collect(),
            disappeared: b.difference(&a).map(|i| (*i).clone()).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.appeared.is_empty() && self.disappeared.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "appeared": self.appeared.iter().map(Inference::to_json).collect::<Vec<_>>(),
            "disappeared": self.disappeared.iter().map(Inference::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Fixed rules plus a growing utterance log, re-analysed from scratch after
/// every utterance.
#[derive(Clone, Debug)]
pub struct Session {
    theory: Theory,
    caps: Caps,
    history: Vec<InferenceReport>,
}

impl Session {
    /// Starts with the rules of `rules`; its utterances are ignored.
    pub fn new(rules: &Theory, caps: Caps) -> Self {
        Session { theory: rules.rules_only(), caps, history: Vec::new() }
    }

    /// Appends an utterance and reports the new inferences. On error the
    /// session is left unchanged.
    pub fn push_utterance(&mut self, utterance: Formula) -> Result<(InferenceReport, Diff), EngineError> {
        let mut next = self.theory.clone();
        next.push_utterance(utterance)?;
        let report = infer(&next, self.caps)?;
        let previous = self.history.last().map(|r| r.inferences.as_slice()).unwrap_or(&[]);
        let diff = Diff::between(previous, &report.inferences);
        self.theory = next;
        self.history.push(report.clone());
        Ok((report, diff))
    }

    pub fn log(&self) -> &[Formula] {
        self.theory.utterances()
    }

    pub fn history(&self) -> &[InferenceReport] {
        &self.history
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }
}
