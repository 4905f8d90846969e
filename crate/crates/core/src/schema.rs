//! Model schemata and the level-indexed satisfaction relations.
//!
//! A schema assigns, for every predicate, argument tuples to six relations:
//! `R_x` and its barred counterpart `Rbar_x` for each stratum `x`. A positive
//! literal `p^x(t)` puts `t` into `R_x`; a negative one into `Rbar_x`. Only
//! the `u` relations must be disjoint; overlaps at `i` and `d` record defeat
//! and are kept.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::syntax::{nnf, Formula, GroundAtom, Polarity, StratifiedLiteral, Stratum, Theory};
use crate::tableau::Branch;

/// The satisfaction perspective: `u`, `i` or `d`.
pub type Level = Stratum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("schema is u-inconsistent on {0}")]
pub struct InconsistentSchema(pub GroundAtom);

/// One interpretation: a set of stratified literals, each tagged with whether
/// it was derived through an utterance-triggered rule.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelSchema {
    literals: BTreeMap<StratifiedLiteral, bool>,
}

impl ModelSchema {
    /// Builds a schema; a literal listed twice is pragmatic if either entry is.
    pub fn from_literals(
        literals: impl IntoIterator<Item = (StratifiedLiteral, bool)>,
    ) -> Result<Self, InconsistentSchema> {
        let mut map: BTreeMap<StratifiedLiteral, bool> = BTreeMap::new();
        for (lit, prag) in literals {
            *map.entry(lit).or_insert(false) |= prag;
        }
        for lit in map.keys() {
            if lit.stratum == Stratum::U && lit.is_positive() && map.contains_key(&lit.complement()) {
                return Err(InconsistentSchema(lit.atom.clone()));
            }
        }
        Ok(ModelSchema { literals: map })
    }

    pub fn literals(&self) -> impl Iterator<Item = &StratifiedLiteral> {
        self.literals.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&StratifiedLiteral, bool)> {
        self.literals.iter().map(|(l, p)| (l, *p))
    }

    pub fn literal_set(&self) -> BTreeSet<StratifiedLiteral> {
        self.literals.keys().cloned().collect()
    }

    pub fn contains(&self, lit: &StratifiedLiteral) -> bool {
        self.literals.contains_key(lit)
    }

    /// Pragmatic provenance of a literal; false when absent.
    pub fn is_pragmatic(&self, lit: &StratifiedLiteral) -> bool {
        self.literals.get(lit).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn atoms(&self) -> BTreeSet<GroundAtom> {
        self.literals.keys().map(|l| l.atom.clone()).collect()
    }

    /// Whether the argument tuple of `atom` is in `R_x` (positive) or
    /// `Rbar_x` (negative).
    pub fn holds(&self, atom: &GroundAtom, polarity: Polarity, stratum: Stratum) -> bool {
        self.literals.contains_key(&atom.literal(polarity, stratum))
    }

    /// Argument tuples of `pred` in `R_x` or `Rbar_x`.
    pub fn relation(&self, pred: &str, polarity: Polarity, stratum: Stratum) -> BTreeSet<GroundAtom> {
        self.literals
            .keys()
            .filter(|l| l.atom.pred == pred && l.polarity == polarity && l.stratum == stratum)
            .map(|l| l.atom.clone())
            .collect()
    }

    /// Atoms asserted with both polarities at the same defeasible stratum.
    pub fn conflicts(&self) -> Vec<(GroundAtom, Stratum)> {
        self.literals
            .keys()
            .filter(|l| l.is_positive() && l.stratum.is_defeasible() && self.contains(&l.complement()))
            .map(|l| (l.atom.clone(), l.stratum))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let mut predicates: BTreeMap<&str, Map<String, Value>> = BTreeMap::new();
        for lit in self.literals.keys() {
            predicates.entry(&lit.atom.pred).or_insert_with(|| {
                RELATION_NAMES.iter().map(|(name, _, _)| (name.to_string(), Value::Array(vec![]))).collect()
            });
        }
        for (pred, rels) in predicates.iter_mut() {
            for (name, polarity, stratum) in RELATION_NAMES {
                let tuples: Vec<Value> =
                    self.relation(pred, polarity, stratum).iter().map(|a| Value::String(a.tuple_string())).collect();
                rels.insert(name.to_string(), Value::Array(tuples));
            }
        }
        let provenance: Map<String, Value> =
            self.literals.iter().map(|(l, p)| (l.to_string(), json!({ "pragmatic": p }))).collect();
        json!({ "predicates": predicates, "provenance": provenance })
    }
}

const RELATION_NAMES: [(&str, Polarity, Stratum); 6] = [
    ("R_u", Polarity::Positive, Stratum::U),
    ("Rbar_u", Polarity::Negative, Stratum::U),
    ("R_i", Polarity::Positive, Stratum::I),
    ("Rbar_i", Polarity::Negative, Stratum::I),
    ("R_d", Polarity::Positive, Stratum::D),
    ("Rbar_d", Polarity::Negative, Stratum::D),
];

/// Relations consulted when a positive literal at `stratum` is evaluated at
/// `level`, as `(same polarity?, stratum)` pairs. `true` means the relation
/// of the literal's own polarity (`R` for a positive literal), `false` the
/// barred one.
fn clause(level: Level, stratum: Stratum) -> &'static [(bool, Stratum)] {
    use Stratum::{D, I, U};
    match (level, stratum) {
        (U, U) => &[(true, U)],
        (U, I) => &[(true, U), (false, U), (true, I)],
        (U, D) => &[(true, U), (false, U), (true, I), (false, I), (true, D)],
        (I, U) => &[(true, I)],
        (I, I) => &[(true, I)],
        (I, D) => &[(true, I), (false, I), (true, D)],
        (D, _) => &[(true, D)],
    }
}

/// x-satisfaction of a single literal. Negative literals use the positive
/// clause with every relation swapped for its barred counterpart.
pub fn satisfies(schema: &ModelSchema, literal: &StratifiedLiteral, level: Level) -> bool {
    clause(level, literal.stratum).iter().any(|&(same, stratum)| {
        let polarity = if same { literal.polarity } else { literal.polarity.flip() };
        schema.holds(&literal.atom, polarity, stratum)
    })
}

/// x-satisfaction of a ground, quantifier-free formula. Negation is pushed to
/// the literals first. Quantified formulas are not evaluated and yield false.
pub fn satisfies_formula(schema: &ModelSchema, formula: &Formula, level: Level) -> bool {
    eval_nnf(schema, &nnf(formula), level)
}

fn eval_nnf(schema: &ModelSchema, formula: &Formula, level: Level) -> bool {
    match formula {
        Formula::And(a, b) => eval_nnf(schema, a, level) && eval_nnf(schema, b, level),
        Formula::Or(a, b) => eval_nnf(schema, a, level) || eval_nnf(schema, b, level),
        other => match other.as_literal() {
            Some(lit) => satisfies(schema, &lit, level),
            None => false,
        },
    }
}

/// Whether the schema x-satisfies every ground instance of the theory.
pub fn satisfies_theory(schema: &ModelSchema, theory: &Theory, level: Level) -> bool {
    crate::syntax::ground_theory(theory).iter().all(|g| satisfies_formula(schema, &g.formula, level))
}

/// What a schema asserts about one signed atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Entailment {
    /// Strongest stratum at which the signed atom is asserted.
    pub stratum: Stratum,
    /// Some `i` or `d` assertion of it carries pragmatic provenance.
    pub pragmatic: bool,
}

pub fn entailed(schema: &ModelSchema) -> BTreeMap<(GroundAtom, Polarity), Entailment> {
    let mut out: BTreeMap<(GroundAtom, Polarity), Entailment> = BTreeMap::new();
    for (lit, prag) in schema.entries() {
        let prag = prag && lit.stratum.is_defeasible();
        out.entry((lit.atom.clone(), lit.polarity))
            .and_modify(|e| {
                e.stratum = e.stratum.min(lit.stratum);
                e.pragmatic |= prag;
            })
            .or_insert(Entailment { stratum: lit.stratum, pragmatic: prag });
    }
    out
}

/// The schema of an open branch: literals and provenance copied verbatim.
///
/// # Panics
/// If the branch is u-closed.
pub fn branch_to_schema(branch: &Branch) -> ModelSchema {
    ModelSchema::from_literals(branch.literals().iter().map(|(l, p)| (l.clone(), *p)))
        .expect("open branches are u-consistent")
}
