//! The optimism preorder on model schemata.
//!
//! `m0 <= m1` (m0 is at least as optimistic) when m0 has strictly fewer
//! cancelled defeasible literals than m1, or exactly the same ones and every
//! signed atom m0 asserts is asserted by m1 at an equal or stronger stratum.
//! A cancelled literal is an `i` or `d` literal whose atom also occurs with the
//! opposite polarity, at any stratum, in the same schema.
//!
//! On equal cancellation sets the second clause prefers schemata that assert
//! the same content more defeasibly, and also schemata that assert less.
//! Proper literal subsets therefore always compare `<=`, so optimistic schemata
//! are always subset-minimal.

use std::collections::{BTreeMap, BTreeSet};

use crate::schema::ModelSchema;
use crate::syntax::{GroundAtom, Polarity, StratifiedLiteral, Stratum};
use crate::EngineError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderResult {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl OrderResult {
    pub fn reverse(self) -> Self {
        match self {
            OrderResult::Less => OrderResult::Greater,
            OrderResult::Greater => OrderResult::Less,
            other => other,
        }
    }
}

/// Defeasible literals of `schema` contradicted inside the same schema.
pub fn cancelled_literals(schema: &ModelSchema) -> BTreeSet<StratifiedLiteral> {
    let signed: BTreeSet<(&GroundAtom, Polarity)> = schema.literals().map(|l| (&l.atom, l.polarity)).collect();
    schema
        .literals()
        .filter(|l| l.stratum.is_defeasible() && signed.contains(&(&l.atom, l.polarity.flip())))
        .cloned()
        .collect()
}

fn strongest(schema: &ModelSchema) -> BTreeMap<(&GroundAtom, Polarity), Stratum> {
    let mut out: BTreeMap<(&GroundAtom, Polarity), Stratum> = BTreeMap::new();
    for l in schema.literals() {
        out.entry((&l.atom, l.polarity)).and_modify(|s| *s = (*s).min(l.stratum)).or_insert(l.stratum);
    }
    out
}

/// Every signed atom of `m0` is asserted by `m1` at least as strongly.
fn covered_by(m0: &ModelSchema, m1: &ModelSchema) -> bool {
    let s1 = strongest(m1);
    strongest(m0).into_iter().all(|(key, s0)| s1.get(&key).is_some_and(|&s| s <= s0))
}

fn at_most(m0: &ModelSchema, m1: &ModelSchema) -> bool {
    let (c0, c1) = (cancelled_literals(m0), cancelled_literals(m1));
    if c0 != c1 {
        return c0.is_subset(&c1);
    }
    covered_by(m0, m1)
}

pub fn leq(m0: &ModelSchema, m1: &ModelSchema) -> OrderResult {
    match (at_most(m0, m1), at_most(m1, m0)) {
        (true, true) => OrderResult::Equal,
        (true, false) => OrderResult::Less,
        (false, true) => OrderResult::Greater,
        (false, false) => OrderResult::Incomparable,
    }
}

/// Minimal schemata under `leq`, one per equivalence class. The class
/// representative is the member with the fewest literals, ties broken by
/// literal order. Identical literal sets are merged with their provenance
/// unioned. The result is sorted.
pub fn optimistic(schemata: &[ModelSchema]) -> Result<Vec<ModelSchema>, EngineError> {
    if schemata.is_empty() {
        return Err(EngineError::EmptySchemata);
    }
    let mut merged: BTreeMap<BTreeSet<StratifiedLiteral>, ModelSchema> = BTreeMap::new();
    for s in schemata {
        merged
            .entry(s.literal_set())
            .and_modify(|m| {
                *m = ModelSchema::from_literals(m.entries().chain(s.entries()).map(|(l, p)| (l.clone(), p)))
                    .expect("same literals, same consistency")
            })
            .or_insert_with(|| s.clone());
    }
    let distinct: Vec<ModelSchema> = merged.into_values().collect();
    let minimal: Vec<&ModelSchema> =
        distinct.iter().filter(|m| !distinct.iter().any(|other| leq(other, m) == OrderResult::Less)).collect();
    let mut reps: Vec<&ModelSchema> = Vec::new();
    for m in minimal {
        match reps.iter_mut().find(|r| leq(r, m) == OrderResult::Equal) {
            Some(r) => {
                if (m.len(), m.literal_set()) < (r.len(), r.literal_set()) {
                    *r = m;
                }
            }
            None => reps.push(m),
        }
    }
    let mut out: Vec<ModelSchema> = reps.into_iter().cloned().collect();
    out.sort_by_key(|m| m.literal_set());
    Ok(out)
}
