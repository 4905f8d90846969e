//! Brute-force reference pipeline for small theories.
//!
//! Instead of a tableau, the oracle enumerates sets of stratified literals in
//! order of increasing size and keeps the minimal u-consistent ones under
//! which every ground formula holds. A literal `p^x(t)` holds iff it is in the
//! set, and `~p^x(t)` holds iff the negative literal is. Ordering and the
//! inference criterion are re-implemented here by direct quantification over
//! literals, so the differential check exercises independent code.
//!
//! Only literals that occur (with their polarity after pushing negations
//! inward) in some ground formula are enumerated. A minimal model never holds
//! any other literal.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::pragmatics::{analyze, Cancellation, Inference, InferenceReport};
use crate::schema::ModelSchema;
use crate::syntax::{ground_theory, Atom, Formula, GroundAtom, Polarity, StratifiedLiteral, Stratum, Term, Theory};
use crate::tableau::Caps;
use crate::EngineError;

pub const DEFAULT_ATOM_CAP: usize = 12;
pub const SLOT_CAP: usize = 24;

/// The ground atoms a theory talks about.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomBase {
    pub atoms: Vec<GroundAtom>,
}

impl AtomBase {
    pub fn of_theory(theory: &Theory) -> Self {
        let atoms: BTreeSet<GroundAtom> = ground_theory(theory)
            .iter()
            .flat_map(|g| g.formula.atoms().into_iter().filter_map(Atom::to_ground).collect::<Vec<_>>())
            .collect();
        AtomBase { atoms: atoms.into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

fn ground_literal(atom: &Atom, positive: bool) -> StratifiedLiteral {
    let polarity = if positive { Polarity::Positive } else { Polarity::Negative };
    let ground = atom.to_ground().expect("ground formula");
    ground.literal(polarity, atom.stratum)
}

/// Literals that can become true in `f` read with sign `positive`.
fn occurrences(f: &Formula, positive: bool, out: &mut BTreeSet<StratifiedLiteral>) {
    match f {
        Formula::Atom(a) => {
            out.insert(ground_literal(a, positive));
        }
        Formula::Not(g) => occurrences(g, !positive, out),
        Formula::And(a, b) | Formula::Or(a, b) => {
            occurrences(a, positive, out);
            occurrences(b, positive, out);
        }
        Formula::Implies(a, b) => {
            occurrences(a, !positive, out);
            occurrences(b, positive, out);
        }
        Formula::Quantified { .. } => unreachable!("ground formulas are quantifier-free"),
    }
}

/// Membership truth of `f` (or of its negation when `positive` is false).
fn holds(f: &Formula, positive: bool, model: &dyn Fn(&StratifiedLiteral) -> bool) -> bool {
    match f {
        Formula::Atom(a) => model(&ground_literal(a, positive)),
        Formula::Not(g) => holds(g, !positive, model),
        Formula::And(a, b) if positive => holds(a, true, model) && holds(b, true, model),
        Formula::And(a, b) => holds(a, false, model) || holds(b, false, model),
        Formula::Or(a, b) if positive => holds(a, true, model) || holds(b, true, model),
        Formula::Or(a, b) => holds(a, false, model) && holds(b, false, model),
        Formula::Implies(a, b) if positive => holds(a, false, model) || holds(b, true, model),
        Formula::Implies(a, b) => holds(a, true, model) && holds(b, false, model),
        Formula::Quantified { .. } => unreachable!("ground formulas are quantifier-free"),
    }
}

/// Disjunctive-normal-form terms of `f` read with sign `positive`.
fn terms(f: &Formula, positive: bool) -> Vec<BTreeSet<StratifiedLiteral>> {
    let product = |xs: Vec<BTreeSet<StratifiedLiteral>>, ys: Vec<BTreeSet<StratifiedLiteral>>| {
        let mut out = Vec::new();
        for x in &xs {
            for y in &ys {
                out.push(x.union(y).cloned().collect());
            }
        }
        out
    };
    match f {
        Formula::Atom(a) => vec![[ground_literal(a, positive)].into()],
        Formula::Not(g) => terms(g, !positive),
        Formula::And(a, b) if positive => product(terms(a, true), terms(b, true)),
        Formula::Or(a, b) if !positive => product(terms(a, false), terms(b, false)),
        Formula::Implies(a, b) if !positive => product(terms(a, true), terms(b, false)),
        Formula::And(a, b) => [terms(a, false), terms(b, false)].concat(),
        Formula::Or(a, b) => [terms(a, true), terms(b, true)].concat(),
        Formula::Implies(a, b) => [terms(a, false), terms(b, true)].concat(),
        Formula::Quantified { .. } => unreachable!("ground formulas are quantifier-free"),
    }
}

/// Next integer with the same number of set bits.
fn next_same_popcount(v: u64) -> u64 {
    let t = v | (v - 1);
    (t + 1) | (((!t & (!t).wrapping_neg()) - 1) >> (v.trailing_zeros() + 1))
}

/// All minimal literal sets satisfying the theory, with provenance.
pub fn enumerate_schemata(theory: &Theory, base: &AtomBase) -> Result<Vec<ModelSchema>, EngineError> {
    if base.len() > DEFAULT_ATOM_CAP {
        return Err(EngineError::AtomCap { found: base.len(), cap: DEFAULT_ATOM_CAP });
    }
    let ground = ground_theory(theory);
    let in_base: BTreeSet<&GroundAtom> = base.atoms.iter().collect();
    let mut slots = BTreeSet::new();
    for g in &ground {
        occurrences(&g.formula, true, &mut slots);
    }
    let slots: Vec<StratifiedLiteral> = slots.into_iter().filter(|l| in_base.contains(&l.atom)).collect();
    let n = slots.len();
    if n > SLOT_CAP {
        return Err(EngineError::SlotCap { found: n, cap: SLOT_CAP });
    }
    let index: BTreeMap<&StratifiedLiteral, usize> = slots.iter().enumerate().map(|(i, l)| (l, i)).collect();

    let mut found: Vec<u64> = Vec::new();
    for size in 0..=n {
        let mut mask: u64 = if size == 0 { 0 } else { (1u64 << size) - 1 };
        loop {
            if !found.iter().any(|&f| f & !mask == 0) {
                let model = |l: &StratifiedLiteral| index.get(l).is_some_and(|&i| mask >> i & 1 == 1);
                let consistent = slots.iter().enumerate().all(|(i, l)| {
                    !(mask >> i & 1 == 1 && l.stratum == Stratum::U && l.is_positive() && model(&l.complement()))
                });
                if consistent && ground.iter().all(|g| holds(&g.formula, true, &model)) {
                    found.push(mask);
                }
            }
            if size == 0 || size == n {
                break;
            }
            mask = next_same_popcount(mask);
            if mask >> n != 0 {
                break;
            }
        }
    }

    let mut out = Vec::new();
    for mask in found {
        let members: BTreeSet<StratifiedLiteral> =
            (0..n).filter(|i| mask >> i & 1 == 1).map(|i| slots[i].clone()).collect();
        let mut pragmatic: BTreeSet<StratifiedLiteral> = BTreeSet::new();
        for g in ground.iter().filter(|g| g.is_pragmatic()) {
            let Formula::Implies(_, consequent) = &g.formula else { continue };
            for term in terms(consequent, true) {
                if term.is_subset(&members) {
                    pragmatic.extend(term);
                }
            }
        }
        let schema = ModelSchema::from_literals(members.iter().map(|l| (l.clone(), pragmatic.contains(l))))
            .expect("enumeration keeps u-consistent sets only");
        out.push(schema);
    }
    out.sort();
    Ok(out)
}

fn naive_cancelled(m: &ModelSchema) -> BTreeSet<StratifiedLiteral> {
    let mut out = BTreeSet::new();
    for l in m.literals() {
        if l.stratum != Stratum::U && m.literals().any(|k| k.atom == l.atom && k.polarity != l.polarity) {
            out.insert(l.clone());
        }
    }
    out
}

fn naive_leq(a: &ModelSchema, b: &ModelSchema) -> bool {
    let (ca, cb) = (naive_cancelled(a), naive_cancelled(b));
    let strict_subset = ca.len() < cb.len() && ca.iter().all(|l| cb.contains(l));
    if strict_subset {
        return true;
    }
    ca == cb
        && a.literals()
            .all(|l| b.literals().any(|k| k.atom == l.atom && k.polarity == l.polarity && k.stratum <= l.stratum))
}

fn naive_optimistic(models: &[ModelSchema]) -> Vec<ModelSchema> {
    let minimal: Vec<&ModelSchema> =
        models.iter().filter(|m| !models.iter().any(|o| naive_leq(o, m) && !naive_leq(m, o))).collect();
    let mut out: Vec<ModelSchema> = Vec::new();
    for m in &minimal {
        let class: Vec<&&ModelSchema> = minimal.iter().filter(|o| naive_leq(o, m) && naive_leq(m, o)).collect();
        let rep = class.iter().min_by_key(|o| (o.len(), o.literal_set())).expect("class contains m");
        if !out.contains(rep) {
            out.push((**rep).clone());
        }
    }
    out.sort_by_key(|m| m.literal_set());
    out
}

fn naive_report(optimistic: &[ModelSchema], schema_count: usize) -> InferenceReport {
    let mut inferences = BTreeSet::new();
    let mut cancelled = BTreeSet::new();
    let all: Vec<&StratifiedLiteral> = optimistic.iter().flat_map(|m| m.literals()).collect();
    for m in optimistic {
        for (l, prag) in m.entries() {
            if !prag || l.stratum == Stratum::U {
                continue;
            }
            let stratum = optimistic
                .iter()
                .flat_map(|o| o.entries())
                .filter(|(k, p)| *p && k.stratum != Stratum::U && k.atom == l.atom && k.polarity == l.polarity)
                .map(|(k, _)| k.stratum)
                .min()
                .expect("l itself qualifies");
            let opposite: Vec<&&StratifiedLiteral> =
                all.iter().filter(|k| k.atom == l.atom && k.polarity != l.polarity).collect();
            match opposite.iter().map(|k| k.stratum).min() {
                None => {
                    inferences.insert(Inference { atom: l.atom.clone(), polarity: l.polarity, stratum });
                }
                Some(strongest) => {
                    cancelled.insert(Cancellation {
                        atom: l.atom.clone(),
                        polarity: l.polarity,
                        defeater: l.atom.literal(l.polarity.flip(), strongest),
                    });
                }
            }
        }
    }
    InferenceReport {
        inferences: inferences.into_iter().collect(),
        cancelled: cancelled.into_iter().collect(),
        optimistic_count: optimistic.len(),
        schema_count,
    }
}

/// Result of the oracle pipeline.
#[derive(Clone, Debug)]
pub struct OracleAnalysis {
    pub minimal: Vec<ModelSchema>,
    pub optimistic: Vec<ModelSchema>,
    pub report: InferenceReport,
}

pub fn oracle_analyze(theory: &Theory) -> Result<OracleAnalysis, EngineError> {
    let minimal = enumerate_schemata(theory, &AtomBase::of_theory(theory))?;
    if minimal.is_empty() {
        return Err(EngineError::Inconsistent);
    }
    let optimistic = naive_optimistic(&minimal);
    let report = naive_report(&optimistic, minimal.len());
    Ok(OracleAnalysis { minimal, optimistic, report })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialReport {
    /// First disagreement, with both artifacts serialized.
    pub divergence: Option<String>,
}

impl DifferentialReport {
    pub fn agrees(&self) -> bool {
        self.divergence.is_none()
    }
}

fn schemata_json(schemata: &[ModelSchema]) -> String {
    Value::Array(schemata.iter().map(ModelSchema::to_json).collect()).to_string()
}

/// Runs both pipelines and compares optimistic schemata (with provenance),
/// inferences, cancellations and optimistic counts. Schema counts differ by
/// design (the tableau keeps non-minimal branches) and are not compared.
pub fn differential_check(theory: &Theory, caps: Caps) -> Result<DifferentialReport, EngineError> {
    let tableau = analyze(theory, caps);
    let oracle = oracle_analyze(theory);
    for side in [tableau.as_ref().err(), oracle.as_ref().err()].into_iter().flatten() {
        if *side != EngineError::Inconsistent {
            return Err(side.clone());
        }
    }
    let divergence = match (tableau, oracle) {
        (Err(_), Err(_)) => None,
        (Err(_), Ok(o)) => Some(format!("tableau: u-inconsistent\noracle: {}", schemata_json(&o.minimal))),
        (Ok(t), Err(_)) => Some(format!("tableau: {}\noracle: u-inconsistent", schemata_json(&t.schemata))),
        (Ok(t), Ok(o)) => {
            if t.optimistic != o.optimistic {
                Some(format!(
                    "optimistic schemata differ\ntableau: {}\noracle: {}",
                    schemata_json(&t.optimistic),
                    schemata_json(&o.optimistic)
                ))
            } else {
                let (mut a, mut b) = (t.report.to_json(), o.report.to_json());
                a["schema_count"] = Value::Null;
                b["schema_count"] = Value::Null;
                (a != b).then(|| format!("reports differ\ntableau: {a}\noracle: {b}"))
            }
        }
    };
    Ok(DifferentialReport { divergence })
}

const PREDICATES: [&str; 3] = ["p", "q", "r"];

fn random_stratum(rng: &mut ChaCha8Rng) -> Stratum {
    match rng.gen_range(0..4) {
        0 | 1 => Stratum::U,
        2 => Stratum::I,
        _ => Stratum::D,
    }
}

fn random_literal(rng: &mut ChaCha8Rng, arg: &Term) -> Formula {
    let pred = PREDICATES[rng.gen_range(0..PREDICATES.len())];
    let atom = Formula::atom(pred, vec![arg.clone()], random_stratum(rng));
    if rng.gen_bool(0.5) {
        atom.not()
    } else {
        atom
    }
}

fn random_formula(rng: &mut ChaCha8Rng, depth: u32, args: &[Term]) -> Formula {
    if depth == 0 || rng.gen_bool(0.4) {
        let arg = &args[rng.gen_range(0..args.len())];
        return random_literal(rng, arg);
    }
    let a = random_formula(rng, depth - 1, args);
    match rng.gen_range(0..4) {
        0 => a.not(),
        1 => a.and(random_formula(rng, depth - 1, args)),
        2 => a.or(random_formula(rng, depth - 1, args)),
        _ => a.implies(random_formula(rng, depth - 1, args)),
    }
}

/// A small random theory over the unary predicates `p`, `q`, `r` and the
/// single constant `a`: at most four rules (ground, `forall x` or
/// `forall_ut x`) and one or two utterances.
pub fn random_theory(seed: u64) -> Theory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Term::constant("a");
    let x = Term::var("x");
    let mut rules = Vec::new();
    for _ in 0..rng.gen_range(0..=4) {
        let rule = match rng.gen_range(0..4) {
            0 => random_formula(&mut rng, 2, std::slice::from_ref(&a)),
            kind => {
                let antecedent = random_literal(&mut rng, &x);
                let consequent = random_formula(&mut rng, 2, &[x.clone(), a.clone()]);
                let body = antecedent.implies(consequent);
                if kind == 1 {
                    Formula::forall(&["x"], body)
                } else {
                    Formula::forall_ut(&["x"], body)
                }
            }
        };
        rules.push(rule);
    }
    let utterances = (0..rng.gen_range(1..=2)).map(|_| random_formula(&mut rng, 1, std::slice::from_ref(&a))).collect();
    Theory::new(rules, utterances).expect("generated theories are well-formed")
}
