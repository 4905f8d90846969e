//! Terms, stratified literals, formulas and theories.
//!
//! Formulas are built over possibly non-ground atoms; variables only ever
//! appear under a top-level quantifier of a rule. Grounding turns every rule
//! into a finite list of quantifier-free ground formulas:
//!
//! * `forall` ranges over the theory universe, which is the set of ground
//!   terms that occur textually in the theory (closed under subterms, never
//!   under new applications);
//! * `forall_ut` only fires for substitutions whose antecedent atom occurs in
//!   some utterance. Matching is on the atom alone: the polarity and stratum of
//!   the occurrence are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub type Symbol = String;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(Symbol),
    Var(Symbol),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn constant(name: impl Into<Symbol>) -> Self {
        Term::Const(name.into())
    }

    pub fn var(name: impl Into<Symbol>) -> Self {
        Term::Var(name.into())
    }

    pub fn app(name: impl Into<Symbol>, args: Vec<Term>) -> Self {
        Term::App(name.into(), args)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Const(_) => true,
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn subst(&self, sub: &Substitution) -> Term {
        match self {
            Term::Var(v) => sub.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Const(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.subst(sub)).collect()),
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Ground subterms of `self`, including `self` when it is ground.
    fn collect_ground_subterms(&self, out: &mut BTreeSet<Term>) {
        if let Term::App(_, args) = self {
            args.iter().for_each(|a| a.collect_ground_subterms(out));
        }
        if self.is_ground() {
            out.insert(self.clone());
        }
    }

    /// One-way matching of a pattern against a ground term.
    fn match_ground(&self, ground: &Term, sub: &mut Substitution) -> bool {
        match (self, ground) {
            (Term::Var(v), _) => match sub.get(v) {
                Some(bound) => bound == ground,
                None => {
                    sub.insert(v.clone(), ground.clone());
                    true
                }
            },
            (Term::Const(a), Term::Const(b)) => a == b,
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| x.match_ground(y, sub))
            }
            _ => false,
        }
    }
}

pub type Substitution = BTreeMap<Symbol, Term>;

/// Strength layer of a literal. The derived order is the strength order
/// `U < I < D`, with `U` the strongest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stratum {
    /// Indefeasible.
    U,
    /// Infelicitously defeasible.
    I,
    /// Felicitously defeasible.
    D,
}

impl Stratum {
    pub const ALL: [Stratum; 3] = [Stratum::U, Stratum::I, Stratum::D];

    pub fn letter(self) -> char {
        match self {
            Stratum::U => 'u',
            Stratum::I => 'i',
            Stratum::D => 'd',
        }
    }

    pub fn from_letter(c: &str) -> Option<Self> {
        match c {
            "u" => Some(Stratum::U),
            "i" => Some(Stratum::I),
            "d" => Some(Stratum::D),
            _ => None,
        }
    }

    pub fn is_defeasible(self) -> bool {
        self != Stratum::U
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        }
    }
}

/// A predicate application inside a formula; its arguments may contain
/// variables bound by the enclosing rule quantifier.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: Symbol,
    pub args: Vec<Term>,
    pub stratum: Stratum,
}

impl Atom {
    pub fn new(pred: impl Into<Symbol>, args: Vec<Term>, stratum: Stratum) -> Self {
        Atom { pred: pred.into(), args, stratum }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn subst(&self, sub: &Substitution) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|a| a.subst(sub)).collect(), stratum: self.stratum }
    }

    pub fn to_ground(&self) -> Option<GroundAtom> {
        self.is_ground().then(|| GroundAtom { pred: self.pred.clone(), args: self.args.clone() })
    }
}

/// A fully ground predicate application: an element of the Herbrand base.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub pred: Symbol,
    pub args: Vec<Term>,
}

impl GroundAtom {
    /// Panics if any argument contains a variable.
    pub fn new(pred: impl Into<Symbol>, args: Vec<Term>) -> Self {
        assert!(args.iter().all(Term::is_ground), "ground atom with variable arguments");
        GroundAtom { pred: pred.into(), args }
    }

    pub fn literal(&self, polarity: Polarity, stratum: Stratum) -> StratifiedLiteral {
        StratifiedLiteral { atom: self.clone(), polarity, stratum }
    }

    /// The argument tuple rendered as `(a,f(b))`.
    pub fn tuple_string(&self) -> String {
        let args: Vec<String> = self.args.iter().map(|a| a.to_string()).collect();
        format!("({})", args.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StratifiedLiteral {
    pub atom: GroundAtom,
    pub polarity: Polarity,
    pub stratum: Stratum,
}

impl StratifiedLiteral {
    pub fn new(atom: GroundAtom, polarity: Polarity, stratum: Stratum) -> Self {
        StratifiedLiteral { atom, polarity, stratum }
    }

    pub fn complement(&self) -> Self {
        StratifiedLiteral { atom: self.atom.clone(), polarity: self.polarity.flip(), stratum: self.stratum }
    }

    pub fn is_positive(&self) -> bool {
        self.polarity == Polarity::Positive
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QuantKind {
    Forall,
    /// Utterance-triggered universal quantifier.
    ForallUt,
}

impl QuantKind {
    pub fn keyword(self) -> &'static str {
        match self {
            QuantKind::Forall => "forall",
            QuantKind::ForallUt => "forall_ut",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Quantified { kind: QuantKind, vars: Vec<Symbol>, body: Box<Formula> },
}

impl Formula {
    pub fn atom(pred: impl Into<Symbol>, args: Vec<Term>, stratum: Stratum) -> Self {
        Formula::Atom(Atom::new(pred, args, stratum))
    }

    pub fn literal(lit: &StratifiedLiteral) -> Self {
        let atom =
            Formula::Atom(Atom { pred: lit.atom.pred.clone(), args: lit.atom.args.clone(), stratum: lit.stratum });
        match lit.polarity {
            Polarity::Positive => atom,
            Polarity::Negative => atom.not(),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn forall(vars: &[&str], body: Formula) -> Self {
        Formula::Quantified {
            kind: QuantKind::Forall,
            vars: vars.iter().map(|v| v.to_string()).collect(),
            body: Box::new(body),
        }
    }

    pub fn forall_ut(vars: &[&str], body: Formula) -> Self {
        Formula::Quantified {
            kind: QuantKind::ForallUt,
            vars: vars.iter().map(|v| v.to_string()).collect(),
            body: Box::new(body),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Quantified { .. } => false,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.atoms().iter().all(|a| a.is_ground())
    }

    /// The stratified literal this formula denotes, if it is an atom or a
    /// negated ground atom.
    pub fn as_literal(&self) -> Option<StratifiedLiteral> {
        match self {
            Formula::Atom(a) => Some(a.to_ground()?.literal(Polarity::Positive, a.stratum)),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Atom(a) => Some(a.to_ground()?.literal(Polarity::Negative, a.stratum)),
                _ => None,
            },
            _ => None,
        }
    }

    /// Every atom occurrence, in textual order.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::Atom(a) => out.push(a),
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Quantified { body, .. } => body.collect_atoms(out),
        }
    }

    pub fn subst(&self, sub: &Substitution) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(a.subst(sub)),
            Formula::Not(f) => Formula::Not(Box::new(f.subst(sub))),
            Formula::And(a, b) => Formula::And(Box::new(a.subst(sub)), Box::new(b.subst(sub))),
            Formula::Or(a, b) => Formula::Or(Box::new(a.subst(sub)), Box::new(b.subst(sub))),
            Formula::Implies(a, b) => Formula::Implies(Box::new(a.subst(sub)), Box::new(b.subst(sub))),
            Formula::Quantified { kind, vars, body } => {
                let inner: Substitution =
                    sub.iter().filter(|(k, _)| !vars.contains(k)).map(|(k, v)| (k.clone(), v.clone())).collect();
                Formula::Quantified { kind: *kind, vars: vars.clone(), body: Box::new(body.subst(&inner)) }
            }
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<Symbol>) {
        for atom in self.atoms() {
            atom.args.iter().for_each(|t| t.collect_vars(out));
        }
    }
}

/// Negation normal form: negation only on atoms, implications rewritten.
pub fn nnf(formula: &Formula) -> Formula {
    nnf_signed(formula, true)
}

fn nnf_signed(formula: &Formula, positive: bool) -> Formula {
    match (formula, positive) {
        (Formula::Atom(_), true) => formula.clone(),
        (Formula::Atom(_), false) => formula.clone().not(),
        (Formula::Not(inner), _) => nnf_signed(inner, !positive),
        (Formula::And(a, b), true) => nnf_signed(a, true).and(nnf_signed(b, true)),
        (Formula::And(a, b), false) => nnf_signed(a, false).or(nnf_signed(b, false)),
        (Formula::Or(a, b), true) => nnf_signed(a, true).or(nnf_signed(b, true)),
        (Formula::Or(a, b), false) => nnf_signed(a, false).and(nnf_signed(b, false)),
        (Formula::Implies(a, b), true) => nnf_signed(a, false).or(nnf_signed(b, true)),
        (Formula::Implies(a, b), false) => nnf_signed(a, true).and(nnf_signed(b, false)),
        (Formula::Quantified { kind, vars, body }, true) => {
            Formula::Quantified { kind: *kind, vars: vars.clone(), body: Box::new(nnf(body)) }
        }
        (Formula::Quantified { kind, vars, body }, false) => {
            Formula::Quantified { kind: *kind, vars: vars.clone(), body: Box::new(nnf(body)) }.not()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{kind} `{symbol}` used with arity {found}, previously {expected}")]
    ArityMismatch { kind: &'static str, symbol: Symbol, expected: usize, found: usize },
    #[error("variable `{0}` is bound twice by the same quantifier")]
    DuplicateVariable(Symbol),
    #[error("quantified variable `{0}` does not occur in the body")]
    UnusedVariable(Symbol),
    #[error("variable `{0}` is not bound by any quantifier")]
    FreeVariable(Symbol),
    #[error("quantifiers are only allowed at the top level of a rule")]
    NestedQuantifier,
    #[error("forall_ut body must be an implication")]
    UtBodyNotImplication,
    #[error("forall_ut antecedent must be a single (possibly negated) atom")]
    UtAntecedentNotLiteral,
    #[error("forall_ut variable `{0}` does not occur in the antecedent")]
    UtVariableNotInAntecedent(Symbol),
    #[error("utterances must be ground and quantifier-free")]
    UtteranceNotGround,
}

/// Theory-wide arity table. Predicates and function symbols live in separate
/// namespaces; constants are zero-arity function symbols.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    predicates: BTreeMap<Symbol, usize>,
    functions: BTreeMap<Symbol, usize>,
}

impl Signature {
    pub fn check_formula(&mut self, formula: &Formula) -> Result<(), SyntaxError> {
        for atom in formula.atoms() {
            record(&mut self.predicates, "predicate", &atom.pred, atom.args.len())?;
            for t in &atom.args {
                self.check_term(t)?;
            }
        }
        Ok(())
    }

    fn check_term(&mut self, term: &Term) -> Result<(), SyntaxError> {
        match term {
            Term::Var(_) => Ok(()),
            Term::Const(c) => record(&mut self.functions, "function", c, 0),
            Term::App(f, args) => {
                record(&mut self.functions, "function", f, args.len())?;
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }
}

fn record(
    table: &mut BTreeMap<Symbol, usize>,
    kind: &'static str,
    symbol: &str,
    arity: usize,
) -> Result<(), SyntaxError> {
    match table.get(symbol) {
        Some(&expected) if expected != arity => {
            Err(SyntaxError::ArityMismatch { kind, symbol: symbol.to_string(), expected, found: arity })
        }
        Some(_) => Ok(()),
        None => {
            table.insert(symbol.to_string(), arity);
            Ok(())
        }
    }
}

/// Well-formedness of a rule, independent of the rest of the theory.
pub fn check_rule(rule: &Formula) -> Result<(), SyntaxError> {
    match rule {
        Formula::Quantified { kind, vars, body } => {
            if !body.is_quantifier_free() {
                return Err(SyntaxError::NestedQuantifier);
            }
            let mut seen = BTreeSet::new();
            for v in vars {
                if !seen.insert(v) {
                    return Err(SyntaxError::DuplicateVariable(v.clone()));
                }
            }
            let mut used = BTreeSet::new();
            body.collect_vars(&mut used);
            if let Some(v) = vars.iter().find(|v| !used.contains(*v)) {
                return Err(SyntaxError::UnusedVariable(v.clone()));
            }
            if let Some(free) = used.iter().find(|u| !vars.contains(u)) {
                return Err(SyntaxError::FreeVariable(free.clone()));
            }
            if *kind == QuantKind::ForallUt {
                let antecedent = ut_antecedent(body)?;
                let mut in_antecedent = BTreeSet::new();
                antecedent.args.iter().for_each(|t| t.collect_vars(&mut in_antecedent));
                if let Some(v) = vars.iter().find(|v| !in_antecedent.contains(*v)) {
                    return Err(SyntaxError::UtVariableNotInAntecedent(v.clone()));
                }
            }
            Ok(())
        }
        other => {
            if !other.is_quantifier_free() {
                return Err(SyntaxError::NestedQuantifier);
            }
            let mut used = BTreeSet::new();
            other.collect_vars(&mut used);
            match used.into_iter().next() {
                Some(v) => Err(SyntaxError::FreeVariable(v)),
                None => Ok(()),
            }
        }
    }
}

fn ut_antecedent(body: &Formula) -> Result<&Atom, SyntaxError> {
    let Formula::Implies(antecedent, _) = body else {
        return Err(SyntaxError::UtBodyNotImplication);
    };
    match antecedent.as_ref() {
        Formula::Atom(a) => Ok(a),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Atom(a) => Ok(a),
            _ => Err(SyntaxError::UtAntecedentNotLiteral),
        },
        _ => Err(SyntaxError::UtAntecedentNotLiteral),
    }
}

pub fn check_utterance(utterance: &Formula) -> Result<(), SyntaxError> {
    if utterance.is_quantifier_free() && utterance.is_ground() {
        Ok(())
    } else {
        Err(SyntaxError::UtteranceNotGround)
    }
}

/// Rules plus the ordered utterance log.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    rules: Vec<Formula>,
    utterances: Vec<Formula>,
    signature: Signature,
}

impl PartialEq for Signature {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl Eq for Signature {}

impl Theory {
    pub fn new(rules: Vec<Formula>, utterances: Vec<Formula>) -> Result<Self, SyntaxError> {
        let mut theory = Theory::default();
        for r in rules {
            theory.push_rule(r)?;
        }
        for u in utterances {
            theory.push_utterance(u)?;
        }
        Ok(theory)
    }

    pub fn rules(&self) -> &[Formula] {
        &self.rules
    }

    pub fn utterances(&self) -> &[Formula] {
        &self.utterances
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty() && self.utterances.is_empty()
    }

    pub fn push_rule(&mut self, rule: Formula) -> Result<(), SyntaxError> {
        check_rule(&rule)?;
        let mut sig = self.signature.clone();
        sig.check_formula(&rule)?;
        self.signature = sig;
        self.rules.push(rule);
        Ok(())
    }

    pub fn push_utterance(&mut self, utterance: Formula) -> Result<(), SyntaxError> {
        check_utterance(&utterance)?;
        let mut sig = self.signature.clone();
        sig.check_formula(&utterance)?;
        self.signature = sig;
        self.utterances.push(utterance);
        Ok(())
    }

    /// Same rules, no utterances.
    pub fn rules_only(&self) -> Theory {
        Theory { rules: self.rules.clone(), utterances: Vec::new(), signature: self.signature.clone() }
    }

    fn all_formulas(&self) -> impl Iterator<Item = &Formula> {
        self.rules.iter().chain(self.utterances.iter())
    }
}

/// Ground terms occurring anywhere in the theory, closed under subterms.
pub fn herbrand_universe(theory: &Theory) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    for f in theory.all_formulas() {
        for atom in f.atoms() {
            atom.args.iter().for_each(|t| t.collect_ground_subterms(&mut out));
        }
    }
    out
}

/// Ground atoms occurring in the utterance log, regardless of sign or stratum.
pub fn uttered_atoms(theory: &Theory) -> BTreeSet<GroundAtom> {
    theory.utterances.iter().flat_map(|u| u.atoms()).filter_map(Atom::to_ground).collect()
}

/// Ground instances of a rule, sorted and without duplicates.
pub fn ground_instances(rule: &Formula, theory: &Theory) -> Vec<Formula> {
    let mut out = BTreeSet::new();
    match rule {
        Formula::Quantified { kind: QuantKind::Forall, vars, body } => {
            let universe: Vec<Term> = herbrand_universe(theory).into_iter().collect();
            if !universe.is_empty() {
                let mut idx = vec![0usize; vars.len()];
                loop {
                    let sub: Substitution =
                        vars.iter().cloned().zip(idx.iter().map(|&i| universe[i].clone())).collect();
                    out.insert(body.subst(&sub));
                    if !advance(&mut idx, universe.len()) {
                        break;
                    }
                }
            }
        }
        Formula::Quantified { kind: QuantKind::ForallUt, vars, body } => {
            if let Ok(pattern) = ut_antecedent(body) {
                for atom in uttered_atoms(theory) {
                    if atom.pred != pattern.pred || atom.args.len() != pattern.args.len() {
                        continue;
                    }
                    let mut sub = Substitution::new();
                    let matched = pattern.args.iter().zip(&atom.args).all(|(p, g)| p.match_ground(g, &mut sub));
                    if matched && vars.iter().all(|v| sub.contains_key(v)) {
                        out.insert(body.subst(&sub));
                    }
                }
            }
        }
        other => {
            out.insert(other.clone());
        }
    }
    out.into_iter().collect()
}

fn advance(idx: &mut [usize], base: usize) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < base {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// Where a ground formula of the expanded theory came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    Utterance(usize),
    Rule { index: usize, kind: Option<QuantKind> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundFormula {
    pub formula: Formula,
    pub origin: Origin,
}

impl GroundFormula {
    /// True for instances of `forall_ut` rules, whose consequents carry
    /// pragmatic provenance.
    pub fn is_pragmatic(&self) -> bool {
        matches!(self.origin, Origin::Rule { kind: Some(QuantKind::ForallUt), .. })
    }
}

/// Utterances in log order followed by the ground instances of every rule,
/// in rule order.
pub fn ground_theory(theory: &Theory) -> Vec<GroundFormula> {
    let mut out: Vec<GroundFormula> = theory
        .utterances
        .iter()
        .enumerate()
        .map(|(i, u)| GroundFormula { formula: u.clone(), origin: Origin::Utterance(i) })
        .collect();
    for (index, rule) in theory.rules.iter().enumerate() {
        let kind = match rule {
            Formula::Quantified { kind, .. } => Some(*kind),
            _ => None,
        };
        out.extend(
            ground_instances(rule, theory)
                .into_iter()
                .map(|formula| GroundFormula { formula, origin: Origin::Rule { index, kind } }),
        );
    }
    out
}

// Printing. The output is accepted by the parser and round-trips.

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) | Term::Var(c) => write!(f, "{c}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                write!(f, ")")
            }
        }
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

fn write_application(f: &mut fmt::Formatter<'_>, pred: &str, stratum: Stratum, args: &[Term]) -> fmt::Result {
    write!(f, "{pred}^{stratum}")?;
    if !args.is_empty() {
        write!(f, "(")?;
        write_list(f, args)?;
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_application(f, &self.pred, self.stratum, &self.args)
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            write_list(f, &self.args)?;
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for StratifiedLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.polarity == Polarity::Negative {
            write!(f, "~")?;
        }
        write_application(f, &self.atom.pred, self.stratum, &self.atom.args)
    }
}

// Binding strength: `->` 1, `|` 2, `&` 3, unary and primaries 4.
fn precedence(formula: &Formula) -> u8 {
    match formula {
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        Formula::Not(_) | Formula::Atom(_) | Formula::Quantified { .. } => 4,
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, formula: &Formula, min: u8) -> fmt::Result {
    if precedence(formula) < min {
        write!(f, "({formula})")
    } else {
        write!(f, "{formula}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(inner) => {
                write!(f, "~")?;
                write_operand(f, inner, 4)
            }
            Formula::And(a, b) => {
                write_operand(f, a, 3)?;
                write!(f, " & ")?;
                write_operand(f, b, 4)
            }
            Formula::Or(a, b) => {
                write_operand(f, a, 2)?;
                write!(f, " | ")?;
                write_operand(f, b, 3)
            }
            Formula::Implies(a, b) => {
                write_operand(f, a, 2)?;
                write!(f, " -> ")?;
                write_operand(f, b, 1)
            }
            Formula::Quantified { kind, vars, body } => {
                write!(f, "{} {} ({body})", kind.keyword(), vars.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(name: &str) -> Term {
        Term::constant(name)
    }

    fn come(y: Term, z: Term) -> Term {
        Term::app("come", vec![y, z])
    }

    fn regret_rules() -> (Formula, Formula) {
        let regrets = |s| Formula::atom("regrets", vec![Term::var("x"), come(Term::var("y"), Term::var("z"))], s);
        let come_at = |s| Formula::atom("come", vec![Term::var("y"), Term::var("z")], s);
        let positive = Formula::forall_ut(&["x", "y", "z"], regrets(Stratum::U).implies(come_at(Stratum::I)));
        let negative = Formula::forall_ut(&["x", "y", "z"], regrets(Stratum::U).not().implies(come_at(Stratum::D)));
        (positive, negative)
    }

    fn regret_theory() -> Theory {
        let (pos, neg) = regret_rules();
        let utterance = Formula::atom("regrets", vec![c("john"), come(c("mary"), c("party"))], Stratum::U).not();
        Theory::new(vec![pos, neg], vec![utterance]).unwrap()
    }

    #[test]
    fn universe_of_regret_theory() {
        let universe = herbrand_universe(&regret_theory());
        let expected: BTreeSet<Term> =
            [c("john"), c("mary"), c("party"), come(c("mary"), c("party"))].into_iter().collect();
        assert_eq!(universe, expected);
    }

    #[test]
    fn universe_of_empty_theory() {
        assert!(herbrand_universe(&Theory::default()).is_empty());
    }

    #[test]
    fn ut_rules_fire_on_either_sign_of_the_uttered_atom() {
        let theory = regret_theory();
        for rule in theory.rules() {
            let instances = ground_instances(rule, &theory);
            assert_eq!(instances.len(), 1, "{rule}");
            assert!(instances[0].is_ground());
        }
        let (_, neg) = regret_rules();
        let inst = &ground_instances(&neg, &theory)[0];
        assert_eq!(inst.to_string(), "~regrets^u(john,come(mary,party)) -> come^d(mary,party)");
    }

    #[test]
    fn ut_rules_without_utterances_do_not_fire() {
        let (pos, neg) = regret_rules();
        let theory = Theory::new(vec![pos.clone(), neg], vec![]).unwrap();
        assert!(ground_instances(&pos, &theory).is_empty());
    }

    #[test]
    fn forall_ranges_over_whole_universe() {
        let rule = Formula::forall(
            &["x"],
            Formula::atom("p", vec![Term::var("x")], Stratum::U).implies(Formula::atom(
                "q",
                vec![Term::var("x")],
                Stratum::D,
            )),
        );
        let u = Formula::atom("p", vec![c("a")], Stratum::U).and(Formula::atom("r", vec![c("b")], Stratum::U));
        let theory = Theory::new(vec![rule.clone()], vec![u]).unwrap();
        assert_eq!(ground_instances(&rule, &theory).len(), 2);
    }

    #[test]
    fn nnf_examples() {
        let p = |s| Formula::atom("p", vec![], s);
        let q = |s| Formula::atom("q", vec![], s);
        assert_eq!(nnf(&p(Stratum::U).and(q(Stratum::D)).not()), p(Stratum::U).not().or(q(Stratum::D).not()));
        assert_eq!(nnf(&p(Stratum::I).not().not()), p(Stratum::I));
        assert_eq!(nnf(&p(Stratum::U).implies(q(Stratum::D))), p(Stratum::U).not().or(q(Stratum::D)));
    }

    #[test]
    fn construction_errors() {
        let px = Formula::atom("p", vec![Term::var("x")], Stratum::U);
        let qx = Formula::atom("q", vec![Term::var("x")], Stratum::U);
        assert_eq!(
            check_rule(&Formula::forall_ut(&["x"], px.clone().and(qx.clone()))),
            Err(SyntaxError::UtBodyNotImplication)
        );
        assert_eq!(
            check_rule(&Formula::forall(&["x", "x"], px.clone())),
            Err(SyntaxError::DuplicateVariable("x".into()))
        );
        assert_eq!(check_rule(&Formula::forall(&["x", "y"], px.clone())), Err(SyntaxError::UnusedVariable("y".into())));
        assert_eq!(
            check_rule(&Formula::forall_ut(&["x"], px.clone().and(qx.clone()).implies(qx.clone()))),
            Err(SyntaxError::UtAntecedentNotLiteral)
        );
        let arity = Theory::new(
            vec![Formula::atom("p", vec![c("a")], Stratum::U)],
            vec![Formula::atom("p", vec![c("a"), c("b")], Stratum::U)],
        );
        assert!(matches!(arity, Err(SyntaxError::ArityMismatch { kind: "predicate", .. })));
        let fn_arity = Theory::new(
            vec![Formula::atom("p", vec![c("a")], Stratum::U)],
            vec![Formula::atom("p", vec![Term::app("a", vec![c("b")])], Stratum::U)],
        );
        assert!(matches!(fn_arity, Err(SyntaxError::ArityMismatch { kind: "function", .. })));
        assert_eq!(Theory::new(vec![], vec![px]).unwrap_err(), SyntaxError::UtteranceNotGround);
    }

    #[test]
    fn stratum_order_is_strength_order() {
        assert!(Stratum::U < Stratum::I && Stratum::I < Stratum::D);
    }

    #[test]
    fn printing_uses_minimal_parentheses() {
        let p = Formula::atom("p", vec![c("a")], Stratum::U);
        let q = Formula::atom("q", vec![], Stratum::D);
        let f = p.clone().or(q.clone()).and(p.clone().not()).implies(q.clone().implies(p.clone()));
        assert_eq!(f.to_string(), "(p^u(a) | q^d) & ~p^u(a) -> q^d -> p^u(a)");
        let g = p.clone().implies(q.clone()).implies(p.clone());
        assert_eq!(g.to_string(), "(p^u(a) -> q^d) -> p^u(a)");
    }
}
