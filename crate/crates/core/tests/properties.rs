//! Property tests for grounding, normal forms, satisfaction, ordering and
//! reports.

use std::collections::BTreeSet;

use proptest::prelude::*;
use stratlog::oracle::random_theory;
use stratlog::ordering::{leq, optimistic, OrderResult};
use stratlog::parser::{format_schema, parse_formula};
use stratlog::pragmatics::{analyze, infer, Session};
use stratlog::schema::{branch_to_schema, satisfies, satisfies_formula, satisfies_theory};
use stratlog::syntax::{
    ground_instances, herbrand_universe, nnf, Formula, GroundAtom, Polarity, QuantKind, StratifiedLiteral, Stratum,
    Term, Theory,
};
use stratlog::{Caps, ModelSchema};

fn stratum() -> impl Strategy<Value = Stratum> {
    prop_oneof![Just(Stratum::U), Just(Stratum::I), Just(Stratum::D)]
}

fn polarity() -> impl Strategy<Value = Polarity> {
    prop_oneof![Just(Polarity::Positive), Just(Polarity::Negative)]
}

fn ground_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        Just(Term::constant("a")),
        Just(Term::constant("b")),
        Just(Term::app("f", vec![Term::constant("a")])),
        Just(Term::app("g", vec![Term::constant("b"), Term::app("f", vec![Term::constant("a")])])),
    ]
}

fn ground_atom() -> impl Strategy<Value = GroundAtom> {
    (prop_oneof![Just("p"), Just("q"), Just("r")], ground_term()).prop_map(|(p, t)| GroundAtom::new(p, vec![t]))
}

fn literal_formula(arg: BoxedStrategy<Term>) -> impl Strategy<Value = Formula> {
    (prop_oneof![Just("p"), Just("q"), Just("r")], arg, stratum(), any::<bool>()).prop_map(|(p, t, s, neg)| {
        let atom = Formula::atom(p, vec![t], s);
        if neg {
            atom.not()
        } else {
            atom
        }
    })
}

fn formula_over(arg: BoxedStrategy<Term>) -> impl Strategy<Value = Formula> {
    literal_formula(arg).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.implies(b)),
        ]
    })
}

fn ground_formula() -> impl Strategy<Value = Formula> {
    formula_over(ground_term().boxed())
}

/// `forall_ut x (lit(x) -> body)` where the body may mention `x`.
fn ut_rule() -> impl Strategy<Value = Formula> {
    let x_or_ground = prop_oneof![Just(Term::var("x")), ground_term()].boxed();
    (literal_formula(Just(Term::var("x")).boxed()), formula_over(x_or_ground))
        .prop_map(|(antecedent, body)| Formula::forall_ut(&["x"], antecedent.implies(body)))
}

fn schema() -> impl Strategy<Value = ModelSchema> {
    let atoms = [
        GroundAtom::new("p", vec![Term::constant("a")]),
        GroundAtom::new("q", vec![Term::constant("a")]),
        GroundAtom::new("p", vec![Term::constant("b")]),
    ];
    prop::collection::vec((0..atoms.len(), polarity(), stratum(), any::<bool>()), 0..7).prop_map(move |items| {
        let mut lits: Vec<(StratifiedLiteral, bool)> =
            items.into_iter().map(|(i, pol, s, prag)| (atoms[i].literal(pol, s), prag)).collect();
        let negative_u: BTreeSet<StratifiedLiteral> = lits
            .iter()
            .filter(|(l, _)| l.stratum == Stratum::U && !l.is_positive())
            .map(|(l, _)| l.complement())
            .collect();
        lits.retain(|(l, _)| !negative_u.contains(l));
        ModelSchema::from_literals(lits).expect("u-collisions removed")
    })
}

/// Signed recursive evaluation of the unnormalised formula, literal truth
/// taken from the level-indexed literal relation.
fn truth_table(schema: &ModelSchema, f: &Formula, positive: bool, level: Stratum) -> bool {
    match f {
        Formula::Atom(_) => {
            let lit = f.as_literal().unwrap();
            let lit = if positive { lit } else { lit.complement() };
            satisfies(schema, &lit, level)
        }
        Formula::Not(g) => truth_table(schema, g, !positive, level),
        Formula::And(a, b) if positive => truth_table(schema, a, true, level) && truth_table(schema, b, true, level),
        Formula::And(a, b) => truth_table(schema, a, false, level) || truth_table(schema, b, false, level),
        Formula::Or(a, b) if positive => truth_table(schema, a, true, level) || truth_table(schema, b, true, level),
        Formula::Or(a, b) => truth_table(schema, a, false, level) && truth_table(schema, b, false, level),
        Formula::Implies(a, b) if positive => {
            truth_table(schema, a, false, level) || truth_table(schema, b, true, level)
        }
        Formula::Implies(a, b) => truth_table(schema, a, true, level) && truth_table(schema, b, false, level),
        Formula::Quantified { .. } => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn nnf_is_idempotent(f in ground_formula()) {
        let once = nnf(&f);
        prop_assert_eq!(nnf(&once), once);
    }

    #[test]
    fn print_parse_round_trip(f in ground_formula()) {
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn print_parse_round_trip_for_rules(rule in ut_rule()) {
        prop_assert_eq!(parse_formula(&rule.to_string()).unwrap(), rule);
    }

    #[test]
    fn universe_is_monotone(us in prop::collection::vec(ground_formula(), 0..4), extra in ground_formula()) {
        let before = Theory::new(vec![], us.clone()).unwrap();
        let mut after = before.clone();
        after.push_utterance(extra).unwrap();
        prop_assert!(herbrand_universe(&before).is_subset(&herbrand_universe(&after)));
    }

    #[test]
    fn ut_instances_are_forall_instances(
        rule in ut_rule(),
        us in prop::collection::vec(ground_formula(), 0..4),
    ) {
        let Formula::Quantified { vars, body, .. } = rule.clone() else { unreachable!() };
        let forall = Formula::Quantified { kind: QuantKind::Forall, vars, body };
        let theory = Theory::new(vec![rule.clone(), forall.clone()], us).unwrap();
        let ut: BTreeSet<Formula> = ground_instances(&rule, &theory).into_iter().collect();
        let all: BTreeSet<Formula> = ground_instances(&forall, &theory).into_iter().collect();
        prop_assert!(ut.is_subset(&all));
        prop_assert!(all.iter().all(|f| f.is_ground() && f.is_quantifier_free()));
    }

    #[test]
    fn satisfaction_agrees_with_signed_truth_table(s in schema(), f in ground_formula(), level in stratum()) {
        prop_assert_eq!(satisfies_formula(&s, &f, level), truth_table(&s, &f, true, level));
    }

    #[test]
    fn u_satisfaction_is_lenient(s in schema(), atom in ground_atom(), pol in polarity()) {
        if satisfies(&s, &atom.literal(pol, Stratum::U), Stratum::U) {
            prop_assert!(satisfies(&s, &atom.literal(pol, Stratum::I), Stratum::U));
            prop_assert!(satisfies(&s, &atom.literal(pol, Stratum::D), Stratum::U));
        }
        if satisfies(&s, &atom.literal(pol, Stratum::I), Stratum::U) {
            prop_assert!(satisfies(&s, &atom.literal(pol, Stratum::D), Stratum::U));
        }
    }

    #[test]
    fn format_schema_is_deterministic(s in schema()) {
        let mut entries: Vec<_> = s.entries().map(|(l, p)| (l.clone(), p)).collect();
        entries.reverse();
        let rebuilt = ModelSchema::from_literals(entries).unwrap();
        prop_assert_eq!(format_schema(&s), format_schema(&rebuilt));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn leq_is_a_preorder(a in schema(), b in schema(), c in schema()) {
        prop_assert_eq!(leq(&a, &a), OrderResult::Equal);
        prop_assert_eq!(leq(&a, &b), leq(&b, &a).reverse());
        let le = |x, y| matches!(leq(x, y), OrderResult::Less | OrderResult::Equal);
        if le(&a, &b) && le(&b, &c) {
            prop_assert!(le(&a, &c));
        }
    }

    #[test]
    fn optimistic_is_a_stable_idempotent_subset(set in prop::collection::vec(schema(), 1..7), extra in schema()) {
        let opt = optimistic(&set).unwrap();
        prop_assert!(!opt.is_empty());
        let literal_sets: BTreeSet<_> = set.iter().map(ModelSchema::literal_set).collect();
        prop_assert!(opt.iter().all(|m| literal_sets.contains(&m.literal_set())));
        prop_assert_eq!(optimistic(&opt).unwrap(), opt.clone());

        // A schema strictly above some member is not minimal and changes nothing.
        let base = &set[0];
        let grown = ModelSchema::from_literals(
            base.entries().map(|(l, p)| (l.clone(), p)).chain(extra.entries().map(|(l, p)| (l.clone(), p))),
        );
        if let Ok(grown) = grown {
            if leq(base, &grown) == OrderResult::Less {
                let mut bigger = set.clone();
                bigger.push(grown);
                prop_assert_eq!(optimistic(&bigger).unwrap(), opt);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pipeline_invariants_on_random_theories(seed in any::<u64>()) {
        let theory = random_theory(seed);
        let Ok(analysis) = analyze(&theory, Caps::default()) else { return Ok(()) };

        for branch in analysis.tableau.open_branches() {
            let schema = branch_to_schema(branch);
            prop_assert!(satisfies_theory(&schema, &theory, Stratum::U));
            for lit in branch.literals().keys() {
                prop_assert!(satisfies(&schema, lit, Stratum::U));
                prop_assert!(satisfies(&schema, lit, lit.stratum));
            }
        }

        let report = &analysis.report;
        for inf in &report.inferences {
            for m in &analysis.optimistic {
                prop_assert!(!m.literals().any(|l| l.atom == inf.atom && l.polarity != inf.polarity));
            }
            prop_assert!(analysis.optimistic.iter().any(|m| m.is_pragmatic(&inf.literal())));
            prop_assert!(!report.cancelled.iter().any(|c| c.atom == inf.atom && c.polarity == inf.polarity));
        }
        for c in &report.cancelled {
            prop_assert!(analysis.optimistic.iter().any(|m| m.contains(&c.defeater)));
        }

        let mut session = Session::new(&theory, Caps::default());
        let mut ok = true;
        for u in theory.utterances() {
            ok &= session.push_utterance(u.clone()).is_ok();
        }
        if ok {
            prop_assert_eq!(session.history().last().unwrap(), report);
        }
        prop_assert_eq!(infer(&theory, Caps::default()).unwrap(), report.clone());
    }
}
