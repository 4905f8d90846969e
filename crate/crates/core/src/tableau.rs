//! Stratified semantic tableau over a grounded theory.
//!
//! Every ground formula is put in negation normal form and decomposed:
//! conjunctions extend the branch, disjunctions (including rewritten
//! implications) fork it. A branch closes only on a `u`-level collision
//! `p^u` / `~p^u`; collisions at `i` or `d` are kept, since they model
//! defeat.
//!
//! Literals introduced by the consequent of a `forall_ut` instance are tagged
//! pragmatic. Open leaves with the same literal set are merged, and their tags
//! are unioned.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::syntax::{ground_theory, nnf, Formula, StratifiedLiteral, Stratum, Theory};
use crate::EngineError;

/// Resource bounds for one expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of tableau leaves, open or closed.
    pub max_branches: usize,
    /// Maximum total number of literals held by distinct open branches.
    pub max_literals: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_branches: 10_000, max_literals: 100_000 }
    }
}

/// A tableau leaf: its literals with pragmatic provenance.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Branch {
    literals: BTreeMap<StratifiedLiteral, bool>,
    closed: bool,
}

impl Branch {
    pub fn from_literals(literals: impl IntoIterator<Item = (StratifiedLiteral, bool)>) -> Self {
        let mut map: BTreeMap<StratifiedLiteral, bool> = BTreeMap::new();
        for (l, p) in literals {
            *map.entry(l).or_insert(false) |= p;
        }
        let closed = u_collision(&map);
        Branch { literals: map, closed }
    }

    pub fn literals(&self) -> &BTreeMap<StratifiedLiteral, bool> {
        &self.literals
    }

    pub fn literal_set(&self) -> BTreeSet<StratifiedLiteral> {
        self.literals.keys().cloned().collect()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }
}

fn u_collision(literals: &BTreeMap<StratifiedLiteral, bool>) -> bool {
    literals.keys().any(|l| l.stratum == Stratum::U && l.is_positive() && literals.contains_key(&l.complement()))
}

/// True iff the branch holds `p^u` and `~p^u` for some atom.
pub fn is_closed(branch: &Branch) -> bool {
    branch.closed
}

/// Result of expanding a theory.
#[derive(Clone, Debug)]
pub struct Tableau {
    /// Every leaf in exploration order, closed ones included.
    pub leaves: Vec<Branch>,
    /// Distinct open leaves, sorted by literal set.
    pub open: Vec<Branch>,
}

impl Tableau {
    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn closed_count(&self) -> usize {
        self.leaves.iter().filter(|b| b.closed).count()
    }

    pub fn open_branches(&self) -> &[Branch] {
        &self.open
    }
}

#[derive(Debug)]
enum Node {
    Lit(StratifiedLiteral, bool),
    And(Vec<usize>),
    Or(Vec<usize>),
}

/// Formula trees flattened into an arena so pending work is a list of ids.
#[derive(Default)]
struct Arena {
    nodes: Vec<Node>,
}

impl Arena {
    fn add(&mut self, node: Node) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    fn build(&mut self, formula: &Formula, pragmatic: bool) -> usize {
        match formula {
            Formula::And(a, b) => {
                let (a, b) = (self.build(a, pragmatic), self.build(b, pragmatic));
                self.add(Node::And(vec![a, b]))
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.build(a, pragmatic), self.build(b, pragmatic));
                self.add(Node::Or(vec![a, b]))
            }
            other => {
                let lit = other.as_literal().expect("grounded formulas are quantifier-free and ground");
                self.add(Node::Lit(lit, pragmatic))
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    literals: BTreeMap<StratifiedLiteral, bool>,
    pending: Vec<usize>,
}

struct Expander<'a> {
    arena: &'a Arena,
    caps: Caps,
    leaves: Vec<Branch>,
    open: BTreeMap<BTreeSet<StratifiedLiteral>, BTreeMap<StratifiedLiteral, bool>>,
    open_literals: usize,
    seen: HashSet<State>,
}

impl Expander<'_> {
    /// Adds `root` and everything it implies conjunctively; returns false if
    /// the branch u-closes.
    fn absorb(&self, state: &mut State, root: usize) -> bool {
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            match &self.arena.nodes[id] {
                Node::Lit(lit, prag) => {
                    if lit.stratum == Stratum::U && state.literals.contains_key(&lit.complement()) {
                        state.literals.insert(lit.clone(), *prag);
                        return false;
                    }
                    *state.literals.entry(lit.clone()).or_insert(false) |= *prag;
                }
                Node::And(children) => stack.extend(children.iter().rev()),
                Node::Or(_) => state.pending.push(id),
            }
        }
        true
    }

    /// A disjunction with a literal disjunct that would close the branch is
    /// worth splitting first; otherwise take the oldest.
    fn select(&self, state: &State) -> usize {
        let closes = |id: &usize| match &self.arena.nodes[*id] {
            Node::Or(children) => children.iter().any(|c| match &self.arena.nodes[*c] {
                Node::Lit(l, _) => l.stratum == Stratum::U && state.literals.contains_key(&l.complement()),
                _ => false,
            }),
            _ => false,
        };
        state.pending.iter().position(closes).unwrap_or(0)
    }

    fn leaf(&mut self, literals: BTreeMap<StratifiedLiteral, bool>, closed: bool) -> Result<(), EngineError> {
        if self.leaves.len() >= self.caps.max_branches {
            return Err(EngineError::BranchCap(self.caps.max_branches));
        }
        if !closed {
            let key: BTreeSet<StratifiedLiteral> = literals.keys().cloned().collect();
            let merged = self.open.entry(key).or_insert_with(|| {
                self.open_literals += literals.len();
                BTreeMap::new()
            });
            for (l, p) in &literals {
                *merged.entry(l.clone()).or_insert(false) |= *p;
            }
            if self.open_literals > self.caps.max_literals {
                return Err(EngineError::LiteralCap(self.caps.max_literals));
            }
        }
        self.leaves.push(Branch { literals, closed });
        Ok(())
    }

    fn run(&mut self, mut state: State) -> Result<(), EngineError> {
        if state.pending.is_empty() {
            return self.leaf(state.literals, false);
        }
        if !self.seen.insert(state.clone()) {
            return Ok(());
        }
        let at = self.select(&state);
        let id = state.pending.remove(at);
        let Node::Or(children) = &self.arena.nodes[id] else { unreachable!("only disjunctions are pending") };
        for &child in children {
            let mut next = state.clone();
            if self.absorb(&mut next, child) {
                self.run(next)?;
            } else {
                self.leaf(next.literals, true)?;
            }
        }
        Ok(())
    }
}

/// Expands the grounded theory. Utterances come first, then rule instances
/// in rule order; exploration is deterministic.
pub fn expand(theory: &Theory, caps: Caps) -> Result<Tableau, EngineError> {
    let mut arena = Arena::default();
    let mut roots = Vec::new();
    for g in ground_theory(theory) {
        let root = if g.is_pragmatic() {
            let Formula::Implies(antecedent, consequent) = &g.formula else {
                unreachable!("forall_ut bodies are implications")
            };
            let escape = arena.build(&nnf(&antecedent.as_ref().clone().not()), false);
            let fire = arena.build(&nnf(consequent), true);
            arena.add(Node::Or(vec![escape, fire]))
        } else {
            arena.build(&nnf(&g.formula), false)
        };
        roots.push(root);
    }
    let mut expander = Expander {
        arena: &arena,
        caps,
        leaves: Vec::new(),
        open: BTreeMap::new(),
        open_literals: 0,
        seen: HashSet::new(),
    };
    let mut state = State { literals: BTreeMap::new(), pending: Vec::new() };
    let consistent = roots.iter().all(|&r| expander.absorb(&mut state, r));
    if consistent {
        expander.run(state)?;
    } else {
        expander.leaf(state.literals, true)?;
    }
    let open = expander.open.into_values().map(|literals| Branch { literals, closed: false }).collect();
    Ok(Tableau { leaves: expander.leaves, open })
}
