//! Stratified-logic engine for defeasible pragmatic inference.
//!
//! The pipeline is: parse a theory, ground its rules, expand the ground
//! theory in a stratified tableau, turn open branches into model schemata,
//! keep the optimistic ones, and read off the pragmatic inferences that are
//! not cancelled by opposite information.
//!
//! ```
//! use stratlog::{parser::parse_theory, pragmatics::infer, tableau::Caps};
//!
//! let theory = parse_theory(
//!     "forall_ut x,y,z (~regrets^u(x,come(y,z)) -> come^d(y,z)).
//!      uttered(~regrets(john, come(mary,party))).",
//! )
//! .unwrap();
//! let report = infer(&theory, Caps::default()).unwrap();
//! assert_eq!(report.inferences[0].to_string(), "come^d(mary,party)");
//! ```

pub mod oracle;
pub mod ordering;
pub mod parser;
pub mod pragmatics;
pub mod schema;
pub mod syntax;
pub mod tableau;

pub use ordering::{leq, optimistic, OrderResult};
pub use parser::{format_schema, parse_formula, parse_theory};
pub use pragmatics::{infer, Diff, InferenceReport, Session};
pub use schema::{Level, ModelSchema};
pub use syntax::{Formula, GroundAtom, Polarity, StratifiedLiteral, Stratum, Term, Theory};
pub use tableau::{expand, Caps};

use thiserror::Error;

/// Failure of the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("theory is u-inconsistent: every tableau branch is u-closed")]
    Inconsistent,
    #[error("tableau exceeded the branch cap of {0}")]
    BranchCap(usize),
    #[error("tableau exceeded the literal cap of {0}")]
    LiteralCap(usize),
    #[error("oracle atom base has {found} atoms, cap is {cap}")]
    AtomCap { found: usize, cap: usize },
    #[error("oracle would enumerate {found} literal slots, cap is {cap}")]
    SlotCap { found: usize, cap: usize },
    #[error("optimistic selection over an empty set of schemata")]
    EmptySchemata,
    #[error(transparent)]
    Syntax(#[from] syntax::SyntaxError),
}
