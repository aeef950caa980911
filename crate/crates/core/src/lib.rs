//! Inclusion and equivalence of GKAT expressions, decided by building cyclic
//! proofs in the sequent calculus SGKAT.
//!
//! [`search::decide`] returns either a proof certificate that passes
//! [`proof::check`], or a guarded-string counterexample confirmed by exact
//! membership.

pub mod alphabet;
pub mod atoms;
pub mod error;
pub mod fuzz;
pub mod oracle;
pub mod parse;
pub mod proof;
pub mod rules;
pub mod search;
pub mod semantics;
pub mod syntax;
pub mod tree;

pub use alphabet::{Alphabet, ProgId, TestId};
pub use atoms::{all_atoms, Atom, AtomSet};
pub use parse::{parse_cedent, parse_expr, parse_test};
pub use proof::{check, CheckError, ErrorCode, Proof};
pub use rules::{ListSequent, RuleName, Sequent};
pub use search::{decide, equiv, SearchConfig, Verdict};
pub use semantics::{member, GuardedString};
pub use syntax::{Expr, Test};
pub use tree::{NodeCedent, NodeId, Origin, SyntaxTree};
