//! Automata-based specification theories behind one algebraic interface,
//! and a harness that audits the algebraic laws of each theory.
//!
//! Three theories are provided:
//!
//! * [`fa`]: finite automata over a fixed alphabet, refined by language
//!   inclusion;
//! * [`mts`]: modal transition systems under modal refinement, with two
//!   selectable composition rules;
//! * [`ia`]: interface automata, where composition is partial and pruned by a
//!   safety game.
//!
//! [`audit`] samples or enumerates specifications and checks every
//! [`LawId`] against a theory, shrinking counterexamples. [`format`] is the
//! line-oriented text format used by the `specalg` command-line tool.

pub mod algebra;
pub mod alphabet;
pub mod audit;
pub mod cli;
pub mod error;
pub mod fa;
pub mod format;
pub mod ia;
pub mod mts;

pub use algebra::{equiv, law_arity, law_predicate, LawId, Theory, Verdict};
pub use alphabet::Alphabet;
pub use error::{Result, SpecError};
