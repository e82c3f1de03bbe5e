//! Parsing expressions interpreted two ways: as context-free grammars
//! (non-deterministic choice, every reachable suffix) and as parsing
//! expression grammars (ordered choice, explicit failure, not-predicate).
//!
//! On top of the two matchers the crate provides:
//!
//! * grammar plumbing: a small text format, desugaring of repetition,
//!   conversion between production lists and expression grammars, BNF
//!   structure checks and left-recursion detection ([`grammar`]);
//! * lookahead analysis: nullable, `FIRST_k`, `FOLLOW_k`, the LL(1),
//!   strong-LL(k) and LL-regular class checks, right-linear grammars and
//!   their automata ([`analysis`]);
//! * language-preserving rewrites from those classes to PEGs
//!   ([`transforms`]);
//! * a differential harness comparing the two semantics by exhaustive
//!   enumeration against an independent derivation oracle
//!   ([`equivalence`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod automaton;
pub mod cfg;
pub mod equivalence;
mod error;
pub mod expr;
pub mod grammar;
pub mod peg;
mod program;
pub mod strings;
pub mod transforms;

#[cfg(test)]
pub(crate) mod fixtures;

pub use error::{Error, Result};
pub use expr::Expr;
pub use grammar::{Grammar, ProductionList, Symbol};

/// The reserved end-of-input marker. Never a member of a grammar's terminal
/// set; it only appears in transformed grammars and lookahead strings.
pub const END_MARKER: char = '$';
