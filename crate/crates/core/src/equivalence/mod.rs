//! The differential harness: an independent derivation oracle, bounded
//! language comparison between the two semantics, and seeded random
//! grammars for property suites.

mod compare;
mod generate;
mod oracle;

pub use compare::{compare_against, compare_languages, DiffReport, Verdict};
pub use generate::{random_grammar, Constraint, GeneratorConfig};
pub use oracle::oracle_membership;
