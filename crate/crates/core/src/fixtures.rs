//! Canonical grammars used across the unit tests.

use crate::analysis::RegularPartition;
use crate::grammar::{parse_grammar, parse_grammar_with, ParseOptions};
use crate::Grammar;

pub const G1: &str = "start: S\nS -> A B\nA -> 'a' 'b' 'a' | 'a'\nB -> 'b'\n";
pub const G2: &str = "start: S\nS -> A | B\nA -> 'a' 'b' | C\nB -> 'a' | C 'd'\nC -> 'c'\n";
pub const G3: &str = "start: S\nS -> 'a' | eps\n";
pub const G4: &str = "start: S\nS -> 'a' | 'a' 'a'\n";
pub const G5: &str = "start: S\nS -> A | B\nA -> 'a' A | 'c'\nB -> 'a' B | 'd'\n";

/// `a*c$`, `a*d$` and the rest of `{a,c,d}*$`.
pub const G5_PARTITION: &str = "\
block B1:
start: S
S -> 'a' S | 'c' '$'
block B2:
start: S
S -> 'a' S | 'd' '$'
block B3:
start: S
S -> 'a' S | '$' | 'c' R | 'd' R
R -> 'a' Q | 'c' Q | 'd' Q
Q -> 'a' Q | 'c' Q | 'd' Q | '$'
";

pub fn g(text: &str) -> Grammar {
    parse_grammar(text).unwrap()
}

pub fn marked(text: &str) -> Grammar {
    parse_grammar_with(
        text,
        ParseOptions {
            allow_marker: true,
            ..ParseOptions::default()
        },
    )
    .unwrap()
}

pub fn g5_partition() -> RegularPartition {
    RegularPartition::parse(G5_PARTITION).unwrap()
}
