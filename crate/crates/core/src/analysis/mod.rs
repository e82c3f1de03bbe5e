//! Lookahead analysis and grammar classes: nullable, `FIRST_k`,
//! `FOLLOW_k`, LL(1), strong-LL(k), right-linear grammars and LL-regular
//! grammars over a regular partition.

use alloc::collections::BTreeSet;
use alloc::string::String;

use crate::{Expr, Grammar};

mod class;
mod lookahead;
mod regular;

pub use class::{is_ll1, is_ll_regular, is_strong_llk, ClassReport, Violation};
pub use lookahead::{cat_k, compute_tables, take_k, LookaheadTables};
pub use regular::{
    block, is_right_linear, is_right_linear_expr, prefix_property, rl_to_dfa, PartitionReport,
    RegularPartition,
};

/// Non-terminals whose production can succeed without consuming input.
/// Predicates and repetitions count as nullable.
pub fn nullable_nonterminals(g: &Grammar) -> BTreeSet<String> {
    let mut set = BTreeSet::new();
    loop {
        let mut changed = false;
        for (name, e) in g.rules() {
            if !set.contains(name) && is_nullable(e, &set) {
                set.insert(name.clone());
                changed = true;
            }
        }
        if !changed {
            return set;
        }
    }
}

/// Whether `e` can succeed without consuming input, given the nullable
/// non-terminals.
pub fn is_nullable(e: &Expr, nullable: &BTreeSet<String>) -> bool {
    match e {
        Expr::Empty | Expr::Not(_) | Expr::Star(_) => true,
        Expr::Terminal(_) => false,
        Expr::NonTerminal(n) => nullable.contains(n),
        Expr::Seq(a, b) => is_nullable(a, nullable) && is_nullable(b, nullable),
        Expr::Choice(a, b) => is_nullable(a, nullable) || is_nullable(b, nullable),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, g};

    #[test]
    fn nullable_fixed_point() {
        let g = g("start: S\nS -> A B\nA -> 'a' | eps\nB -> A A\nC -> 'c'");
        let set = nullable_nonterminals(&g);
        assert_eq!(
            set.into_iter().collect::<alloc::vec::Vec<_>>(),
            ["A", "B", "S"]
        );
        assert!(nullable_nonterminals(&fixtures::g(fixtures::G3)).contains("S"));
        assert!(nullable_nonterminals(&fixtures::g(fixtures::G2)).is_empty());
    }
}
