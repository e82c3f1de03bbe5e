//! Grammars `(V, T, P, p_S)` over parsing expressions, plus the structural
//! operations that do not depend on either semantics.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Expr, Result, END_MARKER};

mod convert;
mod structure;
mod text;

pub use convert::{cfg_to_pecfg, desugar, normalize_bnf, pecfg_to_cfg};
pub use structure::{
    check_bnf, left_recursive_nonterminals, remove_useless, BnfReport, BnfViolation, Owner,
};
pub use text::{parse_grammar, parse_grammar_with, render_expr, render_grammar, ParseOptions};

/// A grammar: a start expression and exactly one production per
/// non-terminal, kept in declaration order.
///
/// Equality compares the start expression and the production map; the
/// declaration order does not matter.
#[derive(Debug, Clone)]
pub struct Grammar {
    start: Expr,
    rules: Vec<(String, Expr)>,
    index: BTreeMap<String, usize>,
}

impl Grammar {
    /// Builds a grammar, checking that every referenced non-terminal has a
    /// production and that no non-terminal has two.
    pub fn new(start: Expr, rules: Vec<(String, Expr)>) -> Result<Grammar> {
        let mut index = BTreeMap::new();
        for (i, (name, _)) in rules.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateProduction(name.clone()));
            }
        }
        let g = Grammar {
            start,
            rules,
            index,
        };
        g.check_references()?;
        Ok(g)
    }

    fn check_references(&self) -> Result<()> {
        let exprs = core::iter::once(&self.start).chain(self.rules.iter().map(|(_, e)| e));
        for e in exprs {
            if let Some(missing) = e
                .nonterminals()
                .into_iter()
                .find(|n| !self.index.contains_key(*n))
            {
                return Err(Error::UndeclaredNonTerminal(missing.into()));
            }
        }
        Ok(())
    }

    pub fn start(&self) -> &Expr {
        &self.start
    }

    /// The start non-terminal, when the start expression is a single one.
    pub fn start_nonterminal(&self) -> Option<&str> {
        match &self.start {
            Expr::NonTerminal(n) => Some(n),
            _ => None,
        }
    }

    pub fn rules(&self) -> &[(String, Expr)] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&Expr> {
        self.index.get(name).map(|&i| &self.rules[i].1)
    }

    pub fn rule_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = &str> {
        self.rules.iter().map(|(n, _)| n.as_str())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// The terminal alphabet `T`: every terminal in the grammar except the
    /// end marker.
    pub fn terminals(&self) -> BTreeSet<char> {
        let mut out = self.all_terminals();
        out.remove(&END_MARKER);
        out
    }

    /// Every terminal mentioned, the end marker included.
    pub fn all_terminals(&self) -> BTreeSet<char> {
        let mut out = self.start.terminals();
        for (_, e) in &self.rules {
            out.extend(e.terminals());
        }
        out
    }

    pub fn mentions_marker(&self) -> bool {
        self.all_terminals().contains(&END_MARKER)
    }

    pub fn is_predicate_free(&self) -> bool {
        self.exprs().all(Expr::is_predicate_free)
    }

    pub fn has_repetition(&self) -> bool {
        self.exprs().any(Expr::has_repetition)
    }

    /// The start expression followed by every right-hand side.
    pub fn exprs(&self) -> impl Iterator<Item = &Expr> {
        core::iter::once(&self.start).chain(self.rules.iter().map(|(_, e)| e))
    }

    /// `G[p]`: the same productions with a different start expression.
    pub fn with_start(&self, start: Expr) -> Result<Grammar> {
        let g = Grammar {
            start,
            rules: self.rules.clone(),
            index: self.index.clone(),
        };
        g.check_references()?;
        Ok(g)
    }

    /// Rewrites every right-hand side and the start expression.
    pub fn map_exprs(&self, mut f: impl FnMut(Option<&str>, &Expr) -> Expr) -> Result<Grammar> {
        let start = f(None, &self.start);
        let rules = self
            .rules
            .iter()
            .map(|(n, e)| (n.clone(), f(Some(n), e)))
            .collect();
        Grammar::new(start, rules)
    }

    /// A non-terminal name not in `V` nor in `taken`, drawn from `_R1, _R2, …`.
    pub(crate) fn fresh_name(&self, counter: &mut usize, taken: &BTreeSet<String>) -> String {
        loop {
            *counter += 1;
            let name = format!("_R{counter}");
            if !self.contains(&name) && !taken.contains(&name) {
                return name;
            }
        }
    }
}

impl PartialEq for Grammar {
    fn eq(&self, other: &Grammar) -> bool {
        self.start == other.start
            && self.rules.len() == other.rules.len()
            && self
                .rules
                .iter()
                .all(|(n, e)| other.rule(n).is_some_and(|o| o == e))
    }
}

impl Eq for Grammar {}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_grammar(self))
    }
}

/// A grammar symbol in the classical production-list view.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    T(char),
    N(String),
}

impl Symbol {
    pub fn to_expr(&self) -> Expr {
        match self {
            Symbol::T(c) => Expr::Terminal(*c),
            Symbol::N(n) => Expr::NonTerminal(n.clone()),
        }
    }
}

/// The traditional CFG view: an ordered list of productions `A → α` with
/// `α` a (possibly empty) string of symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductionList {
    pub start: String,
    pub productions: Vec<(String, Vec<Symbol>)>,
}

impl ProductionList {
    /// Right-hand sides of `name`, in list order.
    pub fn alternatives_of<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a [Symbol]> + 'a {
        self.productions
            .iter()
            .filter(move |(n, _)| n == name)
            .map(|(_, rhs)| rhs.as_slice())
    }

    /// Non-terminals with at least one production, in first-appearance order.
    pub fn nonterminals(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.productions
            .iter()
            .filter(|(n, _)| seen.insert(n.as_str()))
            .map(|(n, _)| n.as_str())
            .collect()
    }
}
