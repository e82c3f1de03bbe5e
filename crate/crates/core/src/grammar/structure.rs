//! Structural properties: BNF structure, left recursion, useless symbols.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::Grammar;
use crate::analysis::{is_nullable, nullable_nonterminals};
use crate::{Error, Expr, Result};

/// Where an expression lives: the start expression or a production.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Owner {
    Start,
    Rule(String),
}

impl fmt::Display for Owner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Owner::Start => f.write_str("start"),
            Owner::Rule(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BnfViolation {
    pub owner: Owner,
    /// The offending concatenation (property 1) or choice (property 3).
    pub expr: Expr,
}

/// The three BNF-structure properties: no choice inside a concatenation,
/// a single non-terminal as start, and nullable alternatives last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BnfReport {
    pub property1_violations: Vec<BnfViolation>,
    pub property2_ok: bool,
    pub property3_violations: Vec<BnfViolation>,
}

impl BnfReport {
    pub fn is_bnf(&self) -> bool {
        self.property1_violations.is_empty()
            && self.property2_ok
            && self.property3_violations.is_empty()
    }
}

impl fmt::Display for BnfReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bnf() {
            return f.write_str("BNF structure");
        }
        let mut parts = Vec::new();
        for v in &self.property1_violations {
            parts.push(alloc::format!(
                "choice inside concatenation `{}` in {}",
                super::render_expr(&v.expr),
                v.owner
            ));
        }
        if !self.property2_ok {
            parts.push("start is not a single non-terminal".into());
        }
        for v in &self.property3_violations {
            parts.push(alloc::format!(
                "nullable alternative before non-nullable one in `{}` of {}",
                super::render_expr(&v.expr),
                v.owner
            ));
        }
        f.write_str(&parts.join("; "))
    }
}

/// Checks the BNF-structure properties. Property 3 is evaluated with CFG
/// nullability, so it is only meaningful for predicate-free grammars.
pub fn check_bnf(g: &Grammar) -> BnfReport {
    let nullable = nullable_nonterminals(g);
    let mut report = BnfReport {
        property1_violations: Vec::new(),
        property2_ok: g.start_nonterminal().is_some(),
        property3_violations: Vec::new(),
    };
    let owners = core::iter::once((Owner::Start, g.start()))
        .chain(g.rules().iter().map(|(n, e)| (Owner::Rule(n.clone()), e)));
    for (owner, e) in owners {
        choices_under_seq(e, None, &owner, &mut report.property1_violations);
        e.walk(&mut |node| {
            if let Expr::Choice(p1, p2) = node {
                if is_nullable(p1, &nullable) && !is_nullable(p2, &nullable) {
                    report.property3_violations.push(BnfViolation {
                        owner: owner.clone(),
                        expr: node.clone(),
                    });
                }
            }
        });
    }
    report
}

fn choices_under_seq(e: &Expr, seq: Option<&Expr>, owner: &Owner, out: &mut Vec<BnfViolation>) {
    match e {
        Expr::Empty | Expr::Terminal(_) | Expr::NonTerminal(_) => {}
        Expr::Seq(a, b) => {
            choices_under_seq(a, Some(e), owner, out);
            choices_under_seq(b, Some(e), owner, out);
        }
        Expr::Choice(a, b) => {
            if let Some(seq) = seq {
                if !out.iter().any(|v| v.owner == *owner && v.expr == *seq) {
                    out.push(BnfViolation {
                        owner: owner.clone(),
                        expr: seq.clone(),
                    });
                }
            }
            choices_under_seq(a, seq, owner, out);
            choices_under_seq(b, seq, owner, out);
        }
        Expr::Not(a) | Expr::Star(a) => choices_under_seq(a, seq, owner, out),
    }
}

/// Non-terminals that can be reached in leftmost position from
/// themselves, together with every non-terminal that can reach such a
/// cycle in leftmost position. Empty means the grammar is complete under
/// PEG semantics.
pub fn left_recursive_nonterminals(g: &Grammar) -> BTreeSet<String> {
    let nullable = nullable_nonterminals(g);
    let names: Vec<&str> = g.nonterminals().collect();
    let mut edges: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for (name, e) in g.rules() {
        let mut out = BTreeSet::new();
        leftmost_calls(e, &nullable, &mut out);
        edges.insert(name, out);
    }

    // reach[a] = everything reachable from a in one or more steps
    let mut reach: BTreeMap<&str, BTreeSet<&str>> = edges.clone();
    loop {
        let mut changed = false;
        for &a in &names {
            let via: Vec<&str> = reach[a].iter().copied().collect();
            for b in via {
                let extra: Vec<&str> = reach[b].iter().copied().collect();
                let set = reach.get_mut(a).unwrap();
                for c in extra {
                    changed |= set.insert(c);
                }
            }
        }
        if !changed {
            break;
        }
    }

    let cyclic: BTreeSet<&str> = names
        .iter()
        .copied()
        .filter(|a| reach[a].contains(a))
        .collect();
    names
        .iter()
        .filter(|a| cyclic.contains(*a) || reach[*a].iter().any(|b| cyclic.contains(b)))
        .map(|a| String::from(*a))
        .collect()
}

/// Non-terminals that may be invoked at the current input position.
fn leftmost_calls<'a>(e: &'a Expr, nullable: &BTreeSet<String>, out: &mut BTreeSet<&'a str>) {
    match e {
        Expr::Empty | Expr::Terminal(_) => {}
        Expr::NonTerminal(n) => {
            out.insert(n);
        }
        Expr::Seq(a, b) => {
            leftmost_calls(a, nullable, out);
            if is_nullable(a, nullable) {
                leftmost_calls(b, nullable, out);
            }
        }
        Expr::Choice(a, b) => {
            leftmost_calls(a, nullable, out);
            leftmost_calls(b, nullable, out);
        }
        // a predicate and a repetition both run their operand in place
        Expr::Not(a) | Expr::Star(a) => leftmost_calls(a, nullable, out),
    }
}

/// Drops non-productive and then unreachable non-terminals.
///
/// Alternatives and concatenations that mention a non-productive
/// non-terminal are dropped with it. Predicates are kept intact, so
/// non-terminals referenced only inside a predicate stay.
pub fn remove_useless(g: &Grammar) -> Result<Grammar> {
    let productive = productive_nonterminals(g);
    let start = prune(g.start(), &productive).ok_or(Error::EmptyLanguage)?;

    let mut kept: BTreeMap<&str, Expr> = BTreeMap::new();
    let mut pending: Vec<String> = start.nonterminals().into_iter().map(String::from).collect();
    while let Some(name) = pending.pop() {
        let Some((owned, original)) = g.rules().iter().find(|(n, _)| *n == name) else {
            continue;
        };
        if kept.contains_key(owned.as_str()) {
            continue;
        }
        let e = if productive.contains(&name) {
            prune(original, &productive).expect("productive non-terminal prunes to an expression")
        } else {
            original.clone()
        };
        pending.extend(e.nonterminals().into_iter().map(String::from));
        kept.insert(owned, e);
    }

    let rules = g
        .rules()
        .iter()
        .filter_map(|(n, _)| kept.remove(n.as_str()).map(|e| (n.clone(), e)))
        .collect();
    Grammar::new(start, rules)
}

pub(crate) fn productive_nonterminals(g: &Grammar) -> BTreeSet<String> {
    let mut set = BTreeSet::new();
    loop {
        let mut changed = false;
        for (name, e) in g.rules() {
            if !set.contains(name) && is_productive(e, &set) {
                set.insert(name.clone());
                changed = true;
            }
        }
        if !changed {
            return set;
        }
    }
}

fn is_productive(e: &Expr, productive: &BTreeSet<String>) -> bool {
    match e {
        Expr::Empty | Expr::Terminal(_) | Expr::Not(_) | Expr::Star(_) => true,
        Expr::NonTerminal(n) => productive.contains(n),
        Expr::Seq(a, b) => is_productive(a, productive) && is_productive(b, productive),
        Expr::Choice(a, b) => is_productive(a, productive) || is_productive(b, productive),
    }
}

fn prune(e: &Expr, productive: &BTreeSet<String>) -> Option<Expr> {
    match e {
        Expr::Empty | Expr::Terminal(_) | Expr::Not(_) => Some(e.clone()),
        Expr::NonTerminal(n) => productive.contains(n).then(|| e.clone()),
        Expr::Seq(a, b) => Some(Expr::seq(prune(a, productive)?, prune(b, productive)?)),
        Expr::Choice(a, b) => match (prune(a, productive), prune(b, productive)) {
            (Some(a), Some(b)) => Some(Expr::choice(a, b)),
            (Some(x), None) | (None, Some(x)) => Some(x),
            (None, None) => None,
        },
        Expr::Star(a) => Some(prune(a, productive).map_or(Expr::Empty, Expr::star)),
    }
}
