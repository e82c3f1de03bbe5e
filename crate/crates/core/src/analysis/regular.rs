//! Right-linear grammars, regular partitions of `T*·{$}` and the `BLOCK`
//! sets of the LL-regular condition.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::automaton::{Dfa, Nfa};
use crate::grammar::{
    check_bnf, parse_grammar_with, pecfg_to_cfg, remove_useless, render_grammar, ParseOptions,
};
use crate::{Error, Expr, Grammar, Result, Symbol, END_MARKER};

/// `ε`, terminals and non-terminals are right-linear; `p1 p2` is when `p1`
/// is a terminal and `p2` is right-linear; a choice is when both branches
/// are.
pub fn is_right_linear_expr(e: &Expr) -> bool {
    match e {
        Expr::Empty | Expr::Terminal(_) | Expr::NonTerminal(_) => true,
        Expr::Seq(a, b) => matches!(**a, Expr::Terminal(_)) && is_right_linear_expr(b),
        Expr::Choice(a, b) => is_right_linear_expr(a) && is_right_linear_expr(b),
        Expr::Not(_) | Expr::Star(_) => false,
    }
}

pub fn is_right_linear(g: &Grammar) -> bool {
    g.exprs().all(is_right_linear_expr)
}

/// The automaton of a right-linear grammar over its own terminals, the end
/// marker included.
pub fn rl_to_dfa(g: &Grammar) -> Result<Dfa> {
    rl_to_dfa_over(g, &g.all_terminals())
}

pub(crate) fn rl_to_dfa_over(g: &Grammar, alphabet: &BTreeSet<char>) -> Result<Dfa> {
    if !is_right_linear(g) {
        return Err(Error::NotRightLinear);
    }
    // state 0 starts, one state per non-terminal, one accepting state
    let mut nfa = Nfa::new();
    let states: BTreeMap<&str, usize> = g.nonterminals().map(|n| (n, nfa.add_state())).collect();
    let accept = nfa.add_state();
    nfa.set_accepting(accept);
    encode(&mut nfa, &states, accept, g.start(), 0);
    for (name, e) in g.rules() {
        encode(&mut nfa, &states, accept, e, states[name.as_str()]);
    }
    Ok(Dfa::from_nfa(&nfa, alphabet))
}

fn encode(nfa: &mut Nfa, states: &BTreeMap<&str, usize>, accept: usize, e: &Expr, from: usize) {
    match e {
        Expr::Empty => nfa.add_edge(from, None, accept),
        Expr::Terminal(c) => nfa.add_edge(from, Some(*c), accept),
        Expr::NonTerminal(n) => nfa.add_edge(from, None, states[n.as_str()]),
        Expr::Seq(a, b) => {
            let Expr::Terminal(c) = **a else {
                unreachable!("right-linear concatenation starts with a terminal")
            };
            let mid = nfa.add_state();
            nfa.add_edge(from, Some(c), mid);
            encode(nfa, states, accept, b, mid);
        }
        Expr::Choice(a, b) => {
            encode(nfa, states, accept, a, from);
            encode(nfa, states, accept, b, from);
        }
        Expr::Not(_) | Expr::Star(_) => unreachable!("right-linearity checked"),
    }
}

/// No string in the language is a proper prefix of another.
pub fn prefix_property(g: &Grammar) -> Result<bool> {
    Ok(rl_to_dfa(g)?.has_prefix_property())
}

/// An ordered list of named blocks, each a right-linear grammar over
/// `T ∪ {$}`. A valid partition has blocks that are pairwise disjoint,
/// only contain strings of `T*·{$}` and together cover it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularPartition {
    blocks: Vec<(String, Grammar)>,
}

/// What [`RegularPartition::check`] found wrong, with shortest witnesses.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartitionReport {
    pub duplicate_names: Vec<String>,
    /// Blocks with a string outside `T*·{$}`.
    pub unmarked: Vec<(String, String)>,
    /// Pairs of blocks sharing a string.
    pub overlaps: Vec<(String, String, String)>,
    /// A string of `T*·{$}` in no block.
    pub uncovered: Option<String>,
}

impl PartitionReport {
    pub fn is_valid(&self) -> bool {
        self.duplicate_names.is_empty()
            && self.unmarked.is_empty()
            && self.overlaps.is_empty()
            && self.uncovered.is_none()
    }
}

impl fmt::Display for PartitionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid partition");
        }
        let show = |s: &str| String::from(crate::strings::display(s));
        let mut parts = Vec::new();
        for name in &self.duplicate_names {
            parts.push(format!("block {name} declared twice"));
        }
        for (name, w) in &self.unmarked {
            parts.push(format!("block {name} contains {} outside T*$", show(w)));
        }
        for (a, b, w) in &self.overlaps {
            parts.push(format!("blocks {a} and {b} overlap on {}", show(w)));
        }
        if let Some(w) = &self.uncovered {
            parts.push(format!("{} is in no block", show(w)));
        }
        f.write_str(&parts.join("; "))
    }
}

impl RegularPartition {
    pub fn new(blocks: Vec<(String, Grammar)>) -> Result<RegularPartition> {
        if !blocks.iter().all(|(_, g)| is_right_linear(g)) {
            return Err(Error::NotRightLinear);
        }
        Ok(RegularPartition { blocks })
    }

    /// Parses `block NAME:` sections, each holding a grammar in the usual
    /// format with the end marker allowed.
    pub fn parse(text: &str) -> Result<RegularPartition> {
        let mut sections: Vec<(String, usize, String)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if let Some(rest) = trimmed.strip_prefix("block ") {
                let name = rest.trim().strip_suffix(':').map(str::trim).unwrap_or("");
                let valid =
                    !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_');
                if !valid {
                    return Err(Error::Syntax {
                        line: i + 1,
                        column: 1,
                        message: "expected `block NAME:`".into(),
                    });
                }
                if sections.iter().any(|(n, _, _)| n == name) {
                    return Err(Error::Syntax {
                        line: i + 1,
                        column: 1,
                        message: format!("duplicate block {name}"),
                    });
                }
                sections.push((name.into(), i + 1, String::new()));
            } else if let Some((_, _, body)) = sections.last_mut() {
                body.push_str(line);
                body.push('\n');
            } else if !(trimmed.is_empty() || trimmed.starts_with('#')) {
                return Err(Error::Syntax {
                    line: i + 1,
                    column: 1,
                    message: "expected `block NAME:`".into(),
                });
            }
        }
        let opts = |line_offset| ParseOptions {
            allow_marker: true,
            line_offset,
        };
        let blocks = sections
            .into_iter()
            .map(|(name, line, body)| Ok((name, parse_grammar_with(&body, opts(line))?)))
            .collect::<Result<Vec<_>>>()?;
        RegularPartition::new(blocks)
    }

    pub fn blocks(&self) -> &[(String, Grammar)] {
        &self.blocks
    }

    /// The block names, in order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.blocks.iter().map(|(n, _)| n.as_str())
    }

    /// `T ∪ {$}` for a grammar with terminals `terminals`: the union with
    /// every block's terminals.
    pub fn alphabet(&self, terminals: &BTreeSet<char>) -> BTreeSet<char> {
        let mut out = terminals.clone();
        for (_, g) in &self.blocks {
            out.extend(g.all_terminals());
        }
        out.insert(END_MARKER);
        out
    }

    pub fn automata(&self, alphabet: &BTreeSet<char>) -> Vec<Dfa> {
        self.blocks
            .iter()
            .map(|(_, g)| rl_to_dfa_over(g, alphabet).expect("blocks are right-linear"))
            .collect()
    }

    /// Decides exactly whether the blocks partition `T*·{$}`, where `T`
    /// is `terminals` plus the blocks' own terminals.
    pub fn check(&self, terminals: &BTreeSet<char>) -> PartitionReport {
        let alphabet = self.alphabet(terminals);
        let dfas = self.automata(&alphabet);
        let marked = Dfa::marked_strings(&alphabet, END_MARKER);
        let mut report = PartitionReport::default();
        let mut seen = BTreeSet::new();
        for name in self.names() {
            if !seen.insert(name) {
                report.duplicate_names.push(name.into());
            }
        }
        for (i, (name, _)) in self.blocks.iter().enumerate() {
            if let Some(w) = dfas[i].intersect(&marked.complement()).shortest_accepted() {
                report.unmarked.push((name.clone(), w));
            }
            for (j, (other, _)) in self.blocks.iter().enumerate().skip(i + 1) {
                if let Some(w) = dfas[i].intersect(&dfas[j]).shortest_accepted() {
                    report.overlaps.push((name.clone(), other.clone(), w));
                }
            }
        }
        let mut rest = marked;
        for d in &dfas {
            rest = rest.intersect(&d.complement());
        }
        report.uncovered = rest.shortest_accepted();
        report
    }

    pub(crate) fn require_valid(&self, terminals: &BTreeSet<char>) -> Result<()> {
        let report = self.check(terminals);
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidPartition(Box::new(report)))
        }
    }
}

impl fmt::Display for RegularPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, g) in &self.blocks {
            writeln!(f, "block {name}:")?;
            f.write_str(&render_grammar(g))?;
        }
        Ok(())
    }
}

/// `BLOCK(p, A)`: the blocks of `π` holding some `xy` where `p` matches
/// `x` at an occurrence of `A` in a proof tree for an input `w$`, and `y`
/// is the rest of that input.
///
/// `g` must have BNF structure and `p` must be a sequence of symbols.
pub fn block(g: &Grammar, p: &Expr, a: &str, pi: &RegularPartition) -> Result<BTreeSet<String>> {
    let syms = p.as_symbols().ok_or_else(|| Error::NotSymbolSequence {
        nonterminal: a.into(),
    })?;
    let ctx = BlockContext::new(g, pi)?;
    if !g.contains(a) {
        return Err(Error::UnknownNonTerminal(a.into()));
    }
    if let Some(Symbol::N(n)) = syms
        .iter()
        .find(|s| matches!(s, Symbol::N(n) if !g.contains(n)))
    {
        return Err(Error::UndeclaredNonTerminal(n.clone()));
    }
    Ok(ctx.block(&syms, a))
}

pub(crate) fn require_bnf_structure(g: &Grammar) -> Result<()> {
    let report = check_bnf(g);
    if report.property1_violations.is_empty() && report.property2_ok {
        Ok(())
    } else {
        Err(Error::NotBnf(Box::new(report)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sym {
    T(char),
    N(usize),
}

/// The classical productions of a grammar extended with its right-context
/// grammar, plus the partition automata, shared by every `BLOCK` query on
/// one grammar.
pub(crate) struct BlockContext<'p> {
    pi: &'p RegularPartition,
    ids: BTreeMap<String, usize>,
    /// Right-context non-terminal of each original one.
    contexts: BTreeMap<String, usize>,
    productions: Vec<(usize, Vec<Sym>)>,
    dfas: Vec<Dfa>,
    /// Per block automaton: `relations[b][X][q]` is the set of states
    /// reached from `q` by some string derived from `X`.
    relations: Vec<Vec<Vec<BTreeSet<usize>>>>,
}

impl<'p> BlockContext<'p> {
    pub fn new(g: &Grammar, pi: &'p RegularPartition) -> Result<BlockContext<'p>> {
        require_bnf_structure(g)?;
        if !g.is_predicate_free() {
            return Err(Error::NotPredicateFree);
        }
        pi.require_valid(&g.all_terminals())?;
        let alphabet = pi.alphabet(&g.all_terminals());
        let mut ctx = BlockContext {
            pi,
            ids: BTreeMap::new(),
            contexts: BTreeMap::new(),
            productions: Vec::new(),
            dfas: pi.automata(&alphabet),
            relations: Vec::new(),
        };
        match remove_useless(g) {
            Ok(pruned) => ctx.add_productions(&pruned)?,
            Err(Error::EmptyLanguage) => {}
            Err(e) => return Err(e),
        }
        ctx.relations = ctx.dfas.iter().map(|d| ctx.relation(d)).collect();
        Ok(ctx)
    }

    fn add_productions(&mut self, g: &Grammar) -> Result<()> {
        let pl = pecfg_to_cfg(g)?;
        for name in g.nonterminals().chain(core::iter::once(pl.start.as_str())) {
            if !self.ids.contains_key(name) {
                let n = self.ids.len();
                self.ids.insert(name.into(), n);
            }
        }
        let count = self.ids.len();
        for (name, &id) in &self.ids {
            self.contexts.insert(name.clone(), count + id);
        }
        let sym = |ids: &BTreeMap<String, usize>, s: &Symbol| match s {
            Symbol::T(c) => Sym::T(*c),
            Symbol::N(n) => Sym::N(ids[n]),
        };
        for (lhs, rhs) in &pl.productions {
            let rhs: Vec<Sym> = rhs.iter().map(|s| sym(&self.ids, s)).collect();
            // every occurrence B in C → α B β gives RC_B → β RC_C
            for (i, s) in rhs.iter().enumerate() {
                if let Sym::N(b) = *s {
                    let mut tail = rhs[i + 1..].to_vec();
                    tail.push(Sym::N(self.contexts[lhs]));
                    self.productions.push((b + count, tail));
                }
            }
            self.productions.push((self.ids[lhs], rhs));
        }
        self.productions
            .push((self.contexts[&pl.start], vec![Sym::T(END_MARKER)]));
        Ok(())
    }

    fn symbol_count(&self) -> usize {
        2 * self.ids.len()
    }

    fn relation(&self, dfa: &Dfa) -> Vec<Vec<BTreeSet<usize>>> {
        let mut rel = vec![vec![BTreeSet::new(); dfa.states()]; self.symbol_count()];
        loop {
            let mut changed = false;
            for (lhs, rhs) in &self.productions {
                for q in 0..dfa.states() {
                    for end in run(dfa, &rel, rhs, q) {
                        changed |= rel[*lhs][q].insert(end);
                    }
                }
            }
            if !changed {
                return rel;
            }
        }
    }

    pub fn block(&self, p: &[Symbol], a: &str) -> BTreeSet<String> {
        let (Some(&context), true) = (
            self.contexts.get(a),
            p.iter().all(|s| {
                matches!(s, Symbol::T(_)) || matches!(s, Symbol::N(n) if self.ids.contains_key(n))
            }),
        ) else {
            // p or A is useless: no proof tree goes through them
            return BTreeSet::new();
        };
        let mut goal: Vec<Sym> = p
            .iter()
            .map(|s| match s {
                Symbol::T(c) => Sym::T(*c),
                Symbol::N(n) => Sym::N(self.ids[n]),
            })
            .collect();
        goal.push(Sym::N(context));
        self.pi
            .names()
            .zip(self.dfas.iter().zip(&self.relations))
            .filter(|(_, (dfa, rel))| {
                run(dfa, rel, &goal, dfa.start())
                    .into_iter()
                    .any(|q| dfa.is_accepting(q))
            })
            .map(|(name, _)| String::from(name))
            .collect()
    }
}

/// States reachable from `q` by some string derived from `seq`.
fn run(dfa: &Dfa, rel: &[Vec<BTreeSet<usize>>], seq: &[Sym], q: usize) -> BTreeSet<usize> {
    let mut cur = BTreeSet::from([q]);
    for s in seq {
        let mut next = BTreeSet::new();
        for &q in &cur {
            match *s {
                Sym::T(c) => next.extend(dfa.step(q, c)),
                Sym::N(x) => next.extend(rel[x][q].iter().copied()),
            }
        }
        if next.is_empty() {
            return next;
        }
        cur = next;
    }
    cur
}
