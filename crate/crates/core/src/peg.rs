//! The PEG interpretation: ordered choice, explicit failure and the
//! not-predicate. Every match has exactly one outcome.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::grammar::{desugar, left_recursive_nonterminals};
use crate::program::{Node, NodeId, Program};
use crate::strings::{enumerate_language, LanguageMode};
use crate::{Error, Expr, Grammar, Result};

/// Pad length used for prefix-mode PEG languages by the CLI.
pub const DEFAULT_PREFIX_PAD: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PegMatchResult {
    Fail,
    Consumed(usize),
}

impl fmt::Display for PegMatchResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PegMatchResult::Fail => f.write_str("fail"),
            PegMatchResult::Consumed(n) => write!(f, "consumed {n}"),
        }
    }
}

/// A compiled `g[p]`, ready to run on many inputs.
#[derive(Debug, Clone)]
pub struct PegMatcher {
    prog: Program,
    memo: bool,
}

impl PegMatcher {
    /// Rejects grammars with left recursion, on which matching may not
    /// terminate. With `memo`, results are cached per node and position.
    pub fn new(g: &Grammar, p: &Expr, memo: bool) -> Result<PegMatcher> {
        let checked = if g.has_repetition() || p.has_repetition() {
            desugar(&g.with_start(p.clone())?)
        } else {
            g.clone()
        };
        let lr = left_recursive_nonterminals(&checked);
        if !lr.is_empty() {
            return Err(Error::LeftRecursive(lr));
        }
        Ok(PegMatcher {
            prog: Program::compile(g, p)?,
            memo,
        })
    }

    pub fn run(&self, input: &[char]) -> PegMatchResult {
        let mut run = Run {
            prog: &self.prog,
            input,
            memo: if self.memo {
                vec![UNKNOWN; self.prog.nodes.len() * (input.len() + 1)]
            } else {
                Vec::new()
            },
        };
        match run.eval(self.prog.root, 0) {
            Some(end) => PegMatchResult::Consumed(end),
            None => PegMatchResult::Fail,
        }
    }
}

const UNKNOWN: u32 = u32::MAX;
const FAILED: u32 = u32::MAX - 1;

struct Run<'a> {
    prog: &'a Program,
    input: &'a [char],
    memo: Vec<u32>,
}

impl Run<'_> {
    fn eval(&mut self, node: NodeId, pos: usize) -> Option<usize> {
        if self.memo.is_empty() {
            return self.step(node, pos);
        }
        let slot = node * (self.input.len() + 1) + pos;
        match self.memo[slot] {
            UNKNOWN => {}
            FAILED => return None,
            end => return Some(end as usize),
        }
        let out = self.step(node, pos);
        self.memo[slot] = out.map_or(FAILED, |end| end as u32);
        out
    }

    fn step(&mut self, node: NodeId, pos: usize) -> Option<usize> {
        match self.prog.nodes[node] {
            Node::Empty => Some(pos),
            Node::Term(c) => (self.input.get(pos) == Some(&c)).then_some(pos + 1),
            Node::Call(r) => self.eval(self.prog.rule_roots[r], pos),
            Node::Seq(a, b) => {
                let mid = self.eval(a, pos)?;
                self.eval(b, mid)
            }
            Node::Choice(a, b) => self.eval(a, pos).or_else(|| self.eval(b, pos)),
            Node::Not(a) => match self.eval(a, pos) {
                Some(_) => None,
                None => Some(pos),
            },
        }
    }
}

/// Matches `g[p]` against `input` under PEG semantics.
pub fn peg_match(g: &Grammar, p: &Expr, input: &str, memo: bool) -> Result<PegMatchResult> {
    let input: Vec<char> = input.chars().collect();
    Ok(PegMatcher::new(g, p, memo)?.run(&input))
}

/// The strings of length at most `max_len` in the PEG language of `g`
/// under `mode`. Prefix mode is sensitive to the pad length, since a PEG
/// may match `x` in `xy` for some `y` and fail for others.
pub fn peg_language(g: &Grammar, max_len: usize, mode: LanguageMode) -> Result<BTreeSet<String>> {
    let m = PegMatcher::new(g, g.start(), true)?;
    enumerate_language(g, max_len, mode, |input, len| {
        Ok(m.run(input) == PegMatchResult::Consumed(len))
    })
}
