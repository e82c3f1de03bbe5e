//! The CFG interpretation: choice is non-deterministic and a match yields
//! every suffix some proof tree leaves behind.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::program::{Node, NodeId, Program};
use crate::strings::{enumerate_language, LanguageMode};
use crate::{Error, Expr, Grammar, Result};

/// The consumed-prefix lengths of every successful match. Empty means no
/// match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfgMatchResult {
    pub consumed: BTreeSet<usize>,
}

impl CfgMatchResult {
    pub fn matches(&self) -> bool {
        !self.consumed.is_empty()
    }

    pub fn consumes(&self, len: usize) -> bool {
        self.consumed.contains(&len)
    }
}

/// End positions reachable from every `(node, start)` pair, as a bitset per
/// pair.
struct Recognition {
    words: usize,
    positions: usize,
    bits: Vec<u64>,
}

impl Recognition {
    fn run(prog: &Program, input: &[char]) -> Recognition {
        let positions = input.len() + 1;
        let words = positions.div_ceil(64);
        let mut r = Recognition {
            words,
            positions,
            bits: vec![0; prog.nodes.len() * positions * words],
        };
        // A node at position i only depends on positions >= i, so each
        // position can be saturated on its own, last position first.
        for i in (0..positions).rev() {
            loop {
                let mut changed = false;
                for (id, node) in prog.nodes.iter().enumerate() {
                    changed |= r.step(prog, input, id, *node, i);
                }
                if !changed {
                    break;
                }
            }
        }
        r
    }

    fn slot(&self, node: NodeId, i: usize) -> usize {
        (node * self.positions + i) * self.words
    }

    fn get(&self, node: NodeId, i: usize, j: usize) -> bool {
        self.bits[self.slot(node, i) + j / 64] >> (j % 64) & 1 == 1
    }

    fn ends(&self, node: NodeId, i: usize) -> impl Iterator<Item = usize> + '_ {
        (i..self.positions).filter(move |&j| self.get(node, i, j))
    }

    fn set(&mut self, node: NodeId, i: usize, j: usize) -> bool {
        let w = self.slot(node, i) + j / 64;
        let before = self.bits[w];
        self.bits[w] |= 1 << (j % 64);
        self.bits[w] != before
    }

    fn union(&mut self, node: NodeId, i: usize, from: NodeId, at: usize) -> bool {
        let (dst, src) = (self.slot(node, i), self.slot(from, at));
        let mut changed = false;
        for w in 0..self.words {
            let before = self.bits[dst + w];
            self.bits[dst + w] |= self.bits[src + w];
            changed |= self.bits[dst + w] != before;
        }
        changed
    }

    fn step(&mut self, prog: &Program, input: &[char], id: NodeId, node: Node, i: usize) -> bool {
        match node {
            Node::Empty => self.set(id, i, i),
            Node::Term(c) => input.get(i) == Some(&c) && self.set(id, i, i + 1),
            Node::Call(r) => self.union(id, i, prog.rule_roots[r], i),
            Node::Choice(a, b) => {
                let x = self.union(id, i, a, i);
                self.union(id, i, b, i) | x
            }
            Node::Seq(a, b) => {
                let mids: Vec<usize> = self.ends(a, i).collect();
                let mut changed = false;
                for k in mids {
                    changed |= self.union(id, i, b, k);
                }
                changed
            }
            Node::Not(_) => unreachable!("predicates are rejected before recognition"),
        }
    }
}

fn compile_cfg(g: &Grammar, p: &Expr) -> Result<Program> {
    let prog = Program::compile(g, p)?;
    if prog.has_predicate() {
        return Err(Error::NotPredicateFree);
    }
    Ok(prog)
}

/// A compiled `g[p]`, ready to run on many inputs.
#[derive(Debug, Clone)]
pub struct CfgMatcher {
    prog: Program,
}

impl CfgMatcher {
    pub fn new(g: &Grammar, p: &Expr) -> Result<CfgMatcher> {
        Ok(CfgMatcher {
            prog: compile_cfg(g, p)?,
        })
    }

    pub fn run(&self, input: &[char]) -> CfgMatchResult {
        match_compiled(&self.prog, input)
    }
}

/// Matches `g[p]` against `input` and returns every length a proof tree
/// can consume. Left recursion is fine: the result is a least fixed point.
pub fn cfg_match(g: &Grammar, p: &Expr, input: &str) -> Result<CfgMatchResult> {
    let input: Vec<char> = input.chars().collect();
    Ok(CfgMatcher::new(g, p)?.run(&input))
}

fn match_compiled(prog: &Program, input: &[char]) -> CfgMatchResult {
    let r = Recognition::run(prog, input);
    CfgMatchResult {
        consumed: r.ends(prog.root, 0).collect(),
    }
}

/// The strings of length at most `max_len` in the language of `g` under
/// `mode`.
pub fn cfg_language(g: &Grammar, max_len: usize, mode: LanguageMode) -> Result<BTreeSet<String>> {
    let prog = compile_cfg(g, g.start())?;
    enumerate_language(g, max_len, mode, |input, len| {
        Ok(match_compiled(&prog, input).consumes(len))
    })
}

/// A number of proof trees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Count {
    Finite(u64),
    /// At least this many; counting stopped at the cap.
    AtLeast(u64),
    Infinite,
}

impl Count {
    fn add(self, other: Count, cap: u64) -> Count {
        match (self, other) {
            (Count::Infinite, _) | (_, Count::Infinite) => Count::Infinite,
            (a, b) => Count::clamp(
                a.value().saturating_add(b.value()),
                a.capped() || b.capped(),
                cap,
            ),
        }
    }

    fn mul(self, other: Count, cap: u64) -> Count {
        match (self, other) {
            (Count::Infinite, _) | (_, Count::Infinite) => Count::Infinite,
            (a, b) => Count::clamp(
                a.value().saturating_mul(b.value()),
                a.capped() || b.capped(),
                cap,
            ),
        }
    }

    fn clamp(v: u64, capped: bool, cap: u64) -> Count {
        if capped || v > cap {
            Count::AtLeast(cap)
        } else {
            Count::Finite(v)
        }
    }

    fn value(self) -> u64 {
        match self {
            Count::Finite(v) | Count::AtLeast(v) => v,
            Count::Infinite => u64::MAX,
        }
    }

    fn capped(self) -> bool {
        matches!(self, Count::AtLeast(_))
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(v) => write!(f, "{v}"),
            Count::AtLeast(v) => write!(f, ">={v}"),
            Count::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountStatus {
    Exact,
    /// Some count reached the cap.
    Capped,
    /// Some consumed length has infinitely many proof trees.
    Divergent,
}

/// Proof trees of the start expression on one input, by consumed length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTreeCount {
    pub per_suffix: BTreeMap<usize, Count>,
    pub total: Count,
    pub status: CountStatus,
}

impl ProofTreeCount {
    /// More than one proof tree for some consumed length.
    pub fn is_ambiguous(&self) -> bool {
        self.per_suffix
            .values()
            .any(|c| !matches!(c, Count::Finite(0 | 1)))
    }
}

/// Counts the proof trees of the start expression of `g` on `input` for
/// each consumed length. Counts above `cap` are reported as capped; a cycle
/// of derivation steps that can still finish makes the count infinite.
pub fn count_proof_trees(g: &Grammar, input: &str, cap: u64) -> Result<ProofTreeCount> {
    let prog = compile_cfg(g, g.start())?;
    let input: Vec<char> = input.chars().collect();
    let rec = Recognition::run(&prog, &input);
    let mut counter = Counter {
        prog: &prog,
        rec: &rec,
        cap,
        memo: BTreeMap::new(),
    };
    let mut per_suffix = BTreeMap::new();
    let mut total = Count::Finite(0);
    for j in rec.ends(prog.root, 0) {
        let c = counter.count(prog.root, 0, j);
        total = total.add(c, cap);
        per_suffix.insert(j, c);
    }
    let status = if per_suffix.values().any(|c| *c == Count::Infinite) {
        CountStatus::Divergent
    } else if per_suffix.values().any(|c| c.capped()) {
        CountStatus::Capped
    } else {
        CountStatus::Exact
    };
    Ok(ProofTreeCount {
        per_suffix,
        total,
        status,
    })
}

enum Visit {
    InProgress,
    Done(Count),
}

/// Counts trees over the recognized `(node, i, j)` triples only. Each of
/// those has at least one finite tree, so reaching one that is still being
/// counted means unboundedly many trees.
struct Counter<'a> {
    prog: &'a Program,
    rec: &'a Recognition,
    cap: u64,
    memo: BTreeMap<(NodeId, usize, usize), Visit>,
}

impl Counter<'_> {
    fn count(&mut self, node: NodeId, i: usize, j: usize) -> Count {
        match self.memo.get(&(node, i, j)) {
            Some(Visit::InProgress) => return Count::Infinite,
            Some(Visit::Done(c)) => return *c,
            None => {}
        }
        self.memo.insert((node, i, j), Visit::InProgress);
        let cap = self.cap;
        let c = match self.prog.nodes[node] {
            Node::Empty | Node::Term(_) => Count::Finite(1),
            Node::Call(r) => self.count(self.prog.rule_roots[r], i, j),
            Node::Choice(a, b) => {
                let mut c = Count::Finite(0);
                for x in [a, b] {
                    if self.rec.get(x, i, j) {
                        c = c.add(self.count(x, i, j), cap);
                    }
                }
                c
            }
            Node::Seq(a, b) => {
                let mut c = Count::Finite(0);
                let mids: Vec<usize> = self.rec.ends(a, i).filter(|&k| k <= j).collect();
                for k in mids {
                    if self.rec.get(b, k, j) {
                        let left = self.count(a, i, k);
                        let right = self.count(b, k, j);
                        c = c.add(left.mul(right, cap), cap);
                    }
                }
                c
            }
            Node::Not(_) => unreachable!("predicates are rejected before counting"),
        };
        self.memo.insert((node, i, j), Visit::Done(c));
        c
    }
}
