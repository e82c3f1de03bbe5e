//! Grammars flattened into an indexed node arena for the matchers.

use alloc::borrow::Cow;
use alloc::vec::Vec;

use crate::grammar::desugar;
use crate::{Error, Expr, Grammar, Result};

pub(crate) type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Node {
    Empty,
    Term(char),
    /// Invokes the rule with this index.
    Call(usize),
    Seq(NodeId, NodeId),
    Choice(NodeId, NodeId),
    Not(NodeId),
}

/// Every subexpression occurrence gets its own node; children always have
/// smaller ids than their parent.
#[derive(Debug, Clone)]
pub(crate) struct Program {
    pub nodes: Vec<Node>,
    /// Root node of each rule, by rule index.
    pub rule_roots: Vec<NodeId>,
    /// Node of the expression being matched.
    pub root: NodeId,
}

impl Program {
    /// Compiles `g[p]`. Repetitions are desugared first.
    pub fn compile(g: &Grammar, p: &Expr) -> Result<Program> {
        let g = if g.has_repetition() || p.has_repetition() {
            Cow::Owned(desugar(&g.with_start(p.clone())?))
        } else {
            if let Some(n) = p.nonterminals().into_iter().find(|n| !g.contains(n)) {
                return Err(Error::UndeclaredNonTerminal(n.into()));
            }
            Cow::Borrowed(g)
        };
        let p = if p.has_repetition() { g.start() } else { p };
        let mut prog = Program {
            nodes: Vec::new(),
            rule_roots: Vec::with_capacity(g.rules().len()),
            root: 0,
        };
        for (_, e) in g.rules() {
            let id = prog.add(&g, e);
            prog.rule_roots.push(id);
        }
        prog.root = prog.add(&g, p);
        Ok(prog)
    }

    fn add(&mut self, g: &Grammar, e: &Expr) -> NodeId {
        let node = match e {
            Expr::Empty => Node::Empty,
            Expr::Terminal(c) => Node::Term(*c),
            Expr::NonTerminal(n) => Node::Call(g.rule_index(n).expect("reference checked")),
            Expr::Seq(a, b) => Node::Seq(self.add(g, a), self.add(g, b)),
            Expr::Choice(a, b) => Node::Choice(self.add(g, a), self.add(g, b)),
            Expr::Not(a) => Node::Not(self.add(g, a)),
            Expr::Star(_) => unreachable!("repetitions are desugared before compiling"),
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn has_predicate(&self) -> bool {
        self.nodes.iter().any(|n| matches!(n, Node::Not(_)))
    }
}
