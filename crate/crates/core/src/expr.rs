//! The parsing-expression syntax shared by both interpretations.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

/// A parsing expression.
///
/// `Star` is sugar and is removed by [`crate::grammar::desugar`]. The
/// and-predicate has no node of its own: `&p` is `Not(Not(p))`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Empty,
    Terminal(char),
    NonTerminal(String),
    Seq(Box<Expr>, Box<Expr>),
    Choice(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    Star(Box<Expr>),
}

impl Expr {
    pub fn t(c: char) -> Expr {
        Expr::Terminal(c)
    }

    pub fn nt(name: impl Into<String>) -> Expr {
        Expr::NonTerminal(name.into())
    }

    pub fn seq(left: Expr, right: Expr) -> Expr {
        Expr::Seq(Box::new(left), Box::new(right))
    }

    pub fn choice(left: Expr, right: Expr) -> Expr {
        Expr::Choice(Box::new(left), Box::new(right))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Expr) -> Expr {
        Expr::Not(Box::new(inner))
    }

    /// `&p`, stored as a doubled not-predicate.
    pub fn and(inner: Expr) -> Expr {
        Expr::not(Expr::not(inner))
    }

    pub fn star(inner: Expr) -> Expr {
        Expr::Star(Box::new(inner))
    }

    /// Right-associated concatenation; `Empty` for no items.
    pub fn seq_of(items: impl IntoIterator<Item = Expr>) -> Expr {
        let mut items: Vec<Expr> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Expr::Empty;
        };
        while let Some(prev) = items.pop() {
            acc = Expr::seq(prev, acc);
        }
        acc
    }

    /// Right-associated choice, `None` for no alternatives.
    pub fn choice_of(alternatives: impl IntoIterator<Item = Expr>) -> Option<Expr> {
        let mut alts: Vec<Expr> = alternatives.into_iter().collect();
        let mut acc = alts.pop()?;
        while let Some(prev) = alts.pop() {
            acc = Expr::choice(prev, acc);
        }
        Some(acc)
    }

    /// Concatenation of the terminals of `s`.
    pub fn string(s: &str) -> Expr {
        Expr::seq_of(s.chars().map(Expr::Terminal))
    }

    /// The alternatives along the right spine of a choice. A choice nested
    /// as a left operand stays a single alternative.
    pub fn alternatives(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Expr::Choice(l, r) = cur {
            out.push(&**l);
            cur = r;
        }
        out.push(cur);
        out
    }

    /// Whether `&self` is `&p` and, if so, `p`.
    pub fn as_and(&self) -> Option<&Expr> {
        match self {
            Expr::Not(inner) => match &**inner {
                Expr::Not(p) => Some(p),
                _ => None,
            },
            _ => None,
        }
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::Empty | Expr::Terminal(_) | Expr::NonTerminal(_) => {}
            Expr::Seq(a, b) | Expr::Choice(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Expr::Not(a) | Expr::Star(a) => a.walk(f),
        }
    }

    pub fn is_predicate_free(&self) -> bool {
        let mut free = true;
        self.walk(&mut |e| {
            if matches!(e, Expr::Not(_)) {
                free = false;
            }
        });
        free
    }

    pub fn has_repetition(&self) -> bool {
        let mut found = false;
        self.walk(&mut |e| {
            if matches!(e, Expr::Star(_)) {
                found = true;
            }
        });
        found
    }

    pub fn nonterminals(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let Expr::NonTerminal(n) = e {
                out.insert(n.as_str());
            }
        });
        out
    }

    pub fn terminals(&self) -> BTreeSet<char> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let Expr::Terminal(c) = e {
                out.insert(*c);
            }
        });
        out
    }

    /// Flattens a concatenation of `Empty`, terminals and non-terminals into
    /// its symbols. `None` if any other node occurs.
    pub fn as_symbols(&self) -> Option<Vec<crate::Symbol>> {
        fn go(e: &Expr, out: &mut Vec<crate::Symbol>) -> bool {
            match e {
                Expr::Empty => true,
                Expr::Terminal(c) => {
                    out.push(crate::Symbol::T(*c));
                    true
                }
                Expr::NonTerminal(n) => {
                    out.push(crate::Symbol::N(n.clone()));
                    true
                }
                Expr::Seq(a, b) => go(a, out) && go(b, out),
                _ => false,
            }
        }
        let mut out = Vec::new();
        go(self, &mut out).then_some(out)
    }

    /// Applies `f` to every non-terminal name.
    pub fn rename(&self, f: &impl Fn(&str) -> String) -> Expr {
        match self {
            Expr::Empty => Expr::Empty,
            Expr::Terminal(c) => Expr::Terminal(*c),
            Expr::NonTerminal(n) => Expr::NonTerminal(f(n)),
            Expr::Seq(a, b) => Expr::seq(a.rename(f), b.rename(f)),
            Expr::Choice(a, b) => Expr::choice(a.rename(f), b.rename(f)),
            Expr::Not(a) => Expr::not(a.rename(f)),
            Expr::Star(a) => Expr::star(a.rename(f)),
        }
    }
}
