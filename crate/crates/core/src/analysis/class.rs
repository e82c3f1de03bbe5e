//! Grammar class checks: LL(1), strong-LL(k) and LL-regular.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::lookahead::{compute_tables, LookaheadTables};
use super::regular::{require_bnf_structure, BlockContext, RegularPartition};
use crate::grammar::{render_expr, Owner};
use crate::{Error, Expr, Grammar, Result};

/// A choice `left | right` whose branches cannot be told apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub owner: Owner,
    pub left: Expr,
    pub right: Expr,
    /// The lookahead strings (or block names) both branches share.
    pub witnesses: BTreeSet<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let witnesses: Vec<&str> = self
            .witnesses
            .iter()
            .map(|w| crate::strings::display(w))
            .collect();
        write!(
            f,
            "{}: `{}` | `{}` share {{{}}}",
            self.owner,
            render_expr(&self.left),
            render_expr(&self.right),
            witnesses.join(", ")
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassReport {
    pub violations: Vec<Violation>,
}

impl ClassReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            return f.write_str("holds");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| format!("{v}")).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Runs `conflict(left, right, context)` on every choice node. The
/// context is `FOLLOW_k(A)` inside `A`'s production and `{$^k}` in the
/// start expression.
fn check_choices(
    g: &Grammar,
    tables: &LookaheadTables,
    mut conflict: impl FnMut(&Expr, &Expr, &BTreeSet<String>) -> BTreeSet<String>,
) -> ClassReport {
    let mut report = ClassReport::default();
    let owners = core::iter::once((Owner::Start, g.start(), tables.end_context())).chain(
        g.rules()
            .iter()
            .map(|(n, e)| (Owner::Rule(n.clone()), e, tables.follow_of(n))),
    );
    for (owner, e, ctx) in owners {
        e.walk(&mut |node| {
            if let Expr::Choice(left, right) = node {
                let witnesses = conflict(left, right, &ctx);
                if !witnesses.is_empty() {
                    report.violations.push(Violation {
                        owner: owner.clone(),
                        left: (**left).clone(),
                        right: (**right).clone(),
                        witnesses,
                    });
                }
            }
        });
    }
    report
}

fn tables_for_class(g: &Grammar, k: usize) -> Result<LookaheadTables> {
    let tables = compute_tables(g, k)?;
    require_bnf_structure(g)?;
    Ok(tables)
}

fn intersect(a: &BTreeSet<String>, b: &BTreeSet<String>) -> BTreeSet<String> {
    a.intersection(b).cloned().collect()
}

/// The LL(1) restrictions on every choice `p1 | p2` of a production of
/// `A`: `FIRST(p1)` and `FIRST(p2)` are disjoint, and the `FIRST` set of
/// either branch is disjoint from `FOLLOW(A)` when the other branch is
/// nullable. Witnesses use the empty string for `ε`.
pub fn is_ll1(g: &Grammar) -> Result<ClassReport> {
    let tables = tables_for_class(g, 1)?;
    Ok(check_choices(g, &tables, |p1, p2, follow| {
        let (f1, f2) = (tables.first_of(p1), tables.first_of(p2));
        let mut out = intersect(&f1, &f2);
        if f2.contains("") {
            out.extend(intersect(&f1, follow));
        }
        if f1.contains("") {
            out.extend(intersect(&f2, follow));
        }
        out
    }))
}

/// The strong-LL(k) condition on every choice `p1 | p2` of a production of
/// `A`: `FIRST_k(p1) •_k FOLLOW_k(A)` and `FIRST_k(p2) •_k FOLLOW_k(A)`
/// are disjoint.
pub fn is_strong_llk(g: &Grammar, k: usize) -> Result<ClassReport> {
    let tables = tables_for_class(g, k)?;
    Ok(check_choices(g, &tables, |p1, p2, follow| {
        let l1 = super::cat_k(&tables.first_of(p1), follow, k);
        let l2 = super::cat_k(&tables.first_of(p2), follow, k);
        intersect(&l1, &l2)
    }))
}

/// The LL-regular condition: for every choice `p1 | p2` of a production
/// of `A`, `BLOCK(p1, A)` and `BLOCK(p2, A)` are disjoint. Each branch may
/// itself be a choice of symbol sequences; its blocks are the union over
/// those.
pub fn is_ll_regular(g: &Grammar, pi: &RegularPartition) -> Result<ClassReport> {
    let ctx = BlockContext::new(g, pi)?;
    let mut report = ClassReport::default();
    for (name, e) in g.rules() {
        let mut failure = None;
        e.walk(&mut |node| {
            let Expr::Choice(left, right) = node else {
                return;
            };
            let blocks = |p: &Expr| -> Result<BTreeSet<String>> {
                let mut out = BTreeSet::new();
                for alt in leaves(p) {
                    let syms = alt.as_symbols().ok_or_else(|| Error::NotSymbolSequence {
                        nonterminal: name.clone(),
                    })?;
                    out.extend(ctx.block(&syms, name));
                }
                Ok(out)
            };
            match (blocks(left), blocks(right)) {
                (Ok(b1), Ok(b2)) => {
                    let witnesses = intersect(&b1, &b2);
                    if !witnesses.is_empty() {
                        report.violations.push(Violation {
                            owner: Owner::Rule(name.clone()),
                            left: (**left).clone(),
                            right: (**right).clone(),
                            witnesses,
                        });
                    }
                }
                (Err(err), _) | (_, Err(err)) => failure = failure.take().or(Some(err)),
            }
        });
        if let Some(err) = failure {
            return Err(err);
        }
    }
    Ok(report)
}

/// The choice-free alternatives of `p`, in order.
fn leaves(p: &Expr) -> Vec<&Expr> {
    match p {
        Expr::Choice(a, b) => {
            let mut out = leaves(a);
            out.extend(leaves(b));
            out
        }
        _ => alloc::vec![p],
    }
}
