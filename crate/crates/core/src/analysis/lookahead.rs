//! `take_k`, `•_k` and the `FIRST_k` / `FOLLOW_k` tables.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;

use super::{is_nullable, nullable_nonterminals};
use crate::grammar::remove_useless;
use crate::{Error, Expr, Grammar, Result, END_MARKER};

/// The first `min(k, |x|)` characters of `x`.
pub fn take_k(x: &str, k: usize) -> String {
    x.chars().take(k).collect()
}

/// `X •_k Y`: the `k`-prefixes of every concatenation `xy`.
pub fn cat_k(xs: &BTreeSet<String>, ys: &BTreeSet<String>, k: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    if ys.is_empty() {
        return out;
    }
    for x in xs {
        if x.chars().count() >= k {
            out.insert(take_k(x, k));
            continue;
        }
        for y in ys {
            let mut s = x.clone();
            s.push_str(y);
            out.insert(take_k(&s, k));
        }
    }
    out
}

/// Lookahead sets for one `k`. `FIRST_k` strings have length at most `k`
/// (the empty string marks nullability); `FOLLOW_k` strings have length
/// exactly `k`, padded with end markers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LookaheadTables {
    pub k: usize,
    pub nullable: BTreeSet<String>,
    pub first: BTreeMap<String, BTreeSet<String>>,
    pub follow: BTreeMap<String, BTreeSet<String>>,
}

impl LookaheadTables {
    /// `FIRST_k` of an arbitrary expression over the grammar's
    /// non-terminals.
    pub fn first_of(&self, e: &Expr) -> BTreeSet<String> {
        first_expr(e, &self.first, self.k)
    }

    pub fn is_nullable(&self, e: &Expr) -> bool {
        is_nullable(e, &self.nullable)
    }

    pub fn follow_of(&self, name: &str) -> BTreeSet<String> {
        self.follow.get(name).cloned().unwrap_or_default()
    }

    /// `FIRST_k(p) •_k FOLLOW_k(A)`.
    pub fn lookahead(&self, p: &Expr, name: &str) -> BTreeSet<String> {
        cat_k(&self.first_of(p), &self.follow_of(name), self.k)
    }

    /// `{$^k}`, the context of the start expression.
    pub fn end_context(&self) -> BTreeSet<String> {
        BTreeSet::from([core::iter::repeat_n(END_MARKER, self.k).collect()])
    }
}

fn first_expr(e: &Expr, first: &BTreeMap<String, BTreeSet<String>>, k: usize) -> BTreeSet<String> {
    match e {
        Expr::Empty => BTreeSet::from([String::new()]),
        Expr::Terminal(c) => BTreeSet::from([take_k(&String::from(*c), k)]),
        Expr::NonTerminal(n) => first.get(n).cloned().unwrap_or_default(),
        Expr::Seq(a, b) => cat_k(&first_expr(a, first, k), &first_expr(b, first, k), k),
        Expr::Choice(a, b) => {
            let mut out = first_expr(a, first, k);
            out.extend(first_expr(b, first, k));
            out
        }
        Expr::Not(_) | Expr::Star(_) => unreachable!("checked before computing tables"),
    }
}

/// Computes nullable, `FIRST_k` and `FOLLOW_k` as least fixed points.
/// `FOLLOW_k` is taken over the grammar without useless symbols, so
/// unreachable or non-productive non-terminals have an empty follow set.
pub fn compute_tables(g: &Grammar, k: usize) -> Result<LookaheadTables> {
    if k == 0 {
        return Err(Error::InvalidLookahead(k));
    }
    if !g.is_predicate_free() {
        return Err(Error::NotPredicateFree);
    }
    if g.has_repetition() {
        return Err(Error::RepetitionPresent);
    }

    let mut first: BTreeMap<String, BTreeSet<String>> = g
        .nonterminals()
        .map(|n| (String::from(n), BTreeSet::new()))
        .collect();
    loop {
        let mut changed = false;
        for (name, e) in g.rules() {
            let next = first_expr(e, &first, k);
            let cur = first.get_mut(name).unwrap();
            if next.len() != cur.len() {
                *cur = next;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut tables = LookaheadTables {
        k,
        nullable: nullable_nonterminals(g),
        first,
        follow: g
            .nonterminals()
            .map(|n| (String::from(n), BTreeSet::new()))
            .collect(),
    };
    let pruned = match remove_useless(g) {
        Ok(p) => p,
        Err(Error::EmptyLanguage) => return Ok(tables),
        Err(e) => return Err(e),
    };
    let end = tables.end_context();
    loop {
        let mut changed = propagate_follow(pruned.start(), &end, &mut tables);
        for (name, e) in pruned.rules() {
            let ctx = tables.follow_of(name);
            changed |= propagate_follow(e, &ctx, &mut tables);
        }
        if !changed {
            return Ok(tables);
        }
    }
}

/// Adds `ctx` to the follow sets of non-terminals at the end of `e`, and
/// the right contexts of inner positions to the rest.
fn propagate_follow(e: &Expr, ctx: &BTreeSet<String>, tables: &mut LookaheadTables) -> bool {
    match e {
        Expr::Empty | Expr::Terminal(_) => false,
        Expr::NonTerminal(n) => {
            let set = tables.follow.get_mut(n).expect("declared non-terminal");
            let before = set.len();
            set.extend(ctx.iter().cloned());
            set.len() != before
        }
        Expr::Seq(a, b) => {
            let inner = cat_k(&tables.first_of(b), ctx, tables.k);
            let x = propagate_follow(a, &inner, tables);
            propagate_follow(b, ctx, tables) | x
        }
        Expr::Choice(a, b) => {
            let x = propagate_follow(a, ctx, tables);
            propagate_follow(b, ctx, tables) | x
        }
        Expr::Not(_) | Expr::Star(_) => unreachable!("checked before computing tables"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, g};
    use crate::strings::set_of;

    #[test]
    fn take_k_definition() {
        assert_eq!(take_k("abc", 2), "ab");
        assert_eq!(take_k("a", 2), "a");
        assert_eq!(take_k("", 3), "");
    }

    #[test]
    fn cat_k_examples() {
        assert_eq!(cat_k(&set_of(["ab"]), &set_of(["$$"]), 2), set_of(["ab"]));
        assert_eq!(cat_k(&set_of(["c"]), &set_of(["$$"]), 2), set_of(["c$"]));
        assert_eq!(cat_k(&set_of([""]), &set_of(["cd"]), 2), set_of(["cd"]));
        assert!(cat_k(&set_of(["a"]), &BTreeSet::new(), 2).is_empty());
    }

    #[test]
    fn g2_tables_for_k_2() {
        let t = compute_tables(&g(fixtures::G2), 2).unwrap();
        assert_eq!(t.follow_of("C"), set_of(["d$", "$$"]));
        assert_eq!(t.follow_of("S"), set_of(["$$"]));
        let a = t.first.get("A").unwrap();
        assert_eq!(*a, set_of(["ab", "c"]));
        let alts = g(fixtures::G2).rule("A").unwrap().clone();
        let alts = alts.alternatives();
        assert_eq!(t.first_of(alts[0]), set_of(["ab"]));
        assert_eq!(t.first_of(alts[1]), set_of(["c"]));
        assert_eq!(t.lookahead(alts[1], "A"), set_of(["c$"]));
    }

    #[test]
    fn g3_first_includes_empty() {
        let g3 = g(fixtures::G3);
        let t = compute_tables(&g3, 1).unwrap();
        assert_eq!(t.first_of(g3.rule("S").unwrap()), set_of(["a", ""]));
        assert_eq!(t.follow_of("S"), set_of(["$"]));
    }

    #[test]
    fn left_recursion_is_allowed() {
        let t = compute_tables(&g("start: A\nA -> A 'b' | 'a'"), 2).unwrap();
        assert_eq!(t.first.get("A").unwrap(), &set_of(["a", "ab"]));
        assert_eq!(t.follow_of("A"), set_of(["$$", "b$", "bb"]));
    }

    #[test]
    fn rejects_zero_and_predicates() {
        assert_eq!(
            compute_tables(&g(fixtures::G2), 0).unwrap_err(),
            Error::InvalidLookahead(0)
        );
        let err = compute_tables(&g("start: S\nS -> !'a'"), 1).unwrap_err();
        assert_eq!(err, Error::NotPredicateFree);
    }
}
