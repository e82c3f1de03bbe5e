//! Rewrites that turn grammars of the LL(1), strong-LL(k), right-linear
//! and LL-regular classes into PEGs with the same language, plus predicate
//! erasure.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::analysis::{
    block, compute_tables, is_ll_regular, is_nullable, is_right_linear, is_strong_llk,
    nullable_nonterminals, RegularPartition,
};
use crate::grammar::render_grammar;
use crate::strings::shortlex;
use crate::{Error, Expr, Grammar, Result, END_MARKER};

/// Which rewrite produced a grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    ReorderLl1,
    PhiBefore { k: usize },
    PhiAfter { k: usize },
    Pi,
    Rho,
    Erase,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::ReorderLl1 => f.write_str("reorder_ll1"),
            Provenance::PhiBefore { k } => write!(f, "phi_before k={k}"),
            Provenance::PhiAfter { k } => write!(f, "phi_after k={k}"),
            Provenance::Pi => f.write_str("pi"),
            Provenance::Rho => f.write_str("rho"),
            Provenance::Erase => f.write_str("erase"),
        }
    }
}

/// A rewritten grammar and the number of end markers its inputs need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformedGrammar {
    pub grammar: Grammar,
    pub provenance: Provenance,
    pub marker_arity: usize,
}

impl TransformedGrammar {
    /// The grammar text behind a `# transform: …` header line.
    pub fn render(&self) -> String {
        format!(
            "# transform: {}\n{}",
            self.provenance,
            render_grammar(&self.grammar)
        )
    }
}

/// Puts the nullable alternatives of every top-level choice last, keeping
/// the relative order otherwise. The CFG language does not change.
pub fn reorder_ll1(g: &Grammar) -> Result<Grammar> {
    if !g.is_predicate_free() {
        return Err(Error::NotPredicateFree);
    }
    let nullable = nullable_nonterminals(g);
    g.map_exprs(|_, e| {
        let (mut solid, empty): (Vec<&Expr>, Vec<&Expr>) = e
            .alternatives()
            .into_iter()
            .partition(|alt| !is_nullable(alt, &nullable));
        solid.extend(empty);
        Expr::choice_of(solid.into_iter().cloned()).expect("at least one alternative")
    })
}

/// The concatenation of the characters of `x`; `ε` for the empty string.
pub fn string_to_expr(x: &str) -> Expr {
    Expr::string(x)
}

/// A choice with one alternative per string, shortest first and then by
/// code point; `ε` for the empty set.
pub fn choice_of<'a>(strings: impl IntoIterator<Item = &'a String>) -> Expr {
    let mut v: Vec<&String> = strings.into_iter().collect();
    v.sort_by(|a, b| shortlex(a, b));
    v.dedup();
    Expr::choice_of(v.into_iter().map(|s| string_to_expr(s))).unwrap_or(Expr::Empty)
}

fn require_strong_llk(g: &Grammar, k: usize) -> Result<()> {
    let report = is_strong_llk(g, k)?;
    if report.holds() {
        Ok(())
    } else {
        Err(Error::NotInClass {
            class: "strong-LL(k)",
            report: Box::new(report),
        })
    }
}

/// Rebuilds every production as a choice of its alternatives, each passed
/// through `guard(name, alternative, is_last)`.
/// Rewrites every alternative of every production with `guard`, then adds
/// the `extra` rules the guards may refer to.
fn guard_alternatives(
    g: &Grammar,
    extra: Vec<(String, Expr)>,
    mut guard: impl FnMut(&str, &Expr, bool) -> Expr,
) -> Result<Grammar> {
    let mut rules: Vec<(String, Expr)> = g
        .rules()
        .iter()
        .map(|(name, e)| {
            let alts = e.alternatives();
            let last = alts.len() - 1;
            let guarded = alts
                .iter()
                .enumerate()
                .map(|(i, alt)| guard(name, alt, i == last));
            (
                name.clone(),
                Expr::choice_of(guarded).expect("at least one alternative"),
            )
        })
        .collect();
    rules.extend(extra);
    Grammar::new(g.start().clone(), rules)
}

/// The before LL(k)-PEG of a strong-LL(k) grammar: each alternative `p`
/// of `A` becomes `&(FIRST_k(p) •_k FOLLOW_k(A)) p`. With `exempt_last`,
/// the last alternative of each production is left unguarded.
pub fn phi_before_with(g: &Grammar, k: usize, exempt_last: bool) -> Result<TransformedGrammar> {
    require_strong_llk(g, k)?;
    let tables = compute_tables(g, k)?;
    let grammar = guard_alternatives(g, Vec::new(), |name, alt, last| {
        if last && exempt_last {
            alt.clone()
        } else {
            Expr::seq(
                Expr::and(choice_of(&tables.lookahead(alt, name))),
                alt.clone(),
            )
        }
    })?;
    Ok(TransformedGrammar {
        grammar,
        provenance: Provenance::PhiBefore { k },
        marker_arity: k,
    })
}

/// [`phi_before_with`] with the last alternative exempt.
pub fn phi_before(g: &Grammar, k: usize) -> Result<TransformedGrammar> {
    phi_before_with(g, k, true)
}

/// The after LL(k)-PEG of a strong-LL(k) grammar: each alternative `p` of
/// `A` becomes `p &FOLLOW_k(A)`, the guard going at the end of the
/// concatenation.
pub fn phi_after_with(g: &Grammar, k: usize, exempt_last: bool) -> Result<TransformedGrammar> {
    require_strong_llk(g, k)?;
    let tables = compute_tables(g, k)?;
    let grammar = guard_alternatives(g, Vec::new(), |name, alt, last| {
        if last && exempt_last {
            alt.clone()
        } else {
            append(alt, Expr::and(choice_of(&tables.follow_of(name))))
        }
    })?;
    Ok(TransformedGrammar {
        grammar,
        provenance: Provenance::PhiAfter { k },
        marker_arity: k,
    })
}

/// [`phi_after_with`] guarding every alternative.
pub fn phi_after(g: &Grammar, k: usize) -> Result<TransformedGrammar> {
    phi_after_with(g, k, false)
}

fn append(e: &Expr, tail: Expr) -> Expr {
    match e {
        Expr::Seq(a, b) => Expr::seq((**a).clone(), append(b, tail)),
        Expr::Empty => tail,
        _ => Expr::seq(e.clone(), tail),
    }
}

/// `Π`: ends every string of a right-linear grammar with the end marker,
/// which gives its language the prefix property.
pub fn pi_prefix(g: &Grammar) -> Result<TransformedGrammar> {
    if !is_right_linear(g) {
        return Err(Error::NotRightLinear);
    }
    fn pi(e: &Expr) -> Expr {
        match e {
            Expr::Empty => Expr::t(END_MARKER),
            Expr::Terminal(c) => Expr::seq(Expr::t(*c), Expr::t(END_MARKER)),
            Expr::NonTerminal(_) => e.clone(),
            Expr::Seq(a, b) => Expr::seq((**a).clone(), pi(b)),
            Expr::Choice(a, b) => Expr::choice(pi(a), pi(b)),
            Expr::Not(_) | Expr::Star(_) => unreachable!("right-linearity checked"),
        }
    }
    Ok(TransformedGrammar {
        grammar: g.map_exprs(|_, e| pi(e))?,
        provenance: Provenance::Pi,
        marker_arity: 1,
    })
}

/// `ℛ(G)`: guards each alternative `p` of `A` with an and-predicate over
/// the start expressions of the blocks in `BLOCK(p, A)`, and adds the
/// block grammars with their non-terminals renamed to `_<block>_<name>`.
/// With `exempt_last`, the last alternative of each production is left
/// unguarded.
pub fn rho_ll_regular_with(
    g: &Grammar,
    pi: &RegularPartition,
    exempt_last: bool,
) -> Result<TransformedGrammar> {
    let report = is_ll_regular(g, pi)?;
    if !report.holds() {
        return Err(Error::NotInClass {
            class: "LL-regular",
            report: Box::new(report),
        });
    }

    let mut taken: BTreeSet<String> = g.nonterminals().map(String::from).collect();
    let mut starts: BTreeMap<&str, Expr> = BTreeMap::new();
    let mut extra: Vec<(String, Expr)> = Vec::new();
    for (block_name, bg) in pi.blocks() {
        let mut names = BTreeMap::new();
        for n in bg.nonterminals() {
            let mut name = format!("_{block_name}_{n}");
            let mut i = 1;
            while taken.contains(&name) {
                i += 1;
                name = format!("_{block_name}_{n}_{i}");
            }
            taken.insert(name.clone());
            names.insert(String::from(n), name);
        }
        let rename = |n: &str| names[n].clone();
        starts.insert(block_name, bg.start().rename(&rename));
        extra.extend(
            bg.rules()
                .iter()
                .map(|(n, e)| (rename(n), e.rename(&rename))),
        );
    }

    let mut failure = None;
    let grammar = guard_alternatives(g, extra, |name, alt, last| {
        if last && exempt_last {
            return alt.clone();
        }
        match block(g, alt, name, pi) {
            Ok(blocks) => {
                let guard = Expr::choice_of(
                    pi.names()
                        .filter(|b| blocks.contains(*b))
                        .map(|b| starts[b].clone()),
                )
                .unwrap_or(Expr::Empty);
                Expr::seq(Expr::and(guard), alt.clone())
            }
            Err(e) => {
                failure.get_or_insert(e);
                alt.clone()
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(TransformedGrammar {
        grammar,
        provenance: Provenance::Rho,
        marker_arity: 1,
    })
}

/// [`rho_ll_regular_with`] with the last alternative exempt.
pub fn rho_ll_regular(g: &Grammar, pi: &RegularPartition) -> Result<TransformedGrammar> {
    rho_ll_regular_with(g, pi, true)
}

/// Removes every predicate: a predicate concatenated with an expression
/// erases to that expression, and a lone predicate to `ε`.
pub fn erase_predicates(g: &Grammar) -> Grammar {
    g.map_exprs(|_, e| erase(e))
        .expect("erasure only drops references")
}

fn erase(e: &Expr) -> Expr {
    match e {
        Expr::Empty | Expr::Terminal(_) | Expr::NonTerminal(_) => e.clone(),
        Expr::Seq(a, b) => match (&**a, &**b) {
            (Expr::Not(_), rest) | (rest, Expr::Not(_)) => erase(rest),
            _ => Expr::seq(erase(a), erase(b)),
        },
        Expr::Choice(a, b) => Expr::choice(erase(a), erase(b)),
        Expr::Not(_) => Expr::Empty,
        Expr::Star(a) => Expr::star(erase(a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, g, marked};
    use crate::peg::peg_language;
    use crate::strings::{set_of, LanguageMode};

    #[test]
    fn reorder_moves_nullable_last() {
        assert_eq!(
            reorder_ll1(&g("start: S\nS -> eps | 'a'")).unwrap(),
            g("start: S\nS -> 'a' | eps")
        );
        let g3 = g(fixtures::G3);
        assert_eq!(reorder_ll1(&g3).unwrap(), g3);
    }

    #[test]
    fn reorder_fixes_the_peg_language() {
        let before = g("start: S\nS -> eps | 'a'");
        assert_eq!(
            peg_language(&before, 1, LanguageMode::Exact).unwrap(),
            set_of([""])
        );
        let after = reorder_ll1(&before).unwrap();
        assert_eq!(
            peg_language(&after, 1, LanguageMode::Exact).unwrap(),
            set_of(["", "a"])
        );
    }

    #[test]
    fn lookahead_choices() {
        let e = choice_of(&set_of(["c$", "ab"]));
        assert_eq!(e, Expr::choice(Expr::string("ab"), Expr::string("c$")));
        assert_eq!(choice_of(&BTreeSet::new()), Expr::Empty);
        assert_eq!(choice_of(&set_of(["$$"])), Expr::string("$$"));
    }

    #[test]
    fn phi_before_of_g2() {
        let t = phi_before(&g(fixtures::G2), 2).unwrap();
        let expected = marked(
            "start: S
S -> &('a' 'b' | 'c' '$') A | B
A -> &('a' 'b') 'a' 'b' | C
B -> &('a' '$') 'a' | C 'd'
C -> 'c'",
        );
        assert_eq!(t.grammar, expected);
        assert_eq!(t.marker_arity, 2);
    }

    #[test]
    fn phi_before_guarding_everything_matches_the_formal_rule() {
        let t = phi_before_with(&g(fixtures::G2), 2, false).unwrap();
        let expected = marked(
            "start: S
S -> &('a' 'b' | 'c' '$') A | &('a' '$' | 'c' 'd') B
A -> &('a' 'b') 'a' 'b' | &('c' '$') C
B -> &('a' '$') 'a' | &('c' 'd') C 'd'
C -> &('c' '$' | 'c' 'd') 'c'",
        );
        assert_eq!(t.grammar, expected);
    }

    #[test]
    fn phi_after_of_g2() {
        let t = phi_after(&g(fixtures::G2), 2).unwrap();
        let expected = marked(
            "start: S
S -> A &('$' '$') | B &('$' '$')
A -> 'a' 'b' &('$' '$') | C &('$' '$')
B -> 'a' &('$' '$') | C 'd' &('$' '$')
C -> 'c' &('$' '$' | 'd' '$')",
        );
        assert_eq!(t.grammar, expected);
    }

    #[test]
    fn phi_refuses_grammars_outside_the_class() {
        let err = phi_before(&g(fixtures::G2), 1).unwrap_err();
        assert!(matches!(
            err,
            Error::NotInClass {
                class: "strong-LL(k)",
                ..
            }
        ));
    }

    #[test]
    fn erasure_undoes_the_guards() {
        let g2 = g(fixtures::G2);
        assert_eq!(erase_predicates(&phi_before(&g2, 2).unwrap().grammar), g2);
        assert_eq!(
            erase_predicates(&phi_before_with(&g2, 2, false).unwrap().grammar),
            g2
        );
        assert_eq!(erase_predicates(&phi_after(&g2, 2).unwrap().grammar), g2);
    }

    #[test]
    fn erasure_rules() {
        let e = Expr::seq(Expr::not(Expr::t('a')), Expr::string("bc"));
        assert_eq!(erase(&e), Expr::string("bc"));
        assert_eq!(erase(&Expr::not(Expr::t('a'))), Expr::Empty);
        assert_eq!(erase(&Expr::and(Expr::t('a'))), Expr::Empty);
    }

    #[test]
    fn pi_of_g4() {
        let t = pi_prefix(&g(fixtures::G4)).unwrap();
        assert_eq!(t.grammar, marked("start: S\nS -> 'a' '$' | 'a' 'a' '$'"));
        assert_eq!(t.marker_arity, 1);
        assert_eq!(
            pi_prefix(&g(fixtures::G1)).unwrap_err(),
            Error::NotRightLinear
        );
    }

    #[test]
    fn rho_refuses_g5_with_the_coarse_partition() {
        let err = rho_ll_regular(&g(fixtures::G5), &fixtures::g5_partition()).unwrap_err();
        assert!(matches!(
            err,
            Error::NotInClass {
                class: "LL-regular",
                ..
            }
        ));
    }

    #[test]
    fn provenance_header() {
        let t = phi_before(&g(fixtures::G2), 2).unwrap();
        assert!(t
            .render()
            .starts_with("# transform: phi_before k=2\nstart: S\n"));
    }
}
