//! Rewrites between grammar forms: repetition removal, production lists and
//! BNF structure.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{Grammar, ProductionList, Symbol};
use crate::{Error, Expr, Result};

/// Replaces every `p*` by a fresh non-terminal `A_p` with `A_p → p A_p | ε`.
/// Equal repetitions share one non-terminal. Names are `_R1, _R2, …` in
/// pre-order of first occurrence, start expression first.
pub fn desugar(g: &Grammar) -> Grammar {
    if !g.has_repetition() {
        return g.clone();
    }
    let mut d = Desugar {
        g,
        names: BTreeMap::new(),
        counter: 0,
        added: Vec::new(),
    };
    let start = d.rewrite(g.start());
    let mut rules: Vec<(String, Expr)> = g
        .rules()
        .iter()
        .map(|(n, e)| (n.clone(), d.rewrite(e)))
        .collect();
    rules.append(&mut d.added);
    Grammar::new(start, rules).expect("desugaring keeps references declared")
}

struct Desugar<'g> {
    g: &'g Grammar,
    names: BTreeMap<Expr, String>,
    counter: usize,
    added: Vec<(String, Expr)>,
}

impl Desugar<'_> {
    fn rewrite(&mut self, e: &Expr) -> Expr {
        match e {
            Expr::Empty | Expr::Terminal(_) | Expr::NonTerminal(_) => e.clone(),
            Expr::Seq(a, b) => Expr::seq(self.rewrite(a), self.rewrite(b)),
            Expr::Choice(a, b) => Expr::choice(self.rewrite(a), self.rewrite(b)),
            Expr::Not(a) => Expr::not(self.rewrite(a)),
            Expr::Star(p) => {
                if let Some(name) = self.names.get(&**p) {
                    return Expr::nt(name.clone());
                }
                let taken: BTreeSet<String> = self.names.values().cloned().collect();
                let name = self.g.fresh_name(&mut self.counter, &taken);
                self.names.insert((**p).clone(), name.clone());
                let body = self.rewrite(p);
                let rule = Expr::choice(Expr::seq(body, Expr::nt(name.clone())), Expr::Empty);
                self.added.push((name.clone(), rule));
                Expr::nt(name)
            }
        }
    }
}

/// `𝒯`: the productions of each non-terminal, in list order, combined
/// right-associatively into one choice. The start expression is the start
/// non-terminal.
pub fn cfg_to_pecfg(pl: &ProductionList) -> Result<Grammar> {
    let rules = pl
        .nonterminals()
        .into_iter()
        .map(|name| {
            let alts = pl
                .alternatives_of(name)
                .map(|rhs| Expr::seq_of(rhs.iter().map(Symbol::to_expr)));
            let e = Expr::choice_of(alts).expect("listed non-terminal has a production");
            (String::from(name), e)
        })
        .collect();
    Grammar::new(Expr::nt(pl.start.clone()), rules)
}

/// The inverse of [`cfg_to_pecfg`]: each right-hand side is flattened by
/// distributivity into choice-free alternatives, and repeated alternatives
/// of one non-terminal are dropped. A start expression that is not a single
/// non-terminal gets a fresh one.
pub fn pecfg_to_cfg(g: &Grammar) -> Result<ProductionList> {
    let mut productions = Vec::new();
    let start = match g.start_nonterminal() {
        Some(n) => String::from(n),
        None => {
            let name = g.fresh_name(&mut 0, &BTreeSet::new());
            push_alternatives(&mut productions, &name, flatten(g.start())?);
            name
        }
    };
    for (name, e) in g.rules() {
        push_alternatives(&mut productions, name, flatten(e)?);
    }
    Ok(ProductionList { start, productions })
}

fn push_alternatives(out: &mut Vec<(String, Vec<Symbol>)>, name: &str, alts: Vec<Vec<Symbol>>) {
    let mut seen = BTreeSet::new();
    for alt in alts {
        if seen.insert(alt.clone()) {
            out.push((String::from(name), alt));
        }
    }
}

/// Distributes concatenation over choice: the alternatives of `e` as symbol
/// strings, in choice order.
fn flatten(e: &Expr) -> Result<Vec<Vec<Symbol>>> {
    Ok(match e {
        Expr::Empty => vec![Vec::new()],
        Expr::Terminal(c) => vec![vec![Symbol::T(*c)]],
        Expr::NonTerminal(n) => vec![vec![Symbol::N(n.clone())]],
        Expr::Seq(a, b) => {
            let left = flatten(a)?;
            let right = flatten(b)?;
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    out.push(l.iter().chain(r).cloned().collect());
                }
            }
            out
        }
        Expr::Choice(a, b) => {
            let mut out = flatten(a)?;
            out.extend(flatten(b)?);
            out
        }
        Expr::Not(_) => return Err(Error::NotPredicateFree),
        Expr::Star(_) => return Err(Error::RepetitionPresent),
    })
}

fn has_choice_under_seq(e: &Expr) -> bool {
    fn contains_choice(e: &Expr) -> bool {
        let mut found = false;
        e.walk(&mut |x| found |= matches!(x, Expr::Choice(..)));
        found
    }
    let mut found = false;
    e.walk(&mut |x| {
        if let Expr::Seq(a, b) = x {
            found |= contains_choice(a) || contains_choice(b);
        }
    });
    found
}

fn distribute(e: &Expr) -> Result<Expr> {
    let alts = flatten(e)?
        .into_iter()
        .map(|alt| Expr::seq_of(alt.iter().map(Symbol::to_expr)));
    Ok(Expr::choice_of(alts).expect("flattening yields at least one alternative"))
}

/// Establishes BNF properties 1 and 2: productions with a choice inside a
/// concatenation are distributed into a flat choice, and a start expression
/// other than a single non-terminal moves into a fresh production.
/// Productions that already comply are left untouched. Language under the
/// CFG interpretation is preserved.
pub fn normalize_bnf(g: &Grammar) -> Result<Grammar> {
    if !g.is_predicate_free() {
        return Err(Error::NotPredicateFree);
    }
    if g.has_repetition() {
        return Err(Error::RepetitionPresent);
    }
    let mut rules = Vec::with_capacity(g.rules().len() + 1);
    for (name, e) in g.rules() {
        let e = if has_choice_under_seq(e) {
            distribute(e)?
        } else {
            e.clone()
        };
        rules.push((name.clone(), e));
    }
    let start = match g.start() {
        Expr::NonTerminal(_) => g.start().clone(),
        other => {
            let name = g.fresh_name(&mut 0, &BTreeSet::new());
            let body = if has_choice_under_seq(other) {
                distribute(other)?
            } else {
                other.clone()
            };
            rules.push((name.clone(), body));
            Expr::nt(name)
        }
    };
    Grammar::new(start, rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, g};
    use crate::grammar::check_bnf;

    fn pl(start: &str, prods: &[(&str, &str)]) -> ProductionList {
        ProductionList {
            start: start.into(),
            productions: prods
                .iter()
                .map(|(n, rhs)| {
                    let syms = rhs
                        .chars()
                        .map(|c| {
                            if c.is_ascii_uppercase() {
                                Symbol::N(c.into())
                            } else {
                                Symbol::T(c)
                            }
                        })
                        .collect();
                    (String::from(*n), syms)
                })
                .collect(),
        }
    }

    #[test]
    fn desugar_introduces_one_rule_per_repetition() {
        let out = desugar(&g("start: S\nS -> 'a'*"));
        assert_eq!(out, g("start: S\nS -> _R1\n_R1 -> 'a' _R1 | eps"));
    }

    #[test]
    fn equal_repetitions_share_a_rule() {
        let out = desugar(&g("start: S\nS -> 'a'* 'a'*"));
        assert_eq!(out, g("start: S\nS -> _R1 _R1\n_R1 -> 'a' _R1 | eps"));
    }

    #[test]
    fn fresh_names_skip_taken_ones() {
        let out = desugar(&g("start: S\nS -> 'b'* _R1\n_R1 -> 'a'"));
        assert_eq!(
            out,
            g("start: S\nS -> _R2 _R1\n_R1 -> 'a'\n_R2 -> 'b' _R2 | eps")
        );
    }

    #[test]
    fn nested_repetitions() {
        let out = desugar(&g("start: S\nS -> ('a'* 'b')*"));
        assert_eq!(
            out,
            g("start: S\nS -> _R1\n_R2 -> 'a' _R2 | eps\n_R1 -> (_R2 'b') _R1 | eps")
        );
    }

    #[test]
    fn desugar_without_repetition_is_identity() {
        let g2 = g(fixtures::G2);
        assert_eq!(desugar(&g2), g2);
    }

    #[test]
    fn to_pecfg_combines_right_associatively() {
        let list = pl(
            "A",
            &[
                ("A", "BC"),
                ("B", "a"),
                ("B", "b"),
                ("C", "c"),
                ("C", "d"),
                ("C", "e"),
            ],
        );
        let out = cfg_to_pecfg(&list).unwrap();
        assert_eq!(
            out,
            g("start: A\nA -> B C\nB -> 'a' | 'b'\nC -> 'c' | ('d' | 'e')")
        );
    }

    #[test]
    fn single_production_has_no_choice() {
        let out = cfg_to_pecfg(&pl("A", &[("A", "a")])).unwrap();
        assert_eq!(out.rule("A"), Some(&Expr::t('a')));
    }

    #[test]
    fn to_cfg_distributes_and_collapses() {
        let out = pecfg_to_cfg(&g("start: A\nA -> ('a' | 'b') 'c' | 'a' 'c' | eps")).unwrap();
        assert_eq!(out, pl("A", &[("A", "ac"), ("A", "bc"), ("A", "")]));
        let out = pecfg_to_cfg(&g("start: C\nC -> 'c' | ('d' | 'e')")).unwrap();
        assert_eq!(out, pl("C", &[("C", "c"), ("C", "d"), ("C", "e")]));
    }

    #[test]
    fn to_cfg_rejects_predicates() {
        let err = pecfg_to_cfg(&g("start: S\nS -> !'a'")).unwrap_err();
        assert_eq!(err, Error::NotPredicateFree);
    }

    #[test]
    fn round_trip_through_production_lists() {
        let list = pl(
            "S",
            &[("S", "AB"), ("S", ""), ("A", "a"), ("A", "aA"), ("B", "b")],
        );
        assert_eq!(pecfg_to_cfg(&cfg_to_pecfg(&list).unwrap()).unwrap(), list);
    }

    #[test]
    fn normalize_distributes_and_adds_start() {
        let out = normalize_bnf(&g("start: S\nS -> ('a' | 'b') 'c'")).unwrap();
        assert_eq!(out, g("start: S\nS -> 'a' 'c' | 'b' 'c'"));
        let out = normalize_bnf(&g("start: A B\nA -> 'a'\nB -> 'b'")).unwrap();
        assert_eq!(out, g("start: _R1\nA -> 'a'\nB -> 'b'\n_R1 -> A B"));
        assert!(check_bnf(&out).is_bnf());
    }

    #[test]
    fn normalize_leaves_bnf_grammars_alone() {
        let g2 = g(fixtures::G2);
        assert_eq!(normalize_bnf(&g2).unwrap(), g2);
    }
}
