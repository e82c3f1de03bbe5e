use std::collections::BTreeSet;

use proptest::prelude::*;

use pegcfg_core::analysis::{block, cat_k, compute_tables, take_k, RegularPartition};
use pegcfg_core::cfg::cfg_language;
use pegcfg_core::equivalence::{random_grammar, Constraint, GeneratorConfig};
use pegcfg_core::grammar::{parse_grammar, parse_grammar_with, ParseOptions};
use pegcfg_core::strings::LanguageMode;
use pegcfg_core::{Expr, Grammar};

const G2: &str = "start: S\nS -> A | B\nA -> 'a' 'b' | C\nB -> 'a' | C 'd'\nC -> 'c'\n";
const G5: &str = "start: S\nS -> A | B\nA -> 'a' A | 'c'\nB -> 'a' B | 'd'\n";

const G5_FINE: &str = "\
block C0:
start: S
S -> 'c' '$'
block C1:
start: S
S -> 'a' T
T -> 'a' T | 'c' '$'
block D0:
start: S
S -> 'd' '$'
block D1:
start: S
S -> 'a' T
T -> 'a' T | 'd' '$'
block REST:
start: S
S -> 'a' S | '$' | 'c' R | 'd' R
R -> 'a' Q | 'c' Q | 'd' Q
Q -> 'a' Q | 'c' Q | 'd' Q | '$'
";

fn marked(text: &str) -> Grammar {
    let opts = ParseOptions {
        allow_marker: true,
        line_offset: 0,
    };
    parse_grammar_with(text, opts).unwrap()
}

/// One block per 2-prefix of `T*$`: `$`, `x$` and `xy`.
fn two_prefix_partition(terminals: &[char]) -> (RegularPartition, Vec<(String, String)>) {
    let any: Vec<String> = terminals.iter().map(|t| format!("'{t}' R")).collect();
    let rest = format!("R -> {} | '$'", any.join(" | "));
    let mut blocks = vec![("E".to_string(), marked("start: S\nS -> '$'"))];
    let mut prefixes = vec![("E".to_string(), "$".to_string())];
    for &x in terminals {
        blocks.push((
            format!("P{x}"),
            marked(&format!("start: S\nS -> '{x}' '$'")),
        ));
        prefixes.push((format!("P{x}"), format!("{x}$")));
        for &y in terminals {
            let text = format!("start: S\nS -> '{x}' '{y}' R\n{rest}");
            blocks.push((format!("P{x}{y}"), marked(&text)));
            prefixes.push((format!("P{x}{y}"), format!("{x}{y}")));
        }
    }
    (RegularPartition::new(blocks).unwrap(), prefixes)
}

/// `BLOCK(p, A)` by brute force: add `A -> '#' p` and read the blocks off
/// the strings `u # w` of the new language, with `w` followed by `$`.
fn block_by_enumeration(
    g: &Grammar,
    p: &Expr,
    a: &str,
    pi: &RegularPartition,
    max_len: usize,
) -> BTreeSet<String> {
    let marked_alt = g
        .map_exprs(|owner, e| match owner {
            Some(n) if n == a => Expr::choice(e.clone(), Expr::seq(Expr::t('#'), p.clone())),
            _ => e.clone(),
        })
        .unwrap();
    let alphabet = pi.alphabet(&g.terminals());
    let automata = pi.automata(&alphabet);
    let mut out = BTreeSet::new();
    for s in cfg_language(&marked_alt, max_len, LanguageMode::Exact).unwrap() {
        let parts: Vec<&str> = s.split('#').collect();
        if let [_, w] = parts.as_slice() {
            let w = format!("{w}$");
            for ((name, _), dfa) in pi.blocks().iter().zip(&automata) {
                if dfa.accepts(&w) {
                    out.insert(name.clone());
                }
            }
        }
    }
    out
}

fn check_blocks_against_enumeration(g: &Grammar, pi: &RegularPartition, max_len: usize) {
    for (name, e) in g.rules() {
        for alt in e.alternatives() {
            assert_eq!(
                block(g, alt, name, pi).unwrap(),
                block_by_enumeration(g, alt, name, pi, max_len),
                "{name} -> {alt:?}"
            );
        }
    }
}

#[test]
fn g5_blocks_match_enumeration() {
    let g5 = parse_grammar(G5).unwrap();
    check_blocks_against_enumeration(&g5, &RegularPartition::parse(G5_FINE).unwrap(), 7);
}

#[test]
fn g2_blocks_match_enumeration() {
    let g2 = parse_grammar(G2).unwrap();
    let (pi, _) = two_prefix_partition(&['a', 'b', 'c', 'd']);
    check_blocks_against_enumeration(&g2, &pi, 5);
}

#[test]
fn two_prefix_blocks_are_the_lookahead_sets() {
    let mut grammars = vec![parse_grammar(G2).unwrap()];
    for seed in 0..20 {
        let cfg = GeneratorConfig::with_seed(seed, Constraint::Any);
        grammars.push(random_grammar(&cfg).unwrap());
    }
    for g in &grammars {
        let terminals: Vec<char> = g.terminals().into_iter().collect();
        let (pi, prefixes) = two_prefix_partition(&terminals);
        assert!(pi.check(&g.terminals()).is_valid());
        let tables = compute_tables(g, 2).unwrap();
        for (name, e) in g.rules() {
            for alt in e.alternatives() {
                let expected: BTreeSet<String> = tables
                    .lookahead(alt, name)
                    .into_iter()
                    .map(|w| {
                        // a padded lookahead `x$$` names the block of `x$`
                        let stem = w.trim_end_matches('$');
                        let w = if stem.len() < w.len() {
                            format!("{stem}$")
                        } else {
                            w
                        };
                        prefixes.iter().find(|(_, p)| *p == w).unwrap().0.clone()
                    })
                    .collect();
                assert_eq!(
                    block(g, alt, name, &pi).unwrap(),
                    expected,
                    "{name} -> {alt:?}"
                );
            }
        }
    }
}

#[test]
fn g2_partition_has_21_blocks() {
    let (pi, _) = two_prefix_partition(&['a', 'b', 'c', 'd']);
    assert_eq!(pi.blocks().len(), 21);
}

#[test]
fn first_sets_cover_the_language() {
    for seed in 0..40 {
        let g = random_grammar(&GeneratorConfig::with_seed(seed, Constraint::Any)).unwrap();
        let language = cfg_language(&g, 5, LanguageMode::Exact).unwrap();
        for k in 1..=3 {
            let first = compute_tables(&g, k).unwrap().first_of(g.start());
            for x in &language {
                assert!(first.contains(&take_k(x, k)), "seed {seed}, k {k}: {x}");
            }
            // strings shorter than k are complete sentences
            for w in first.iter().filter(|w| w.len() < k) {
                assert!(language.contains(w), "seed {seed}, k {k}: {w}");
            }
        }
    }
}

fn small_set() -> impl Strategy<Value = BTreeSet<String>> {
    prop::collection::btree_set("[ab]{0,3}", 0..5)
}

proptest! {
    #[test]
    fn cat_k_truncates_every_concatenation(xs in small_set(), ys in small_set(), k in 1usize..4) {
        let expected: BTreeSet<String> = xs
            .iter()
            .flat_map(|x| ys.iter().map(move |y| take_k(&format!("{x}{y}"), k)))
            .collect();
        prop_assert_eq!(cat_k(&xs, &ys, k), expected);
    }

    #[test]
    fn take_k_is_a_prefix(x in "[ab$]{0,6}", k in 0usize..8) {
        let t = take_k(&x, k);
        prop_assert!(x.starts_with(&t));
        prop_assert_eq!(t.chars().count(), k.min(x.chars().count()));
    }
}
