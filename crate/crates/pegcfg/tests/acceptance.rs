//! One PASS/FAIL line per acceptance criterion.
//!
//! Criterion 10 is expected to fail: with the given three-block partition
//! both alternatives of `A -> 'a' A | 'c'` only reach block B1, so G5 is not
//! LL-regular for it and the rewrite is refused. The same language check
//! passes with a finer partition in the core integration tests.

use std::collections::BTreeSet;

use pegcfg_core::analysis::{compute_tables, is_ll_regular, prefix_property, RegularPartition};
use pegcfg_core::cfg::{cfg_language, cfg_match, CfgMatcher};
use pegcfg_core::equivalence::{
    compare_languages, oracle_membership, random_grammar, Constraint, GeneratorConfig, Verdict,
};
use pegcfg_core::grammar::{parse_grammar, parse_grammar_with, render_grammar, ParseOptions};
use pegcfg_core::peg::{peg_language, peg_match, PegMatchResult, PegMatcher};
use pegcfg_core::strings::{strings_up_to, LanguageMode};
use pegcfg_core::transforms::{
    erase_predicates, phi_after, phi_before, pi_prefix, reorder_ll1, rho_ll_regular,
};
use pegcfg_core::{Expr, Grammar};

const G1: &str = "start: S\nS -> A B\nA -> 'a' 'b' 'a' | 'a'\nB -> 'b'\n";
const G2: &str = "start: S\nS -> A | B\nA -> 'a' 'b' | C\nB -> 'a' | C 'd'\nC -> 'c'\n";
const G2_SWAPPED: &str = "start: S\nS -> B | A\nA -> 'a' 'b' | C\nB -> 'a' | C 'd'\nC -> 'c'\n";
const G3: &str = "start: S\nS -> 'a' | eps\n";
const G4: &str = "start: S\nS -> 'a' | 'a' 'a'\n";
const G5: &str = "start: S\nS -> A | B\nA -> 'a' A | 'c'\nB -> 'a' B | 'd'\n";

const PHI_BEFORE_G2: &str = "start: S
S -> &('a' 'b' | 'c' '$') A | B
A -> &('a' 'b') 'a' 'b' | C
B -> &('a' '$') 'a' | C 'd'
C -> 'c'
";

const PHI_AFTER_G2: &str = "start: S
S -> A &('$' '$') | B &('$' '$')
A -> 'a' 'b' &('$' '$') | C &('$' '$')
B -> 'a' &('$' '$') | C 'd' &('$' '$')
C -> 'c' &('$' '$' | 'd' '$')
";

const PI_G5: &str = "\
block B1:
start: S
S -> 'a' S | 'c' '$'
block B2:
start: S
S -> 'a' S | 'd' '$'
block B3:
start: S
S -> 'a' S | '$' | 'c' R | 'd' R
R -> 'a' Q | 'c' Q | 'd' Q
Q -> 'a' Q | 'c' Q | 'd' Q | '$'
";

const PI_G5_OVERLAP: &str = "\
block B1:
start: S
S -> 'a' S | 'c' '$'
block B2:
start: S
S -> 'a' S | 'c' '$' | 'd' '$'
block B3:
start: S
S -> 'a' S | '$' | 'c' R | 'd' R
R -> 'a' Q | 'c' Q | 'd' Q
Q -> 'a' Q | 'c' Q | 'd' Q | '$'
";

/// Criteria that cannot pass as stated; see the module docs.
const KNOWN_FAILING: &[usize] = &[10];

type Outcome = Result<(), String>;

fn g(text: &str) -> Grammar {
    parse_grammar(text).unwrap()
}

fn marked(text: &str) -> Grammar {
    let opts = ParseOptions {
        allow_marker: true,
        line_offset: 0,
    };
    parse_grammar_with(text, opts).unwrap()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Outcome {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn c1_divergence() -> Outcome {
    let g1 = g(G1);
    let cfg = cfg_match(&g1, g1.start(), "abac").map_err(err)?;
    expect("cfg_match", cfg.consumed, BTreeSet::from([2]))?;
    let peg = peg_match(&g1, g1.start(), "abac", true).map_err(err)?;
    expect("peg_match", peg, PegMatchResult::Fail)
}

fn c2_language_triple() -> Outcome {
    let g2 = g(G2);
    expect(
        "CFG(G2)",
        cfg_language(&g2, 2, LanguageMode::Exact).map_err(err)?,
        set(&["a", "ab", "c", "cd"]),
    )?;
    expect(
        "PEG(G2)",
        peg_language(&g2, 2, LanguageMode::Exact).map_err(err)?,
        set(&["a", "ab", "c"]),
    )?;
    expect(
        "PEG(G2 with S -> B | A)",
        peg_language(&g(G2_SWAPPED), 2, LanguageMode::Exact).map_err(err)?,
        set(&["a", "c", "cd"]),
    )
}

fn listing_and_language(t: &Grammar, listing: &str) -> Outcome {
    expect("grammar", t, &marked(listing))?;
    expect("rendering", render_grammar(t).as_str(), listing)?;
    expect(
        "PEG language over x$$",
        peg_language(t, 2, LanguageMode::Marked { markers: 2 }).map_err(err)?,
        set(&["a", "ab", "c", "cd"]),
    )
}

fn c3_phi_before() -> Outcome {
    let t = phi_before(&g(G2), 2).map_err(err)?;
    listing_and_language(&t.grammar, PHI_BEFORE_G2)
}

fn c4_phi_after() -> Outcome {
    let t = phi_after(&g(G2), 2).map_err(err)?;
    listing_and_language(&t.grammar, PHI_AFTER_G2)
}

fn c5_erasure() -> Outcome {
    let t = phi_before(&g(G2), 2).map_err(err)?;
    expect(
        "erase(phi_before(G2, 2))",
        erase_predicates(&t.grammar),
        g(G2),
    )
}

fn c6_ll1_correspondence() -> Outcome {
    for seed in 0..50 {
        let src =
            random_grammar(&GeneratorConfig::with_seed(seed, Constraint::Ll1)).map_err(err)?;
        let peg = reorder_ll1(&src).map_err(err)?;
        let report = compare_languages(&peg, 6, 1).map_err(err)?;
        if report.verdict != Verdict::Equal {
            return Err(format!("seed {seed}:\n{}\n{report}", render_grammar(&peg)));
        }
    }
    Ok(())
}

fn complete_suite() -> Vec<Grammar> {
    (0..200)
        .map(|seed| {
            random_grammar(&GeneratorConfig::with_seed(seed, Constraint::Complete)).unwrap()
        })
        .collect()
}

fn c7_subset(suite: &[Grammar]) -> Outcome {
    for (seed, grammar) in suite.iter().enumerate() {
        let report = compare_languages(grammar, 6, 0).map_err(err)?;
        if !report.only_peg.is_empty() {
            return Err(format!(
                "seed {seed}: PEG-only strings {:?}",
                report.only_peg
            ));
        }
    }
    Ok(())
}

fn c8_memo_agreement(suite: &[Grammar]) -> Outcome {
    for (seed, grammar) in suite.iter().enumerate() {
        let memo = PegMatcher::new(grammar, grammar.start(), true).map_err(err)?;
        let naive = PegMatcher::new(grammar, grammar.start(), false).map_err(err)?;
        let alphabet: Vec<char> = grammar.all_terminals().into_iter().collect();
        for x in strings_up_to(&alphabet, 6) {
            let (a, b) = (memo.run(&x), naive.run(&x));
            if a != b {
                let x: String = x.into_iter().collect();
                return Err(format!("seed {seed}, input {x:?}: memo {a}, naive {b}"));
            }
        }
    }
    Ok(())
}

fn c9_right_linear() -> Outcome {
    let g4 = g(G4);
    expect(
        "CFG(G4)",
        cfg_language(&g4, 3, LanguageMode::Exact).map_err(err)?,
        set(&["a", "aa"]),
    )?;
    expect(
        "PEG(G4)",
        peg_language(&g4, 3, LanguageMode::Exact).map_err(err)?,
        set(&["a"]),
    )?;
    let t = pi_prefix(&g4).map_err(err)?;
    let want = set(&["a$", "aa$"]);
    expect(
        "CFG(Pi(G4))",
        cfg_language(&t.grammar, 4, LanguageMode::Exact).map_err(err)?,
        want.clone(),
    )?;
    expect(
        "PEG(Pi(G4))",
        peg_language(&t.grammar, 4, LanguageMode::Exact).map_err(err)?,
        want,
    )?;
    expect(
        "prefix_property(G4)",
        prefix_property(&g4).map_err(err)?,
        false,
    )?;
    expect(
        "prefix_property(Pi(G4))",
        prefix_property(&t.grammar).map_err(err)?,
        true,
    )
}

fn c10_ll_regular() -> Outcome {
    let g5 = g(G5);
    let pi = RegularPartition::parse(PI_G5).map_err(err)?;

    // the expected language itself, confirmed by the oracle
    let alphabet = ['a', 'c', 'd'];
    let mut want = BTreeSet::new();
    for n in 0..=5 {
        want.insert(format!("{}c", "a".repeat(n)));
        want.insert(format!("{}d", "a".repeat(n)));
    }
    for x in strings_up_to(&alphabet, 6) {
        let x: String = x.into_iter().collect();
        let member = oracle_membership(&g5, &x).map_err(err)?;
        expect(&format!("oracle on {x:?}"), member, want.contains(&x))?;
    }
    let cfg = cfg_language(&g5, 6, LanguageMode::Marked { markers: 1 }).map_err(err)?;
    expect("CFG(G5) over x$", &cfg, &want)?;

    let report = is_ll_regular(&g5, &pi).map_err(err)?;
    if !report.holds() {
        return Err(format!("is_ll_regular(G5, pi) fails: {report}"));
    }
    let t = rho_ll_regular(&g5, &pi).map_err(err)?;
    expect(
        "PEG(rho(G5, pi)) over x$",
        peg_language(&t.grammar, 6, LanguageMode::Marked { markers: 1 }).map_err(err)?,
        want,
    )
}

fn c11_oracle() -> Outcome {
    let mut grammars: Vec<(String, Grammar)> = [G1, G2, G3, G4, G5]
        .iter()
        .enumerate()
        .map(|(i, text)| (format!("G{}", i + 1), g(text)))
        .collect();
    for seed in 0..100 {
        let grammar =
            random_grammar(&GeneratorConfig::with_seed(seed, Constraint::Any)).map_err(err)?;
        grammars.push((format!("seed {seed}"), grammar));
    }
    for (name, grammar) in &grammars {
        let matcher = CfgMatcher::new(grammar, grammar.start()).map_err(err)?;
        let alphabet: Vec<char> = grammar.all_terminals().into_iter().collect();
        for x in strings_up_to(&alphabet, 5) {
            let by_matcher = matcher.run(&x).consumes(x.len());
            let x: String = x.into_iter().collect();
            let by_oracle = oracle_membership(grammar, &x).map_err(err)?;
            if by_matcher != by_oracle {
                return Err(format!(
                    "{name}, input {x:?}: matcher {by_matcher}, oracle {by_oracle}"
                ));
            }
        }
    }
    Ok(())
}

fn c12_analysis() -> Outcome {
    let tables = compute_tables(&g(G2), 2).map_err(err)?;
    expect("FOLLOW_2(G2, C)", tables.follow_of("C"), set(&["d$", "$$"]))?;
    let terminals = g(G5).terminals();
    let pi = RegularPartition::parse(PI_G5).map_err(err)?;
    let report = pi.check(&terminals);
    if !report.is_valid() {
        return Err(format!("pi rejected: {report}"));
    }
    let overlap = RegularPartition::parse(PI_G5_OVERLAP).map_err(err)?;
    let report = overlap.check(&terminals);
    expect(
        "overlap witnesses",
        report.overlaps,
        vec![("B1".to_string(), "B2".to_string(), "c$".to_string())],
    )
}

#[test]
fn acceptance() {
    let suite = complete_suite();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "divergence on abac", c1_divergence()),
        (2, "language triple of G2", c2_language_triple()),
        (3, "phi_before(G2, 2) listing and language", c3_phi_before()),
        (4, "phi_after(G2, 2) listing and language", c4_phi_after()),
        (5, "erasure gives back G2", c5_erasure()),
        (
            6,
            "LL(1) correspondence on 50 grammars",
            c6_ll1_correspondence(),
        ),
        (
            7,
            "PEG language within CFG language on 200 grammars",
            c7_subset(&suite),
        ),
        (
            8,
            "memoized and naive PEG matching agree",
            c8_memo_agreement(&suite),
        ),
        (9, "right-linear G4 and Pi", c9_right_linear()),
        (10, "LL-regular G5 and rho", c10_ll_regular()),
        (
            11,
            "matcher agrees with the derivation oracle",
            c11_oracle(),
        ),
        (12, "FOLLOW_2 and partition validity", c12_analysis()),
    ];

    let mut unexpected = Vec::new();
    for (id, name, outcome) in &results {
        match outcome {
            Ok(()) => println!("PASS {id:>2} {name}"),
            Err(detail) => {
                println!("FAIL {id:>2} {name}: {detail}");
                if !KNOWN_FAILING.contains(id) {
                    unexpected.push(*id);
                }
            }
        }
    }
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}

#[test]
fn g3_reordering_keeps_its_language() {
    let t = reorder_ll1(&g(G3)).unwrap();
    assert_eq!(t.rule("S"), Some(&Expr::choice(Expr::t('a'), Expr::Empty)));
    assert_eq!(compare_languages(&t, 1, 1).unwrap().verdict, Verdict::Equal);
}
