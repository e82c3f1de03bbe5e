//! Seeded random grammars, filtered by a class constraint.

use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{is_ll1, is_right_linear, is_strong_llk};
use crate::grammar::{cfg_to_pecfg, left_recursive_nonterminals, remove_useless};
use crate::{Error, Grammar, ProductionList, Result, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    Any,
    /// No left recursion, so the PEG matcher terminates.
    Complete,
    Ll1,
    StrongLlk(usize),
    RightLinear,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub max_nonterminals: usize,
    pub max_alternatives: usize,
    pub max_alternative_len: usize,
    /// Grammars with fewer alternatives in total after pruning are redrawn.
    pub min_alternatives: usize,
    pub terminals: Vec<char>,
    pub constraint: Constraint,
    pub max_attempts: usize,
}

impl Default for GeneratorConfig {
    fn default() -> GeneratorConfig {
        GeneratorConfig {
            seed: 0,
            max_nonterminals: 3,
            max_alternatives: 3,
            max_alternative_len: 3,
            min_alternatives: 3,
            terminals: alloc::vec!['a', 'b', 'c'],
            constraint: Constraint::Any,
            max_attempts: 10_000,
        }
    }
}

impl GeneratorConfig {
    pub fn with_seed(seed: u64, constraint: Constraint) -> GeneratorConfig {
        GeneratorConfig {
            seed,
            constraint,
            ..GeneratorConfig::default()
        }
    }
}

const NAMES: [&str; 8] = ["S", "A", "B", "C", "D", "E", "F", "G"];

/// A predicate-free grammar in BNF structure with no useless symbols,
/// drawn deterministically from the seed and rejected until it meets the
/// constraint.
pub fn random_grammar(cfg: &GeneratorConfig) -> Result<Grammar> {
    assert!(
        (1..=NAMES.len()).contains(&cfg.max_nonterminals) && !cfg.terminals.is_empty(),
        "generator needs 1 to {} non-terminals and a terminal",
        NAMES.len()
    );
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.max_attempts {
        let pl = draw(cfg, &mut rng);
        let Ok(g) = cfg_to_pecfg(&pl).and_then(|g| remove_useless(&g)) else {
            continue;
        };
        let size: usize = g.rules().iter().map(|(_, e)| e.alternatives().len()).sum();
        if size >= cfg.min_alternatives && satisfies(&g, cfg.constraint)? {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailed {
        attempts: cfg.max_attempts,
    })
}

fn satisfies(g: &Grammar, constraint: Constraint) -> Result<bool> {
    Ok(match constraint {
        Constraint::Any => true,
        Constraint::Complete => left_recursive_nonterminals(g).is_empty(),
        Constraint::Ll1 => is_ll1(g)?.holds(),
        Constraint::StrongLlk(k) => is_strong_llk(g, k)?.holds(),
        Constraint::RightLinear => is_right_linear(g),
    })
}

fn draw(cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> ProductionList {
    let n = rng.gen_range(1..=cfg.max_nonterminals);
    let names = &NAMES[..n];
    let mut productions = Vec::new();
    for &name in names {
        let alts = rng.gen_range(1..=cfg.max_alternatives);
        // LL-style constraints are rarely met by chance; start most
        // alternatives with distinct terminals instead
        let mut leads = cfg.terminals.clone();
        leads.shuffle(rng);
        for i in 0..alts {
            let rhs = match cfg.constraint {
                Constraint::RightLinear => right_linear_alternative(cfg, names, rng),
                Constraint::Ll1 | Constraint::StrongLlk(_) => {
                    let mut rhs = alternative(cfg, names, rng);
                    match leads.get(i) {
                        Some(&t) if rng.gen_bool(0.8) => rhs.insert(0, Symbol::T(t)),
                        _ => {}
                    }
                    rhs
                }
                Constraint::Any | Constraint::Complete => alternative(cfg, names, rng),
            };
            let production = (String::from(name), rhs);
            if !productions.contains(&production) {
                productions.push(production);
            }
        }
    }
    ProductionList {
        start: String::from(names[0]),
        productions,
    }
}

fn symbol(cfg: &GeneratorConfig, names: &[&str], rng: &mut ChaCha8Rng) -> Symbol {
    if rng.gen_bool(0.6) {
        Symbol::T(*cfg.terminals.choose(rng).unwrap())
    } else {
        Symbol::N(String::from(*names.choose(rng).unwrap()))
    }
}

// uniform lengths make ε far too common and most languages tiny
fn alternative_len(cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> usize {
    if cfg.max_alternative_len == 0 || rng.gen_bool(0.15) {
        0
    } else {
        rng.gen_range(1..=cfg.max_alternative_len)
    }
}

fn alternative(cfg: &GeneratorConfig, names: &[&str], rng: &mut ChaCha8Rng) -> Vec<Symbol> {
    let len = alternative_len(cfg, rng);
    (0..len).map(|_| symbol(cfg, names, rng)).collect()
}

fn right_linear_alternative(
    cfg: &GeneratorConfig,
    names: &[&str],
    rng: &mut ChaCha8Rng,
) -> Vec<Symbol> {
    let len = alternative_len(cfg, rng);
    let mut rhs: Vec<Symbol> = (0..len)
        .map(|_| Symbol::T(*cfg.terminals.choose(rng).unwrap()))
        .collect();
    // a terminal before every non-terminal rules out left recursion, so
    // the PEG reading stays complete
    if !rhs.is_empty() && rng.gen_bool(0.5) {
        rhs.push(Symbol::N(String::from(*names.choose(rng).unwrap())));
    }
    rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_grammar() {
        let cfg = GeneratorConfig::with_seed(1, Constraint::Any);
        assert_eq!(random_grammar(&cfg).unwrap(), random_grammar(&cfg).unwrap());
    }

    #[test]
    fn constraints_hold() {
        for seed in 0..20 {
            let g = random_grammar(&GeneratorConfig::with_seed(seed, Constraint::Ll1)).unwrap();
            assert!(is_ll1(&g).unwrap().holds());
            let g =
                random_grammar(&GeneratorConfig::with_seed(seed, Constraint::RightLinear)).unwrap();
            assert!(is_right_linear(&g));
            let g =
                random_grammar(&GeneratorConfig::with_seed(seed, Constraint::Complete)).unwrap();
            assert!(left_recursive_nonterminals(&g).is_empty());
        }
    }

    #[test]
    fn strong_ll2_for_many_seeds() {
        for seed in 0..100 {
            let g = random_grammar(&GeneratorConfig::with_seed(seed, Constraint::StrongLlk(2)))
                .unwrap();
            assert!(is_strong_llk(&g, 2).unwrap().holds());
        }
    }

    #[test]
    fn exhausted_attempts_are_an_error() {
        let cfg = GeneratorConfig {
            max_attempts: 0,
            ..GeneratorConfig::with_seed(3, Constraint::Ll1)
        };
        assert_eq!(
            random_grammar(&cfg).unwrap_err(),
            Error::GenerationFailed { attempts: 0 }
        );
    }
}
