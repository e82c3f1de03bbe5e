//! Membership by rewriting sentential forms, sharing nothing with the
//! matchers.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use crate::grammar::{desugar, pecfg_to_cfg};
use crate::{Grammar, Result, Symbol};

/// Whether the start expression of `g` generates exactly `x`, decided by a
/// breadth-first search over leftmost sentential forms.
///
/// The search runs on an ε-free copy of the production list, so every
/// symbol of a form yields at least one terminal and forms longer than `x`
/// can be dropped.
pub fn oracle_membership(g: &Grammar, x: &str) -> Result<bool> {
    let pl = pecfg_to_cfg(&desugar(g))?;
    let nullable = nullable(&pl.productions);
    if x.is_empty() {
        return Ok(nullable.contains(&pl.start));
    }
    let x: Vec<char> = x.chars().collect();

    let mut rules: BTreeMap<&str, BTreeSet<Vec<Symbol>>> = BTreeMap::new();
    for (lhs, rhs) in &pl.productions {
        let set = rules.entry(lhs).or_default();
        for variant in without_nullables(rhs, &nullable) {
            let unit_loop = matches!(variant.as_slice(), [Symbol::N(n)] if n == lhs);
            if !variant.is_empty() && !unit_loop {
                set.insert(variant);
            }
        }
    }
    let min_yield = min_yields(&rules);

    let start = alloc::vec![Symbol::N(pl.start.clone())];
    let mut seen: BTreeSet<Vec<Symbol>> = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(form) = queue.pop_front() {
        // match the terminal prefix against x
        let lead = form
            .iter()
            .take_while(|s| matches!(s, Symbol::T(_)))
            .count();
        let prefix_ok = lead <= x.len()
            && form[..lead]
                .iter()
                .zip(&x)
                .all(|(s, c)| *s == Symbol::T(*c));
        if !prefix_ok {
            continue;
        }
        if lead == form.len() {
            if lead == x.len() {
                return Ok(true);
            }
            continue;
        }
        let Symbol::N(a) = &form[lead] else {
            unreachable!()
        };
        for rhs in rules.get(a.as_str()).into_iter().flatten() {
            let mut next = form[..lead].to_vec();
            next.extend(rhs.iter().cloned());
            next.extend(form[lead + 1..].iter().cloned());
            let size: usize = next
                .iter()
                .map(|s| match s {
                    Symbol::T(_) => 1,
                    Symbol::N(n) => min_yield.get(n.as_str()).copied().unwrap_or(usize::MAX),
                })
                .fold(0usize, usize::saturating_add);
            if size <= x.len() && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(false)
}

fn nullable(productions: &[(String, Vec<Symbol>)]) -> BTreeSet<String> {
    let mut set = BTreeSet::new();
    loop {
        let before = set.len();
        for (lhs, rhs) in productions {
            if rhs
                .iter()
                .all(|s| matches!(s, Symbol::N(n) if set.contains(n)))
            {
                set.insert(lhs.clone());
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

/// Every way of deleting some of the nullable non-terminals of `rhs`.
fn without_nullables(rhs: &[Symbol], nullable: &BTreeSet<String>) -> Vec<Vec<Symbol>> {
    let mut out: Vec<Vec<Symbol>> = alloc::vec![Vec::new()];
    for s in rhs {
        let optional = matches!(s, Symbol::N(n) if nullable.contains(n));
        let mut next = Vec::with_capacity(out.len() * 2);
        for v in out {
            if optional {
                next.push(v.clone());
            }
            let mut v = v;
            v.push(s.clone());
            next.push(v);
        }
        out = next;
    }
    out
}

/// Length of the shortest terminal string each non-terminal derives;
/// missing for non-productive ones.
fn min_yields<'a>(rules: &BTreeMap<&'a str, BTreeSet<Vec<Symbol>>>) -> BTreeMap<&'a str, usize> {
    let mut out: BTreeMap<&str, usize> = BTreeMap::new();
    loop {
        let mut changed = false;
        for (&lhs, alts) in rules {
            for rhs in alts {
                let size = rhs.iter().try_fold(0usize, |acc, s| match s {
                    Symbol::T(_) => Some(acc + 1),
                    Symbol::N(n) => out.get(n.as_str()).map(|m| acc + m),
                });
                if let Some(size) = size {
                    if out.get(lhs).is_none_or(|&m| size < m) {
                        out.insert(lhs, size);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return out;
        }
    }
}
