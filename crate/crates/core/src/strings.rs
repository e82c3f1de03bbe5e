//! Helpers for the finite string sets the analyses and enumerators trade in.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{Grammar, Result, END_MARKER};

/// Every string over `alphabet` of length at most `max_len`, shortest
/// first, then in alphabet order.
pub fn strings_up_to(alphabet: &[char], max_len: usize) -> Vec<Vec<char>> {
    let mut out: Vec<Vec<char>> = Vec::new();
    out.push(Vec::new());
    let mut layer_start = 0;
    for _ in 0..max_len {
        let layer_end = out.len();
        for i in layer_start..layer_end {
            for &c in alphabet {
                let mut s = out[i].clone();
                s.push(c);
                out.push(s);
            }
        }
        layer_start = layer_end;
    }
    out
}

/// Length first, then lexicographic by code point.
pub fn shortlex(a: &str, b: &str) -> Ordering {
    a.chars()
        .count()
        .cmp(&b.chars().count())
        .then_with(|| a.cmp(b))
}

/// The members of `set` in shortlex order.
pub fn shortlex_sorted<'a>(set: impl IntoIterator<Item = &'a String>) -> Vec<&'a str> {
    let mut v: Vec<&str> = set.into_iter().map(String::as_str).collect();
    v.sort_by(|a, b| shortlex(a, b));
    v
}

/// Renders a string for humans; the empty string shows as `ε`.
pub fn display(s: &str) -> &str {
    if s.is_empty() {
        "ε"
    } else {
        s
    }
}

/// How a matcher's results turn into a finite language.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LanguageMode {
    /// `x` is in the language when matching `x` consumes all of it. The
    /// alphabet includes the end marker if the grammar mentions it.
    Exact,
    /// `x` is in the language when matching `xy` consumes exactly `x` for
    /// some `y` of length at most `pad`.
    Prefix { pad: usize },
    /// Inputs are `x` followed by `markers` end markers, with `x` over the
    /// alphabet without the marker; `x` is in the language when matching
    /// consumes exactly `x`.
    Marked { markers: usize },
}

/// Enumerates the language of `g` up to `max_len` under `mode`, given
/// `consumes(input, len)`: whether matching `input` can consume exactly
/// `len` characters.
pub(crate) fn enumerate_language(
    g: &Grammar,
    max_len: usize,
    mode: LanguageMode,
    mut consumes: impl FnMut(&[char], usize) -> Result<bool>,
) -> Result<BTreeSet<String>> {
    let alphabet: Vec<char> = match mode {
        LanguageMode::Marked { .. } => g.terminals().into_iter().collect(),
        _ => g.all_terminals().into_iter().collect(),
    };
    let pads = match mode {
        LanguageMode::Prefix { pad } => strings_up_to(&alphabet, pad),
        LanguageMode::Exact => alloc::vec![Vec::new()],
        LanguageMode::Marked { markers } => alloc::vec![alloc::vec![END_MARKER; markers]],
    };
    let mut out = BTreeSet::new();
    for x in strings_up_to(&alphabet, max_len) {
        for y in &pads {
            let mut input = x.clone();
            input.extend_from_slice(y);
            if consumes(&input, x.len())? {
                out.insert(x.iter().collect());
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) fn set_of<const N: usize>(items: [&str; N]) -> BTreeSet<String> {
    items.into_iter().map(String::from).collect()
}
