//! Bounded comparison of the CFG and PEG languages.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::cfg::CfgMatcher;
use crate::peg::{PegMatchResult, PegMatcher};
use crate::strings::{shortlex_sorted, strings_up_to};
use crate::{Grammar, Result, END_MARKER};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    /// The PEG language is a proper subset of the CFG language.
    CfgSuperset,
    /// Some string is only in the PEG language. For a predicate-free
    /// grammar compared with itself this is a bug.
    Incomparable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "equal",
            Verdict::CfgSuperset => "cfg_superset",
            Verdict::Incomparable => "incomparable",
        })
    }
}

/// Exact languages under both semantics, compared up to `max_len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffReport {
    pub max_len: usize,
    pub markers: usize,
    pub only_cfg: BTreeSet<String>,
    pub only_peg: BTreeSet<String>,
    pub common: usize,
    pub verdict: Verdict,
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |set: &BTreeSet<String>| {
            shortlex_sorted(set)
                .into_iter()
                .map(|s| alloc::format!(" {}", crate::strings::display(s)))
                .collect::<String>()
        };
        writeln!(f, "verdict: {}", self.verdict)?;
        writeln!(f, "max-len: {}", self.max_len)?;
        writeln!(f, "markers: {}", self.markers)?;
        writeln!(f, "common: {}", self.common)?;
        writeln!(f, "only-cfg:{}", list(&self.only_cfg))?;
        write!(f, "only-peg:{}", list(&self.only_peg))
    }
}

/// Compares the CFG and PEG readings of `g` on every `x` of length at most
/// `max_len`, matched against `x` followed by `markers` end markers; `x`
/// belongs to a language when its match consumes exactly `x`.
pub fn compare_languages(g: &Grammar, max_len: usize, markers: usize) -> Result<DiffReport> {
    compare_against(g, g, max_len, markers)
}

/// Like [`compare_languages`], with the PEG reading taken from `peg` and
/// the CFG reading from `cfg`. The alphabet is the union of both.
pub fn compare_against(
    peg: &Grammar,
    cfg: &Grammar,
    max_len: usize,
    markers: usize,
) -> Result<DiffReport> {
    let mut alphabet: BTreeSet<char> = if markers == 0 {
        peg.all_terminals()
    } else {
        peg.terminals()
    };
    alphabet.extend(if markers == 0 {
        cfg.all_terminals()
    } else {
        cfg.terminals()
    });
    let alphabet: Vec<char> = alphabet.into_iter().collect();
    let matcher = PegMatcher::new(peg, peg.start(), true)?;
    let recognizer = CfgMatcher::new(cfg, cfg.start())?;

    let mut report = DiffReport {
        max_len,
        markers,
        only_cfg: BTreeSet::new(),
        only_peg: BTreeSet::new(),
        common: 0,
        verdict: Verdict::Equal,
    };
    for x in strings_up_to(&alphabet, max_len) {
        let mut input = x.clone();
        input.extend(core::iter::repeat_n(END_MARKER, markers));
        let in_cfg = recognizer.run(&input).consumes(x.len());
        let in_peg = matcher.run(&input) == PegMatchResult::Consumed(x.len());
        let x: String = x.into_iter().collect();
        match (in_cfg, in_peg) {
            (true, true) => report.common += 1,
            (true, false) => {
                report.only_cfg.insert(x);
            }
            (false, true) => {
                report.only_peg.insert(x);
            }
            (false, false) => {}
        }
    }
    report.verdict = if !report.only_peg.is_empty() {
        Verdict::Incomparable
    } else if !report.only_cfg.is_empty() {
        Verdict::CfgSuperset
    } else {
        Verdict::Equal
    };
    Ok(report)
}
