//! Command-line front end for `pegcfg-core`.
//!
//! [`run`] parses the arguments, executes one subcommand and returns the
//! process exit code: 0 when the command succeeded or the checked property
//! holds, 1 when the property fails or the languages differ, 2 for usage,
//! parse and precondition errors.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pegcfg_core::analysis::{
    compute_tables, is_ll1, is_ll_regular, is_right_linear, is_strong_llk, prefix_property,
    ClassReport, RegularPartition,
};
use pegcfg_core::cfg::{cfg_language, count_proof_trees, CfgMatcher};
use pegcfg_core::equivalence::{compare_against, DiffReport};
use pegcfg_core::grammar::{
    check_bnf, desugar, left_recursive_nonterminals, parse_grammar_with, render_expr, ParseOptions,
};
use pegcfg_core::peg::{peg_language, PegMatchResult, PegMatcher};
use pegcfg_core::strings::{display, shortlex_sorted, LanguageMode};
use pegcfg_core::transforms::{
    erase_predicates, phi_after_with, phi_before_with, pi_prefix, reorder_ll1, rho_ll_regular_with,
    Provenance, TransformedGrammar,
};
use pegcfg_core::{Error, Grammar, END_MARKER};

/// Largest lookahead accepted by `--k`. `FIRST_k` sets grow as `|T|^k`.
pub const MAX_K: u8 = 4;

/// First line of a grammar file written by `transform`. Files starting with
/// it may use the end marker as a terminal.
pub const TRANSFORM_HEADER: &str = "# transform:";

#[derive(Debug, Parser)]
#[command(
    name = "pegcfg",
    version,
    about = "Compare grammars read as CFGs and as PEGs"
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Semantics {
    Cfg,
    Peg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Class {
    Ll1,
    Sllk,
    RightLinear,
    Prefix,
    LlRegular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    ReorderLl1,
    PhiBefore,
    PhiAfter,
    Pi,
    Rho,
    Erase,
}

fn lookahead() -> clap::builder::RangedI64ValueParser<u8> {
    clap::value_parser!(u8).range(1..=i64::from(MAX_K))
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a grammar and summarize its structure.
    Validate { file: PathBuf },
    /// Match one input from the start expression.
    Match {
        file: PathBuf,
        #[arg(long = "sem", value_enum)]
        semantics: Semantics,
        #[arg(long)]
        input: String,
        /// End markers appended to the input.
        #[arg(long, default_value_t = 0)]
        markers: usize,
        /// Count CFG proof trees per consumed length, up to this cap.
        #[arg(long, value_name = "CAP")]
        trees: Option<u64>,
        /// Run the PEG matcher without memoization.
        #[arg(long)]
        no_memo: bool,
    },
    /// List the exact language up to a length.
    Enumerate {
        file: PathBuf,
        #[arg(long = "sem", value_enum)]
        semantics: Semantics,
        #[arg(long)]
        max_len: usize,
        /// Match every string followed by this many end markers.
        #[arg(long)]
        markers: Option<usize>,
    },
    /// Print nullable, FIRST_k and FOLLOW_k.
    Analyze {
        file: PathBuf,
        #[arg(long, value_parser = lookahead())]
        k: u8,
    },
    /// Check a grammar class or property.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        class: Class,
        #[arg(long, value_parser = lookahead())]
        k: Option<u8>,
        #[arg(long)]
        partition: Option<PathBuf>,
    },
    /// Rewrite a grammar into a PEG, or erase predicates.
    Transform {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_parser = lookahead())]
        k: Option<u8>,
        #[arg(long)]
        partition: Option<PathBuf>,
        /// Guard the last alternative of every choice as well (phi-before
        /// and rho; phi-after always does).
        #[arg(long)]
        guard_last: bool,
        /// Output file; standard output when absent.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Compare the CFG and PEG languages up to a length.
    Compare {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[arg(long, default_value_t = 0)]
        markers: usize,
        /// Read the CFG side from this grammar instead.
        #[arg(long)]
        against: Option<PathBuf>,
    },
}

/// A failure that maps to exit code 2.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Grammar(PathBuf, Error),
    Core(Error),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Io(path, e) => write!(f, "{}: {e}", path.display()),
            Failure::Grammar(path, e) => write!(f, "{}: {e}", path.display()),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

/// What a command printed and whether its property held.
struct Outcome {
    text: String,
    json: Value,
    holds: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Outcome {
        Outcome {
            text,
            json,
            holds: true,
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            let written = match cli.format {
                Format::Text => writeln!(out, "{}", outcome.text.trim_end()),
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&outcome.json).expect("reports serialize")
                ),
            };
            if written.is_err() {
                return 2;
            }
            if outcome.holds {
                0
            } else {
                1
            }
        }
        Err(failure) => {
            let _ = writeln!(err, "error: {failure}");
            2
        }
    }
}

fn execute(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Validate { file } => validate(&load(file)?),
        Command::Match {
            file,
            semantics,
            input,
            markers,
            trees,
            no_memo,
        } => {
            let g = load(file)?;
            match_input(&g, *semantics, input, *markers, *trees, !no_memo)
        }
        Command::Enumerate {
            file,
            semantics,
            max_len,
            markers,
        } => {
            let g = load(file)?;
            let mode = match markers {
                Some(m) => LanguageMode::Marked { markers: *m },
                None => LanguageMode::Exact,
            };
            let lang = match semantics {
                Semantics::Cfg => cfg_language(&g, *max_len, mode)?,
                Semantics::Peg => peg_language(&g, *max_len, mode)?,
            };
            let items = sorted(&lang);
            Ok(Outcome::ok(
                items
                    .iter()
                    .map(|s| display(s))
                    .collect::<Vec<_>>()
                    .join("\n"),
                json!({ "language": items, "max_len": max_len }),
            ))
        }
        Command::Analyze { file, k } => analyze(&desugar(&load(file)?), usize::from(*k)),
        Command::Check {
            file,
            class,
            k,
            partition,
        } => {
            let g = desugar(&load(file)?);
            check(&g, *class, k.map(usize::from), partition.as_deref())
        }
        Command::Transform {
            file,
            kind,
            k,
            partition,
            guard_last,
            output,
        } => {
            let g = load(file)?;
            let t = transform(
                &g,
                *kind,
                k.map(usize::from),
                partition.as_deref(),
                *guard_last,
            )?;
            let rendered = t.render();
            let mut json = json!({
                "transform": t.provenance.to_string(),
                "markers": t.marker_arity,
            });
            if let Some(path) = output {
                fs::write(path, &rendered).map_err(|e| Failure::Io(path.clone(), e))?;
                json["output"] = json!(path.display().to_string());
                Ok(Outcome::ok(format!("wrote {}", path.display()), json))
            } else {
                json["grammar"] = json!(rendered);
                Ok(Outcome::ok(rendered, json))
            }
        }
        Command::Compare {
            file,
            max_len,
            markers,
            against,
        } => {
            let peg = load(file)?;
            let cfg = match against {
                Some(path) => load(path)?,
                None => peg.clone(),
            };
            let report = compare_against(&peg, &cfg, *max_len, *markers)?;
            Ok(Outcome {
                text: report.to_string(),
                json: diff_json(&report),
                holds: report.only_cfg.is_empty() && report.only_peg.is_empty(),
            })
        }
    }
}

/// Reads a grammar file. Files written by `transform` may use the end
/// marker.
fn load(path: &Path) -> Result<Grammar, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    let allow_marker = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .is_some_and(|l| l.trim_start().starts_with(TRANSFORM_HEADER));
    let opts = ParseOptions {
        allow_marker,
        line_offset: 0,
    };
    parse_grammar_with(&text, opts).map_err(|e| Failure::Grammar(path.to_path_buf(), e))
}

fn load_partition(path: Option<&Path>) -> Result<RegularPartition, Failure> {
    let path = path.ok_or_else(|| Failure::Usage("--partition is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    RegularPartition::parse(&text).map_err(|e| Failure::Grammar(path.to_path_buf(), e))
}

fn require_k(k: Option<usize>, what: &str) -> Result<usize, Failure> {
    k.ok_or_else(|| Failure::Usage(format!("--k is required for {what}")))
}

fn sorted(set: &BTreeSet<String>) -> Vec<String> {
    shortlex_sorted(set).into_iter().map(String::from).collect()
}

fn braces(set: &BTreeSet<String>) -> String {
    let items: Vec<&str> = shortlex_sorted(set).into_iter().map(display).collect();
    format!("{{{}}}", items.join(", "))
}

fn validate(g: &Grammar) -> Result<Outcome, Failure> {
    let desugared = desugar(g);
    let bnf = check_bnf(&desugared);
    let left_recursive = left_recursive_nonterminals(&desugared);
    let terminals: String = g.all_terminals().into_iter().collect();
    let nonterminals: Vec<&str> = g.nonterminals().collect();
    let text = format!(
        "valid\nstart: {}\nnon-terminals: {}\nterminals: {}\npredicate-free: {}\nrepetition: {}\nbnf: {}\nleft-recursive: {}",
        render_expr(g.start()),
        nonterminals.len(),
        terminals,
        g.is_predicate_free(),
        g.has_repetition(),
        if bnf.is_bnf() { "yes".to_string() } else { bnf.to_string() },
        braces(&left_recursive),
    );
    let json = json!({
        "valid": true,
        "start": render_expr(g.start()),
        "nonterminals": nonterminals,
        "terminals": terminals,
        "predicate_free": g.is_predicate_free(),
        "repetition": g.has_repetition(),
        "bnf": bnf.is_bnf(),
        "left_recursive": sorted(&left_recursive),
    });
    Ok(Outcome::ok(text, json))
}

fn match_input(
    g: &Grammar,
    semantics: Semantics,
    input: &str,
    markers: usize,
    trees: Option<u64>,
    memo: bool,
) -> Result<Outcome, Failure> {
    if input.contains(END_MARKER) {
        return Err(Failure::Usage(
            "inputs may not contain `$`; use --markers".into(),
        ));
    }
    let mut chars: Vec<char> = input.chars().collect();
    chars.extend(std::iter::repeat_n(END_MARKER, markers));
    match semantics {
        Semantics::Cfg => {
            let result = CfgMatcher::new(g, g.start())?.run(&chars);
            let consumed: Vec<usize> = result.consumed.iter().copied().collect();
            let list: Vec<String> = consumed.iter().map(usize::to_string).collect();
            let mut text = format!("consumed {{{}}}", list.join(", "));
            let mut json = json!({ "semantics": "cfg", "consumed": consumed });
            if let Some(cap) = trees {
                let full: String = chars.iter().collect();
                let count = count_proof_trees(g, &full, cap)?;
                for (len, c) in &count.per_suffix {
                    text.push_str(&format!("\ntrees {len}: {c}"));
                }
                text.push_str(&format!("\ntrees total: {}", count.total));
                json["trees"] = count
                    .per_suffix
                    .iter()
                    .map(|(len, c)| (len.to_string(), json!(c.to_string())))
                    .collect::<serde_json::Map<_, _>>()
                    .into();
                json["ambiguous"] = json!(count.is_ambiguous());
            }
            Ok(Outcome::ok(text, json))
        }
        Semantics::Peg => {
            let result = PegMatcher::new(g, g.start(), memo)?.run(&chars);
            let consumed = match result {
                PegMatchResult::Fail => Value::Null,
                PegMatchResult::Consumed(n) => json!(n),
            };
            Ok(Outcome::ok(
                result.to_string(),
                json!({ "semantics": "peg", "consumed": consumed }),
            ))
        }
    }
}

fn analyze(g: &Grammar, k: usize) -> Result<Outcome, Failure> {
    let tables = compute_tables(g, k)?;
    let mut text = format!("nullable: {}", braces(&tables.nullable));
    let mut rows = serde_json::Map::new();
    for name in g.nonterminals() {
        let first = tables.first.get(name).cloned().unwrap_or_default();
        let follow = tables.follow_of(name);
        text.push_str(&format!(
            "\n{name}: first {} follow {}",
            braces(&first),
            braces(&follow)
        ));
        rows.insert(
            name.to_string(),
            json!({ "first": sorted(&first), "follow": sorted(&follow) }),
        );
    }
    let json = json!({
        "k": k,
        "nullable": sorted(&tables.nullable),
        "nonterminals": rows,
    });
    Ok(Outcome::ok(text, json))
}

fn class_outcome(class: &str, report: &ClassReport) -> Outcome {
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "owner": v.owner.to_string(),
                "left": render_expr(&v.left),
                "right": render_expr(&v.right),
                "witnesses": sorted(&v.witnesses),
            })
        })
        .collect();
    let text = if report.holds() {
        "holds".to_string()
    } else {
        let lines: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        format!("fails\n{}", lines.join("\n"))
    };
    Outcome {
        text,
        json: json!({ "class": class, "holds": report.holds(), "violations": violations }),
        holds: report.holds(),
    }
}

fn bool_outcome(property: &str, holds: bool) -> Outcome {
    Outcome {
        text: if holds { "holds" } else { "fails" }.to_string(),
        json: json!({ "class": property, "holds": holds }),
        holds,
    }
}

fn check(
    g: &Grammar,
    class: Class,
    k: Option<usize>,
    partition: Option<&Path>,
) -> Result<Outcome, Failure> {
    Ok(match class {
        Class::Ll1 => class_outcome("ll1", &is_ll1(g)?),
        Class::Sllk => {
            let k = require_k(k, "--class sllk")?;
            class_outcome(&format!("strong-ll({k})"), &is_strong_llk(g, k)?)
        }
        Class::RightLinear => bool_outcome("right-linear", is_right_linear(g)),
        Class::Prefix => bool_outcome("prefix", prefix_property(g)?),
        Class::LlRegular => {
            let pi = load_partition(partition)?;
            class_outcome("ll-regular", &is_ll_regular(g, &pi)?)
        }
    })
}

fn transform(
    g: &Grammar,
    kind: Kind,
    k: Option<usize>,
    partition: Option<&Path>,
    guard_last: bool,
) -> Result<TransformedGrammar, Failure> {
    if kind == Kind::Erase {
        return Ok(TransformedGrammar {
            grammar: erase_predicates(g),
            provenance: Provenance::Erase,
            marker_arity: 0,
        });
    }
    let g = desugar(g);
    Ok(match kind {
        Kind::ReorderLl1 => TransformedGrammar {
            grammar: reorder_ll1(&g)?,
            provenance: Provenance::ReorderLl1,
            marker_arity: 0,
        },
        Kind::PhiBefore => phi_before_with(&g, require_k(k, "phi-before")?, !guard_last)?,
        Kind::PhiAfter => phi_after_with(&g, require_k(k, "phi-after")?, false)?,
        Kind::Pi => pi_prefix(&g)?,
        Kind::Rho => rho_ll_regular_with(&g, &load_partition(partition)?, !guard_last)?,
        Kind::Erase => unreachable!(),
    })
}

fn diff_json(report: &DiffReport) -> Value {
    json!({
        "verdict": report.verdict.to_string(),
        "max_len": report.max_len,
        "markers": report.markers,
        "common": report.common,
        "only_cfg": sorted(&report.only_cfg),
        "only_peg": sorted(&report.only_peg),
    })
}
