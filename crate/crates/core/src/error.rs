use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use core::fmt;

use crate::analysis::ClassReport;
use crate::analysis::PartitionReport;
use crate::grammar::BnfReport;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed grammar or partition text. Line and column are 1-based.
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// The end marker was written in a grammar that may not contain it.
    MarkerNotAllowed {
        line: usize,
        column: usize,
    },
    UndeclaredNonTerminal(String),
    DuplicateProduction(String),
    /// A predicate was found where only CFG expressions are accepted.
    NotPredicateFree,
    /// A repetition survived where desugared grammars are required.
    RepetitionPresent,
    LeftRecursive(BTreeSet<String>),
    EmptyLanguage,
    NotRightLinear,
    NotBnf(Box<BnfReport>),
    /// An alternative that must be a plain symbol sequence is not one.
    NotSymbolSequence {
        nonterminal: String,
    },
    UnknownNonTerminal(String),
    InvalidPartition(Box<PartitionReport>),
    /// The grammar is outside the class a transformation requires.
    NotInClass {
        class: &'static str,
        report: Box<ClassReport>,
    },
    InvalidLookahead(usize),
    GenerationFailed {
        attempts: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Syntax {
                line,
                column,
                message,
            } => write!(f, "syntax error at {line}:{column}: {message}"),
            Error::MarkerNotAllowed { line, column } => write!(
                f,
                "end marker `$` is reserved and not allowed here ({line}:{column})"
            ),
            Error::UndeclaredNonTerminal(name) => write!(f, "undeclared non-terminal {name}"),
            Error::DuplicateProduction(name) => {
                write!(f, "more than one production for non-terminal {name}")
            }
            Error::NotPredicateFree => f.write_str("not a PE-CFG expression: predicate found"),
            Error::RepetitionPresent => f.write_str("repetition found; desugar the grammar first"),
            Error::LeftRecursive(names) => {
                f.write_str("grammar is left-recursive: {")?;
                for (i, name) in names.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(name)?;
                }
                f.write_str("}")
            }
            Error::EmptyLanguage => f.write_str("empty language: start expression is useless"),
            Error::NotRightLinear => f.write_str("grammar is not right-linear"),
            Error::NotBnf(report) => write!(f, "grammar does not have BNF structure: {report}"),
            Error::NotSymbolSequence { nonterminal } => write!(
                f,
                "alternative of {nonterminal} is not a sequence of symbols"
            ),
            Error::UnknownNonTerminal(name) => write!(f, "unknown non-terminal {name}"),
            Error::InvalidPartition(report) => write!(f, "invalid partition: {report}"),
            Error::NotInClass { class, report } => {
                write!(f, "grammar is not {class}: {report}")
            }
            Error::InvalidLookahead(k) => write!(f, "invalid lookahead length {k}"),
            Error::GenerationFailed { attempts } => write!(
                f,
                "no grammar satisfying the constraint after {attempts} attempts"
            ),
        }
    }
}

impl core::error::Error for Error {}
