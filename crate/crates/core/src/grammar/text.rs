//! The grammar text format.
//!
//! ```text
//! # comment
//! start: S
//! S -> A B
//! A -> 'a' 'b' 'a' | 'a'
//! B -> 'b'
//! ```
//!
//! Terminals are single-quoted characters (`'\''` and `'\\'` escape), `eps`
//! is the empty expression, juxtaposition concatenates, `|` is a
//! right-associative choice with the lowest precedence, `!p` and `&p` are
//! the predicates, postfix `*` repeats and parentheses group.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::Grammar;
use crate::{Error, Expr, Result, END_MARKER};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept the end marker `$` as a terminal.
    pub allow_marker: bool,
    /// Added to reported line numbers, for text embedded in a larger file.
    pub line_offset: usize,
}

/// Parses a user grammar; the end marker is rejected.
pub fn parse_grammar(text: &str) -> Result<Grammar> {
    parse_grammar_with(text, ParseOptions::default())
}

pub fn parse_grammar_with(text: &str, opts: ParseOptions) -> Result<Grammar> {
    let mut start: Option<Expr> = None;
    let mut rules: Vec<(String, Expr)> = Vec::new();
    let mut seen = BTreeSet::new();

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1 + opts.line_offset;
        let tokens = tokenize(line, line_no, opts)?;
        if tokens.is_empty() {
            continue;
        }
        let mut p = Parser {
            tokens: &tokens,
            pos: 0,
            line: line_no,
            eol_column: line.chars().count() + 1,
        };
        if start.is_none() {
            p.expect_start()?;
            start = Some(p.choice()?);
        } else {
            let (name, column) = p.rule_head()?;
            if !seen.insert(name.clone()) {
                return Err(Error::Syntax {
                    line: line_no,
                    column,
                    message: format!("duplicate production for {name}"),
                });
            }
            rules.push((name, p.choice()?));
        }
        p.finish()?;
    }

    let start = start.ok_or_else(|| Error::Syntax {
        line: 1 + opts.line_offset,
        column: 1,
        message: "missing `start:` line".into(),
    })?;
    Grammar::new(start, rules)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Term(char),
    Eps,
    Arrow,
    Colon,
    Bar,
    Bang,
    Amp,
    Star,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
}

fn tokenize(line: &str, line_no: usize, opts: ParseOptions) -> Result<Vec<Token>> {
    let chars: Vec<char> = line.chars().collect();
    let err = |column: usize, message: String| Error::Syntax {
        line: line_no,
        column,
        message,
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let single = |tok| Token { tok, column };
        match c {
            '#' => break,
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '|' => out.push(single(Tok::Bar)),
            '!' => out.push(single(Tok::Bang)),
            '&' => out.push(single(Tok::Amp)),
            '*' => out.push(single(Tok::Star)),
            '(' => out.push(single(Tok::LParen)),
            ')' => out.push(single(Tok::RParen)),
            ':' => out.push(single(Tok::Colon)),
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(single(Tok::Arrow));
                i += 2;
                continue;
            }
            '\'' => {
                let (value, len) = match (chars.get(i + 1), chars.get(i + 2), chars.get(i + 3)) {
                    (Some('\\'), Some(&e @ ('\'' | '\\')), Some('\'')) => (e, 4),
                    (Some(&v), Some('\''), _) if v != '\'' && v != '\\' => (v, 3),
                    _ => return Err(err(column, "malformed terminal; expected 'c'".into())),
                };
                if value == END_MARKER && !opts.allow_marker {
                    return Err(Error::MarkerNotAllowed {
                        line: line_no,
                        column,
                    });
                }
                out.push(single(Tok::Term(value)));
                i += len;
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let begin = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[begin..i].iter().collect();
                let tok = if word == "eps" {
                    Tok::Eps
                } else {
                    Tok::Ident(word)
                };
                out.push(Token { tok, column });
                continue;
            }
            other => return Err(err(column, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    line: usize,
    eol_column: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map_or(self.eol_column, |t| t.column)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expect_start(&mut self) -> Result<()> {
        match (self.peek(), self.tokens.get(self.pos + 1).map(|t| &t.tok)) {
            (Some(Tok::Ident(w)), Some(Tok::Colon)) if w == "start" => {
                self.pos += 2;
                Ok(())
            }
            _ => Err(self.error("expected `start: <expression>` as the first line")),
        }
    }

    fn rule_head(&mut self) -> Result<(String, usize)> {
        let column = self.column();
        let name = match self.bump() {
            Some(Tok::Ident(name)) => name,
            _ => {
                self.pos -= 1;
                return Err(self.error("expected `Name -> expression`"));
            }
        };
        if self.bump() != Some(Tok::Arrow) {
            self.pos -= 1;
            return Err(self.error("expected `->`"));
        }
        Ok((name, column))
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(Tok::RParen) => Err(self.error("unbalanced `)`")),
            Some(_) => Err(self.error("unexpected token")),
        }
    }

    fn choice(&mut self) -> Result<Expr> {
        let left = self.sequence()?;
        if self.peek() == Some(&Tok::Bar) {
            self.pos += 1;
            let right = self.choice()?;
            return Ok(Expr::choice(left, right));
        }
        Ok(left)
    }

    fn sequence(&mut self) -> Result<Expr> {
        let mut items = Vec::new();
        while matches!(
            self.peek(),
            Some(Tok::Ident(_) | Tok::Term(_) | Tok::Eps | Tok::Bang | Tok::Amp | Tok::LParen)
        ) {
            items.push(self.prefix()?);
        }
        if items.is_empty() {
            return Err(self.error("expected an expression (use `eps` for the empty one)"));
        }
        Ok(Expr::seq_of(items))
    }

    fn prefix(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(Expr::not(self.prefix()?))
            }
            Some(Tok::Amp) => {
                self.pos += 1;
                Ok(Expr::and(self.prefix()?))
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<Expr> {
        let mut e = self.primary()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            e = Expr::Star(Box::new(e));
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Tok::Term(c)) => Ok(Expr::Terminal(c)),
            Some(Tok::Eps) => Ok(Expr::Empty),
            Some(Tok::Ident(n)) => {
                if self.peek() == Some(&Tok::Arrow) {
                    self.pos -= 1;
                    return Err(self.error("one production per line"));
                }
                Ok(Expr::NonTerminal(n))
            }
            Some(Tok::LParen) => {
                let e = self.choice()?;
                if self.bump() != Some(Tok::RParen) {
                    self.pos -= 1;
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            _ => {
                self.pos -= 1;
                Err(self.error("expected an expression"))
            }
        }
    }
}

/// Renders a grammar; `parse_grammar_with` on the output gives back a
/// structurally identical grammar.
pub fn render_grammar(g: &Grammar) -> String {
    let mut out = format!("start: {}\n", render_expr(g.start()));
    for (name, e) in g.rules() {
        out.push_str(name);
        out.push_str(" -> ");
        out.push_str(&render_expr(e));
        out.push('\n');
    }
    out
}

// Binding strength: choice < sequence < prefix < postfix.
const CHOICE: u8 = 0;
const SEQ: u8 = 1;
const PREFIX: u8 = 2;
const POSTFIX: u8 = 3;

pub fn render_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(e, CHOICE, &mut out);
    out
}

fn write_expr(e: &Expr, ctx: u8, out: &mut String) {
    let own = match e {
        Expr::Choice(..) => CHOICE,
        Expr::Seq(..) => SEQ,
        Expr::Not(_) => PREFIX,
        Expr::Star(_) => POSTFIX,
        _ => POSTFIX + 1,
    };
    let parens = own < ctx;
    if parens {
        out.push('(');
    }
    match e {
        Expr::Empty => out.push_str("eps"),
        Expr::Terminal(c) => {
            out.push('\'');
            if matches!(c, '\'' | '\\') {
                out.push('\\');
            }
            out.push(*c);
            out.push('\'');
        }
        Expr::NonTerminal(n) => out.push_str(n),
        Expr::Choice(a, b) => {
            write_expr(a, SEQ, out);
            out.push_str(" | ");
            write_expr(b, CHOICE, out);
        }
        Expr::Seq(a, b) => {
            write_expr(a, PREFIX, out);
            out.push(' ');
            write_expr(b, SEQ, out);
        }
        Expr::Not(inner) => {
            let (op, body) = match e.as_and() {
                Some(p) => ('&', p),
                None => ('!', &**inner),
            };
            out.push(op);
            out.push('(');
            write_expr(body, CHOICE, out);
            out.push(')');
        }
        Expr::Star(inner) => {
            write_expr(inner, POSTFIX + 1, out);
            out.push('*');
        }
    }
    if parens {
        out.push(')');
    }
}
