//! Recursive-descent parser for formulas and sequents.
//!
//! ```text
//! formula  := literal | conn
//! literal  := "(" branches? ")" | "{" branches? "}"
//! branches := branch ("," branch)*
//! branch   := (label | int | int "*" label) ":" formula
//! conn     := ("ox"|"oxr"|"oxl"|"par"|"otl"|"otr") "(" formula "," formula ")"
//!           | ("dual"|"bang"|"quest") "(" formula ")" | "!" formula | "?" formula
//! sequent  := formula ("|-o"|"|-p"|"|-") formula
//! label    := [A-Za-z_][A-Za-z0-9_#]*
//! ```
//!
//! A bare count `n : F` expands to `n` copies of `F` labelled `_k`, where `k`
//! is the 1-based position of the copy within the literal. A counted label
//! `n * a : F` expands to labels `a#1 .. a#n`.

use std::collections::HashSet;

use super::formula::{BinOp, Branch, Formula, Label, Sequent, SequentKind, UnOp};
use crate::error::{Error, Result};
use crate::polarity::Polarity;

/// Maximum nesting accepted by the parser.
pub const MAX_NESTING: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Star,
    Bang,
    Quest,
    Ident(String),
    Int(u64),
    Turnstile(SequentKind),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Star => "`*`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Quest => "`?`".into(),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Turnstile(k) => format!("`{}`", k.turnstile()),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn is_label_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_label_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '#'
}

pub(crate) fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '*' => Some(Tok::Star),
            '!' => Some(Tok::Bang),
            '?' => Some(Tok::Quest),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push((tok, pos));
            continue;
        }
        if c == '|' {
            chars.next();
            if chars.next_if(|&(_, c)| c == '-').is_none() {
                return Err(Error::Syntax {
                    pos,
                    msg: "expected `-` after `|`".into(),
                });
            }
            let rest = &src[pos + 2..];
            let mut it = rest.chars();
            let kind = match (it.next(), it.next()) {
                (Some('o'), next) if !next.is_some_and(is_label_char) => {
                    chars.next();
                    SequentKind::Opponent
                }
                (Some('p'), next) if !next.is_some_and(is_label_char) => {
                    chars.next();
                    SequentKind::Player
                }
                _ => SequentKind::Mixed,
            };
            out.push((Tok::Turnstile(kind), pos));
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = pos;
            while let Some(&(i, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = i + d.len_utf8();
                chars.next();
            }
            let n = src[pos..end].parse::<u64>().map_err(|_| Error::Syntax {
                pos,
                msg: "multiplicity out of range".into(),
            })?;
            out.push((Tok::Int(n), pos));
            continue;
        }
        if is_label_start(c) {
            let mut end = pos;
            while let Some(&(i, d)) = chars.peek() {
                if !is_label_char(d) {
                    break;
                }
                end = i + d.len_utf8();
                chars.next();
            }
            out.push((Tok::Ident(src[pos..end].to_string()), pos));
            continue;
        }
        return Err(Error::Syntax {
            pos,
            msg: format!("unexpected character `{c}`"),
        });
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

pub(crate) struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    depth: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Parser> {
        Ok(Parser {
            toks: lex(src)?,
            at: 0,
            depth: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    pub(crate) fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub(crate) fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&want.describe()))
        }
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> Error {
        Error::Syntax {
            pos: self.pos(),
            msg: format!("expected {wanted}, found {}", self.peek().describe()),
        }
    }

    pub(crate) fn expect_eof(&self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(Error::Syntax {
                pos: self.pos(),
                msg: format!("nesting deeper than {MAX_NESTING}"),
            });
        }
        Ok(())
    }

    pub(crate) fn formula(&mut self) -> Result<Formula> {
        self.enter()?;
        let f = self.formula_inner();
        self.depth -= 1;
        f
    }

    fn formula_inner(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::LParen => self.literal(Polarity::Opponent),
            Tok::LBrace => self.literal(Polarity::Player),
            Tok::Bang => {
                self.bump();
                let f = self.formula()?;
                Formula::bang(f)
            }
            Tok::Quest => {
                self.bump();
                let f = self.formula()?;
                Formula::quest(f)
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some(op) = BinOp::from_name(&name) {
                    self.expect(Tok::LParen)?;
                    let left = self.formula()?;
                    self.expect(Tok::Comma)?;
                    let right = self.formula()?;
                    self.expect(Tok::RParen)?;
                    return Formula::binary(op, left, right);
                }
                let op = match name.as_str() {
                    "dual" => UnOp::Dual,
                    "bang" => UnOp::Bang,
                    "quest" => UnOp::Quest,
                    _ => {
                        return Err(Error::Syntax {
                            pos: self.toks[self.at - 1].1,
                            msg: format!("unknown connective `{name}`"),
                        })
                    }
                };
                self.expect(Tok::LParen)?;
                let child = self.formula()?;
                self.expect(Tok::RParen)?;
                Formula::unary(op, child)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn literal(&mut self, polarity: Polarity) -> Result<Formula> {
        let close = match polarity {
            Polarity::Opponent => Tok::RParen,
            Polarity::Player => Tok::RBrace,
        };
        self.bump();
        let mut branches: Vec<Branch> = Vec::new();
        let mut seen: HashSet<Label> = HashSet::new();
        if *self.peek() != close {
            loop {
                let labels = self.branch_labels(branches.len())?;
                self.expect(Tok::Colon)?;
                let child = self.formula()?;
                for label in labels {
                    if !seen.insert(label.clone()) {
                        return Err(Error::DuplicateLabel {
                            label: label.to_string(),
                        });
                    }
                    branches.push(Branch {
                        label,
                        child: child.clone(),
                    });
                }
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(close)?;
        Formula::lit(polarity, branches)
    }

    /// Labels produced by one branch head; `already` is the number of
    /// branches before it in the literal.
    fn branch_labels(&mut self, already: usize) -> Result<Vec<Label>> {
        match self.bump() {
            Tok::Ident(name) => Ok(vec![Label::from(name)]),
            Tok::Int(n) => {
                if *self.peek() == Tok::Star {
                    self.bump();
                    let base = match self.bump() {
                        Tok::Ident(name) => name,
                        _ => {
                            self.at -= 1;
                            return Err(self.unexpected("a label after `*`"));
                        }
                    };
                    Ok((1..=n)
                        .map(|k| Label::from(format!("{base}#{k}")))
                        .collect())
                } else {
                    let n = n as usize;
                    Ok((1..=n)
                        .map(|k| Label::from(format!("_{}", already + k)))
                        .collect())
                }
            }
            _ => {
                self.at -= 1;
                Err(self.unexpected("a branch label or multiplicity"))
            }
        }
    }

    pub(crate) fn turnstile(&mut self) -> Result<SequentKind> {
        match self.peek().clone() {
            Tok::Turnstile(k) => {
                self.bump();
                Ok(k)
            }
            _ => Err(self.unexpected("`|-o`, `|-` or `|-p`")),
        }
    }
}

/// Parses a formula in the textual grammar.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.expect_eof()?;
    Ok(f)
}

/// Parses `formula turnstile formula`, checking the sequent kind.
pub fn parse_sequent(text: &str) -> Result<Sequent> {
    let mut p = Parser::new(text)?;
    let lhs = p.formula()?;
    let kind = p.turnstile()?;
    let rhs = p.formula()?;
    p.expect_eof()?;
    Sequent::new(kind, lhs, rhs)
}
