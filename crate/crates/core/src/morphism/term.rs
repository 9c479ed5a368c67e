//! Proof terms and their textual form.
//!
//! ```text
//! term := atom (";" atom)*            composition, left-associative
//! atom := "(" (entry ("," entry)*)? ")"    tuple
//!       | "{" (entry ("," entry)*)? "}"    cotuple
//!       | "<" label "." atom                left move (projection)
//!       | ">" label "." atom                right move (injection)
//!       | "id" | "(" term ")"
//! entry := label "->" term
//! ```
//!
//! The Unicode forms `↦ ← → ·` are accepted for `-> < > .`.

use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::Label;

/// A proof term of the polarized sequent calculus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// `( b -> t, ... )`: one response per opponent move on the right.
    Tuple(Vec<(Label, Term)>),
    /// `{ a -> t, ... }`: one response per player move on the left.
    Cotuple(Vec<(Label, Term)>),
    /// `<b . t`: play opponent move `b` into the left game.
    Left(Label, Box<Term>),
    /// `>a . t`: play player move `a` in the right game.
    Right(Label, Box<Term>),
    Id,
    /// `f ; g`: composition (a cut).
    Compose(Box<Term>, Box<Term>),
}

impl Term {
    pub fn left(label: impl Into<Label>, body: Term) -> Term {
        Term::Left(label.into(), Box::new(body))
    }

    pub fn right(label: impl Into<Label>, body: Term) -> Term {
        Term::Right(label.into(), Box::new(body))
    }

    pub fn compose(f: Term, g: Term) -> Term {
        Term::Compose(Box::new(f), Box::new(g))
    }

    /// True when the term has no compositions (a cut-free proof).
    pub fn is_normal(&self) -> bool {
        match self {
            Term::Tuple(es) | Term::Cotuple(es) => es.iter().all(|(_, t)| t.is_normal()),
            Term::Left(_, t) | Term::Right(_, t) => t.is_normal(),
            Term::Id => true,
            Term::Compose(..) => false,
        }
    }

    /// True when the term contains no identities.
    pub fn is_identity_free(&self) -> bool {
        match self {
            Term::Tuple(es) | Term::Cotuple(es) => es.iter().all(|(_, t)| t.is_identity_free()),
            Term::Left(_, t) | Term::Right(_, t) => t.is_identity_free(),
            Term::Id => false,
            Term::Compose(f, g) => f.is_identity_free() && g.is_identity_free(),
        }
    }

    /// Number of term constructors.
    pub fn size(&self) -> usize {
        match self {
            Term::Tuple(es) | Term::Cotuple(es) => {
                1 + es.iter().map(|(_, t)| t.size()).sum::<usize>()
            }
            Term::Left(_, t) | Term::Right(_, t) => 1 + t.size(),
            Term::Id => 1,
            Term::Compose(f, g) => 1 + f.size() + g.size(),
        }
    }

    /// The entry of a tuple or cotuple for `label`.
    pub fn entry(&self, label: &str) -> Option<&Term> {
        match self {
            Term::Tuple(es) | Term::Cotuple(es) => {
                es.iter().find(|(l, _)| &**l == label).map(|(_, t)| t)
            }
            _ => None,
        }
    }
}

fn write_entries(
    f: &mut fmt::Formatter<'_>,
    es: &[(Label, Term)],
    open: char,
    close: char,
) -> fmt::Result {
    if es.is_empty() {
        return write!(f, "{open} {close}");
    }
    write!(f, "{open} ")?;
    for (i, (l, t)) in es.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{l} -> {t}")?;
    }
    write!(f, " {close}")
}

struct Atom<'a>(&'a Term);

impl fmt::Display for Atom<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Term::Compose(..) => write!(f, "({})", self.0),
            t => write!(f, "{t}"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Tuple(es) => write_entries(f, es, '(', ')'),
            Term::Cotuple(es) => write_entries(f, es, '{', '}'),
            Term::Left(l, t) => write!(f, "<{l} . {}", Atom(t)),
            Term::Right(l, t) => write!(f, ">{l} . {}", Atom(t)),
            Term::Id => f.write_str("id"),
            Term::Compose(a, b) => write!(f, "{a} ; {}", Atom(b)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    MapsTo,
    LeftArrow,
    RightArrow,
    Dot,
    Semi,
    Ident(String),
    Eof,
}

fn is_label_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '#'
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let next = chars.get(i + 1).map(|&(_, c)| c);
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '.' | '·' => Tok::Dot,
            '<' | '←' => Tok::LeftArrow,
            '>' | '→' => Tok::RightArrow,
            '↦' => Tok::MapsTo,
            '-' if next == Some('>') => {
                i += 2;
                out.push((Tok::MapsTo, pos));
                continue;
            }
            c if is_label_char(c) => {
                // Labels may contain interior dots (`R.b`) when the dot is
                // directly followed by another label character.
                let mut j = i;
                while j < chars.len() {
                    let c = chars[j].1;
                    let dotted = c == '.'
                        && j > i
                        && chars.get(j + 1).is_some_and(|&(_, d)| is_label_char(d));
                    if is_label_char(c) || dotted {
                        j += 1;
                    } else {
                        break;
                    }
                }
                let end = chars.get(j).map_or(src.len(), |&(p, _)| p);
                out.push((Tok::Ident(src[pos..end].to_string()), pos));
                i = j;
                continue;
            }
            c => {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("unexpected character `{c}` in term"),
                })
            }
        };
        out.push((tok, pos));
        i += 1;
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, wanted: &str) -> Error {
        Error::Syntax {
            pos: self.toks[self.at].1,
            msg: format!("expected {wanted} in term, found {:?}", self.peek()),
        }
    }

    fn expect(&mut self, t: Tok, wanted: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.error(wanted))
        }
    }

    fn label(&mut self) -> Result<Label> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s.into())
            }
            _ => Err(self.error("a label")),
        }
    }

    fn term(&mut self) -> Result<Term> {
        self.depth += 1;
        if self.depth > crate::syntax::parser::MAX_NESTING {
            return Err(self.error("shallower nesting"));
        }
        let mut t = self.atom()?;
        while *self.peek() == Tok::Semi {
            self.bump();
            let rhs = self.atom()?;
            t = Term::compose(t, rhs);
        }
        self.depth -= 1;
        Ok(t)
    }

    fn entries(&mut self, close: Tok, wanted: &str) -> Result<Vec<(Label, Term)>> {
        let mut es: Vec<(Label, Term)> = Vec::new();
        if *self.peek() != close {
            loop {
                let l = self.label()?;
                self.expect(Tok::MapsTo, "`->`")?;
                let t = self.term()?;
                if es.iter().any(|(k, _)| *k == l) {
                    return Err(Error::DuplicateLabel {
                        label: l.to_string(),
                    });
                }
                es.push((l, t));
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(close, wanted)?;
        Ok(es)
    }

    fn atom(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let is_tuple = *self.peek() == Tok::RParen
                    || (matches!(self.peek(), Tok::Ident(_)) && *self.peek2() == Tok::MapsTo);
                if is_tuple {
                    Ok(Term::Tuple(self.entries(Tok::RParen, "`)`")?))
                } else {
                    let t = self.term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(t)
                }
            }
            Tok::LBrace => {
                self.bump();
                Ok(Term::Cotuple(self.entries(Tok::RBrace, "`}`")?))
            }
            Tok::LeftArrow | Tok::RightArrow => {
                let right = self.bump() == Tok::RightArrow;
                let l = self.label()?;
                self.expect(Tok::Dot, "`.`")?;
                let body = self.atom()?;
                Ok(if right {
                    Term::Right(l, Box::new(body))
                } else {
                    Term::Left(l, Box::new(body))
                })
            }
            Tok::Ident(s) if s == "id" => {
                self.bump();
                Ok(Term::Id)
            }
            _ => Err(self.error("a term")),
        }
    }
}

pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        depth: 0,
    };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("end of input"));
    }
    Ok(t)
}
