//! Recursive-descent parser for formulas and sequents.
//!
//! Variables are lower-case identifiers (a leading `_` is accepted for
//! machine-generated names such as `_v3`), constants carry a `#` prefix and
//! predicates start with an upper-case letter. `=` and `<` are the infix
//! predicates. Precedence is `! > & > | > ->`; every binary connective
//! associates to the right and a quantifier body extends as far as possible.

use std::fmt;

use thiserror::Error;

use super::{Formula, Pred, Sequent, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    Const(String),
    LParen,
    RParen,
    Comma,
    Dot,
    And,
    Or,
    Arrow,
    Bang,
    Eq,
    Lt,
    Turnstile,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Lower(s) | Tok::Upper(s) => write!(f, "`{s}`"),
            Tok::Const(s) => write!(f, "`#{s}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::And => write!(f, "`&`"),
            Tok::Or => write!(f, "`|`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Bang => write!(f, "`!`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Lt => write!(f, "`<`"),
            Tok::Turnstile => write!(f, "`=>`"),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    let ident_end = |mut j: usize| {
        while j < bytes.len() && is_ident_char(bytes[j].1) {
            j += 1;
        }
        j
    };
    let slice = |a: usize, b: usize| -> String { bytes[a..b].iter().map(|(_, c)| *c).collect() };
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        let next = bytes.get(i + 1).map(|p| p.1);
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => { out.push((pos, Tok::LParen)); i += 1; }
            ')' => { out.push((pos, Tok::RParen)); i += 1; }
            ',' => { out.push((pos, Tok::Comma)); i += 1; }
            '.' => { out.push((pos, Tok::Dot)); i += 1; }
            '&' => { out.push((pos, Tok::And)); i += 1; }
            '|' => { out.push((pos, Tok::Or)); i += 1; }
            '!' => { out.push((pos, Tok::Bang)); i += 1; }
            '<' => { out.push((pos, Tok::Lt)); i += 1; }
            '-' if next == Some('>') => { out.push((pos, Tok::Arrow)); i += 2; }
            '=' if next == Some('>') => { out.push((pos, Tok::Turnstile)); i += 2; }
            '=' => { out.push((pos, Tok::Eq)); i += 1; }
            '#' => {
                let end = ident_end(i + 1);
                if end == i + 1 {
                    return Err(ParseError { pos, msg: "expected a constant name after `#`".into() });
                }
                out.push((pos, Tok::Const(slice(i + 1, end))));
                i = end;
            }
            c if c.is_ascii_lowercase() || c == '_' => {
                let end = ident_end(i);
                out.push((pos, Tok::Lower(slice(i, end))));
                i = end;
            }
            c if c.is_ascii_uppercase() => {
                let end = ident_end(i);
                out.push((pos, Tok::Upper(slice(i, end))));
                i = end;
            }
            other => return Err(ParseError { pos, msg: format!("unexpected character `{other}`") }),
        }
    }
    Ok(out)
}

const KEYWORDS: [&str; 4] = ["forall", "exists", "bot", "top"];

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    len: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(src)?, at: 0, len: src.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), msg: msg.into() })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        match self.peek() {
            Some(t) => self.err(format!("expected {wanted}, found {t}")),
            None => self.err(format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.unexpected(&t.to_string())
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at < self.toks.len() {
            self.unexpected("end of input")
        } else {
            Ok(())
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            Ok(Formula::imp(lhs, self.formula()?))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.conjunction()?;
        if self.eat(&Tok::Or) {
            Ok(Formula::or(lhs, self.disjunction()?))
        } else {
            Ok(lhs)
        }
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if self.eat(&Tok::And) {
            Ok(Formula::and(lhs, self.conjunction()?))
        } else {
            Ok(lhs)
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Bang) => {
                self.at += 1;
                Ok(Formula::negation(self.unary()?))
            }
            Some(Tok::Lower(k)) if k == "forall" || k == "exists" => {
                self.at += 1;
                let v = match self.peek().cloned() {
                    Some(Tok::Lower(v)) if !KEYWORDS.contains(&v.as_str()) => v,
                    _ => return self.unexpected("a bound variable"),
                };
                self.at += 1;
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(if k == "forall" { Formula::forall(v, body) } else { Formula::exists(v, body) })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Lower(k)) if k == "bot" => {
                self.at += 1;
                Ok(Formula::Bot)
            }
            Some(Tok::Lower(k)) if k == "top" => {
                self.at += 1;
                Ok(Formula::Top)
            }
            Some(Tok::Upper(p)) => {
                self.at += 1;
                let mut args = Vec::new();
                if self.eat(&Tok::LParen) {
                    loop {
                        args.push(self.term()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(Tok::RParen)?;
                }
                Ok(Formula::Atom(Pred::new(p, args.len()), args))
            }
            Some(Tok::Lower(_)) | Some(Tok::Const(_)) => {
                let s = self.term()?;
                let op = match self.peek() {
                    Some(Tok::Eq) => "=",
                    Some(Tok::Lt) => "<",
                    _ => return self.unexpected("`=` or `<` after a term"),
                };
                self.at += 1;
                let t = self.term()?;
                Ok(Formula::Atom(Pred::new(op, 2), vec![s, t]))
            }
            _ => self.unexpected("a formula"),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Lower(v)) if !KEYWORDS.contains(&v.as_str()) => {
                self.at += 1;
                Ok(Term::Var(v))
            }
            Some(Tok::Const(c)) => {
                self.at += 1;
                Ok(Term::Const(c))
            }
            _ => self.unexpected("a term"),
        }
    }

    fn formula_list(&mut self) -> Result<Vec<Formula>, ParseError> {
        let mut out = Vec::new();
        if matches!(self.peek(), None | Some(Tok::Turnstile)) {
            return Ok(out);
        }
        loop {
            out.push(self.formula()?);
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(src)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_sequent(src: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(src)?;
    let ant = p.formula_list()?;
    p.expect(Tok::Turnstile)?;
    let suc = p.formula_list()?;
    p.finish()?;
    Ok(Sequent::new(ant, suc))
}
