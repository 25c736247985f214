//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula := siff
//! siff    := iff ("<=>" siff)?        right-assoc
//! iff     := imp ("<->" iff)?         right-assoc
//! imp     := or ("->" imp)?           right-assoc
//! or      := and ("|" and)*           left-assoc
//! and     := unary ("&" unary)*       left-assoc
//! unary   := ("~" | "!" | "[]" | "<>") unary | atom
//! atom    := ident | "bot" | "(" formula ")"
//! ```

use std::fmt;

use super::{Formula, RESERVED};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    ReservedWord(String),
    InvalidIdentifier(String),
}

/// A syntax error with a 1-based line/column position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at {}:{}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected token `{t}`"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::ReservedWord(w) => {
                write!(f, "`{w}` clashes with a reserved word")
            }
            ParseErrorKind::InvalidIdentifier(w) => write!(f, "invalid identifier `{w}` (expected [a-z][a-zA-Z0-9_]*)"),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Bot,
    Tilde,
    Bang,
    BoxOp,
    DiaOp,
    And,
    Or,
    Imp,
    Iff,
    SIff,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => s.as_str(),
            Tok::Bot => "bot",
            Tok::Tilde => "~",
            Tok::Bang => "!",
            Tok::BoxOp => "[]",
            Tok::DiaOp => "<>",
            Tok::And => "&",
            Tok::Or => "|",
            Tok::Imp => "->",
            Tok::Iff => "<->",
            Tok::SIff => "<=>",
            Tok::LParen => "(",
            Tok::RParen => ")",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_reserved_lookalike(word: &str) -> bool {
    RESERVED.iter().any(|r| r.eq_ignore_ascii_case(word))
}

pub(crate) fn check_identifier(name: &str) -> Result<(), ParseError> {
    let err = |kind| ParseError {
        kind,
        line: 1,
        column: 1,
    };
    if is_reserved_lookalike(name) {
        return Err(err(ParseErrorKind::ReservedWord(name.to_string())));
    }
    let mut chars = name.chars();
    let ok = matches!(chars.next(), Some('a'..='z')) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(err(ParseErrorKind::InvalidIdentifier(name.to_string())))
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, column);
        let rest = &chars[i..];
        let starts = |s: &str| {
            let s: Vec<char> = s.chars().collect();
            rest.len() >= s.len() && rest[..s.len()] == s[..]
        };
        let err = |kind| ParseError {
            kind,
            line: start.0,
            column: start.1,
        };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let (tok, width) = if starts("<=>") {
            (Tok::SIff, 3)
        } else if starts("<->") {
            (Tok::Iff, 3)
        } else if starts("<>") {
            (Tok::DiaOp, 2)
        } else if starts("->") {
            (Tok::Imp, 2)
        } else if starts("[]") {
            (Tok::BoxOp, 2)
        } else {
            match c {
                '~' => (Tok::Tilde, 1),
                '!' => (Tok::Bang, 1),
                '&' => (Tok::And, 1),
                '|' => (Tok::Or, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                c if c.is_ascii_alphabetic() => {
                    let len = rest
                        .iter()
                        .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                        .count();
                    let word: String = rest[..len].iter().collect();
                    let tok = if word == "bot" {
                        Tok::Bot
                    } else if is_reserved_lookalike(&word) {
                        return Err(err(ParseErrorKind::ReservedWord(word)));
                    } else if c.is_ascii_lowercase() {
                        Tok::Ident(word)
                    } else {
                        return Err(err(ParseErrorKind::InvalidIdentifier(word)));
                    };
                    (tok, len)
                }
                other => return Err(err(ParseErrorKind::UnexpectedChar(other))),
            }
        };
        out.push(Spanned {
            tok,
            line: start.0,
            column: start.1,
        });
        i += width;
        column += width;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error_here(&self) -> ParseError {
        match self.toks.get(self.pos) {
            Some(s) => ParseError {
                kind: ParseErrorKind::UnexpectedToken(s.tok.to_string()),
                line: s.line,
                column: s.column,
            },
            None => ParseError {
                kind: ParseErrorKind::UnexpectedEnd,
                line: self.end.0,
                column: self.end.1,
            },
        }
    }

    fn siff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.iff()?;
        if self.eat(&Tok::SIff) {
            Ok(Formula::siff(lhs, self.siff()?))
        } else {
            Ok(lhs)
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if self.eat(&Tok::Iff) {
            Ok(Formula::iff(lhs, self.iff()?))
        } else {
            Ok(lhs)
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Imp) {
            Ok(Formula::imp(lhs, self.imp()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let ctor: fn(Formula) -> Formula = match self.peek() {
            Some(Tok::Tilde) => Formula::sneg,
            Some(Tok::Bang) => Formula::neg,
            Some(Tok::BoxOp) => Formula::nec,
            Some(Tok::DiaOp) => Formula::poss,
            _ => return self.atom(),
        };
        self.pos += 1;
        Ok(ctor(self.unary()?))
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Formula::Var(name))
            }
            Some(Tok::Bot) => {
                self.pos += 1;
                Ok(Formula::Bot)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.siff()?;
                if self.eat(&Tok::RParen) {
                    Ok(inner)
                } else {
                    Err(self.error_here())
                }
            }
            _ => Err(self.error_here()),
        }
    }
}

/// Parses a formula, keeping sugar nodes (`!`, `<->`, `<=>`, `<>`).
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let end = end_position(text);
    let mut p = Parser { toks, pos: 0, end };
    let f = p.siff()?;
    if p.pos < p.toks.len() {
        return Err(p.error_here());
    }
    Ok(f)
}

fn end_position(text: &str) -> (usize, usize) {
    let mut pos = (1, 1);
    for c in text.chars() {
        if c == '\n' {
            pos = (pos.0 + 1, 1);
        } else {
            pos.1 += 1;
        }
    }
    pos
}
