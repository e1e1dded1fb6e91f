use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Top,
    Bottom,
    Not,
    And,
    Or,
    Imp,
    Iff,
    BoxOp,
    DiaOp,
    LParen,
    RParen,
    Comma,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Top => "`T`".into(),
        Tok::Bottom => "`F`".into(),
        Tok::Not => "`~`".into(),
        Tok::And => "`&`".into(),
        Tok::Or => "`|`".into(),
        Tok::Imp => "`->`".into(),
        Tok::Iff => "`<->`".into(),
        Tok::BoxOp => "`[]`".into(),
        Tok::DiaOp => "`<>`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
    }
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let rest = &text[i..];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            _ if rest.starts_with("<->") => Tok::Iff,
            _ if rest.starts_with("->") => Tok::Imp,
            _ if rest.starts_with("[]") => Tok::BoxOp,
            _ if rest.starts_with("<>") => Tok::DiaOp,
            b'a'..=b'z' | b'A'..=b'Z' => {
                let mut j = i + 1;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                let word = &text[i..j];
                i = j;
                let tok =
                    match word {
                        "T" => Tok::Top,
                        "F" => Tok::Bottom,
                        _ if c.is_ascii_lowercase() => Tok::Ident(word.to_string()),
                        _ => return err(
                            start,
                            format!(
                                "identifiers must start with a lowercase letter, found `{word}`"
                            ),
                        ),
                    };
                out.push((start, tok));
                continue;
            }
            _ => {
                let ch = rest.chars().next().unwrap_or('?');
                return err(start, format!("unexpected character `{ch}`"));
            }
        };
        i += match tok {
            Tok::Iff => 3,
            Tok::Imp | Tok::BoxOp | Tok::DiaOp => 2,
            _ => 1,
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.imp()?;
        while self.eat(&Tok::Iff) {
            let right = self.imp()?;
            left = Formula::iff(&left, &right);
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if self.eat(&Tok::Imp) {
            let right = self.imp()?;
            return Ok(Formula::implies(&left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.and()?;
        while self.eat(&Tok::Or) {
            let right = self.and()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while self.eat(&Tok::And) {
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Not) {
            return Ok(self.unary()?.negate());
        }
        if self.eat(&Tok::BoxOp) {
            return Ok(Formula::boxed(self.unary()?));
        }
        if self.eat(&Tok::DiaOp) {
            return Ok(Formula::diamond(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        let Some(tok) = self.peek().cloned() else {
            return err(at, "unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Top => Ok(Formula::Top),
            Tok::Bottom => Ok(Formula::Bottom),
            Tok::Ident(name) => Ok(Formula::Atom(name.into())),
            Tok::LParen => {
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return err(self.offset(), "expected `)`");
                }
                Ok(inner)
            }
            other => err(at, format!("unexpected {}", describe(&other))),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => err(self.offset(), format!("unexpected {}", describe(t))),
        }
    }
}

/// Parses a formula, lowering `~`, `->` and `<->` into negation normal form.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let f = p.iff()?;
    p.finish()?;
    Ok(f)
}

/// Parses a comma-separated list of formulas. Blank input is the empty list.
pub fn parse_sequent(text: &str) -> Result<Vec<Formula>, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Ok(Vec::new());
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let mut out = vec![p.iff()?];
    while p.eat(&Tok::Comma) {
        out.push(p.iff()?);
    }
    p.finish()?;
    Ok(out)
}
