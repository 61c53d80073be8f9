//! Concrete ASCII syntax.
//!
//! ```text
//! atoms      [a-z][a-z0-9_]*      constants  true false
//! unary      ! E A Ef X wX Y wY F G O D<n> C<n>
//! binary     U R W S (right assoc)  >  &  >  |  >  -> (right assoc)
//! ```
//!
//! `F`, `G`, `O`, `W` and `->` are expanded while parsing.

use std::collections::BTreeSet;

use super::ast::*;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Bang,
    Amp,
    Bar,
    Arrow,
    LParen,
    RParen,
    Unary(Un),
    Binary(Bin),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Un {
    E,
    A,
    Ef,
    X,
    WX,
    Y,
    WY,
    F,
    G,
    O,
    D(u32),
    C(u32),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Bin {
    U,
    R,
    W,
    S,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: &str| Error::Syntax { pos, msg: msg.to_string() };
    let is_ident = |b: u8| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_';
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            b'!' => {
                i += 1;
                Tok::Bang
            }
            b'&' => {
                i += 1;
                Tok::Amp
            }
            b'|' => {
                i += 1;
                Tok::Bar
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 2;
                    Tok::Arrow
                } else {
                    return Err(err(i, "expected `->`"));
                }
            }
            b'w' if matches!(bytes.get(i + 1), Some(b'X') | Some(b'Y')) => {
                i += 2;
                if bytes[start + 1] == b'X' {
                    Tok::Unary(Un::WX)
                } else {
                    Tok::Unary(Un::WY)
                }
            }
            b'a'..=b'z' => {
                while i < bytes.len() && is_ident(bytes[i]) {
                    i += 1;
                }
                match &text[start..i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    s => Tok::Ident(s.to_string()),
                }
            }
            b'D' | b'C' if bytes.get(i + 1).is_some_and(|b| b.is_ascii_digit()) => {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: u32 = text[start + 1..i]
                    .parse()
                    .map_err(|_| err(start, "counting index out of range"))?;
                if n == 0 {
                    return Err(err(start, "counting index must be at least 1"));
                }
                if c == b'D' {
                    Tok::Unary(Un::D(n))
                } else {
                    Tok::Unary(Un::C(n))
                }
            }
            b'E' if bytes.get(i + 1) == Some(&b'f')
                && !bytes.get(i + 2).is_some_and(|&b| is_ident(b)) =>
            {
                i += 2;
                Tok::Unary(Un::Ef)
            }
            b'A'..=b'Z' => {
                i += 1;
                match c {
                    b'E' => Tok::Unary(Un::E),
                    b'A' => Tok::Unary(Un::A),
                    b'X' => Tok::Unary(Un::X),
                    b'Y' => Tok::Unary(Un::Y),
                    b'F' => Tok::Unary(Un::F),
                    b'G' => Tok::Unary(Un::G),
                    b'O' => Tok::Unary(Un::O),
                    b'U' => Tok::Binary(Bin::U),
                    b'R' => Tok::Binary(Bin::R),
                    b'W' => Tok::Binary(Bin::W),
                    b'S' => Tok::Binary(Bin::S),
                    _ => return Err(err(start, "unknown operator")),
                }
            }
            _ => return Err(err(start, "unexpected character")),
        };
        out.push((start, tok));
    }
    Ok(out)
}

/// Untyped syntax tree; sorted into state and path formulas afterwards.
#[derive(Debug)]
enum Raw {
    Atom(String),
    Const(bool),
    Not(Box<Raw>),
    And(Box<Raw>, Box<Raw>),
    Or(Box<Raw>, Box<Raw>),
    Imp(Box<Raw>, Box<Raw>),
    Unary(Un, Box<Raw>, usize),
    Binary(Bin, Box<Raw>, Box<Raw>, usize),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn error(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.offset(), msg: msg.to_string() }
    }

    fn implication(&mut self) -> Result<Raw> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Raw::Imp(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Raw> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Bar) {
            self.pos += 1;
            let rhs = self.conjunction()?;
            lhs = Raw::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Raw> {
        let mut lhs = self.temporal()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            let rhs = self.temporal()?;
            lhs = Raw::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Raw> {
        let lhs = self.unary()?;
        if let Some(Tok::Binary(op)) = self.peek() {
            let op = *op;
            let at = self.offset();
            self.pos += 1;
            let rhs = self.temporal()?;
            return Ok(Raw::Binary(op, Box::new(lhs), Box::new(rhs), at));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Raw> {
        let at = self.offset();
        let tok = self.peek().cloned().ok_or_else(|| self.error("unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Tok::Bang => Ok(Raw::Not(Box::new(self.unary()?))),
            Tok::Unary(op) => Ok(Raw::Unary(op, Box::new(self.unary()?), at)),
            Tok::Ident(name) => Ok(Raw::Atom(name)),
            Tok::True => Ok(Raw::Const(true)),
            Tok::False => Ok(Raw::Const(false)),
            Tok::LParen => {
                let inner = self.implication()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => {
                self.pos -= 1;
                Err(self.error("expected a formula"))
            }
        }
    }
}

fn parse_raw(text: &str) -> Result<Raw> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let raw = p.implication()?;
    if p.pos != p.toks.len() {
        return Err(p.error("trailing input"));
    }
    Ok(raw)
}

/// True when no temporal operator occurs outside a path quantifier.
fn is_state(r: &Raw) -> bool {
    match r {
        Raw::Atom(..) | Raw::Const(_) => true,
        Raw::Not(a) => is_state(a),
        Raw::And(a, b) | Raw::Or(a, b) | Raw::Imp(a, b) => is_state(a) && is_state(b),
        Raw::Unary(op, a, _) => match op {
            Un::E | Un::A | Un::Ef => true,
            Un::D(_) | Un::C(_) => is_state(a),
            _ => false,
        },
        Raw::Binary(..) => false,
    }
}

fn to_state(r: &Raw) -> Result<StateRef> {
    Ok(match r {
        Raw::Atom(p) => atom(p),
        Raw::Const(true) => tt(),
        Raw::Const(false) => ff(),
        Raw::Not(a) => not(to_state(a)?),
        Raw::And(a, b) => and(to_state(a)?, to_state(b)?),
        Raw::Or(a, b) => or(to_state(a)?, to_state(b)?),
        Raw::Imp(a, b) => or(not(to_state(a)?), to_state(b)?),
        Raw::Unary(op, a, at) => match op {
            Un::E => exists(to_path(a)?),
            Un::A => forall(to_path(a)?),
            Un::Ef => exists_fin(to_path(a)?),
            Un::D(n) => count(*n, to_state(a)?),
            Un::C(n) => cocount(*n, to_state(a)?),
            _ => {
                return Err(Error::Syntax {
                    pos: *at,
                    msg: "temporal operator outside a path quantifier".into(),
                })
            }
        },
        Raw::Binary(_, _, _, at) => {
            return Err(Error::Syntax {
                pos: *at,
                msg: "temporal operator outside a path quantifier".into(),
            })
        }
    })
}

fn to_path(r: &Raw) -> Result<PathRef> {
    if is_state(r) {
        return Ok(st(to_state(r)?));
    }
    Ok(match r {
        Raw::Not(a) => path_not(to_path(a)?),
        Raw::And(a, b) => path_and(to_path(a)?, to_path(b)?),
        Raw::Or(a, b) => path_or(to_path(a)?, to_path(b)?),
        Raw::Imp(a, b) => path_or(path_not(to_path(a)?), to_path(b)?),
        Raw::Unary(op, a, at) => {
            let a = to_path(a)?;
            match op {
                Un::X => next(a),
                Un::WX => wnext(a),
                Un::Y => yesterday(a),
                Un::WY => wyesterday(a),
                Un::F => until(st(tt()), a),
                Un::G => release(st(ff()), a),
                Un::O => since(st(tt()), a),
                _ => {
                    return Err(Error::Syntax {
                        pos: *at,
                        msg: "state operator applied to a path formula".into(),
                    })
                }
            }
        }
        Raw::Binary(op, a, b, _) => {
            let (a, b) = (to_path(a)?, to_path(b)?);
            match op {
                Bin::U => until(a, b),
                Bin::R => release(a, b),
                Bin::S => since(a, b),
                Bin::W => release(b.clone(), path_or(a, b)),
            }
        }
        Raw::Atom(..) | Raw::Const(_) => unreachable!("state-shaped input handled above"),
    })
}

fn check_atoms(found: BTreeSet<String>, ap: &BTreeSet<String>) -> Result<()> {
    match found.into_iter().find(|p| !ap.contains(p)) {
        Some(p) => Err(Error::UnknownAtom(p)),
        None => Ok(()),
    }
}

/// Parse a state formula whose atoms must all belong to `ap`.
pub fn parse_state_formula(text: &str, ap: &BTreeSet<String>) -> Result<StateRef> {
    let f = parse_state(text)?;
    check_atoms(f.atoms(), ap)?;
    Ok(f)
}

/// Parse a state formula without restricting its atoms.
pub fn parse_state(text: &str) -> Result<StateRef> {
    to_state(&parse_raw(text)?)
}

/// Parse a path formula (LTL-style input) without restricting its atoms.
pub fn parse_path(text: &str) -> Result<PathRef> {
    to_path(&parse_raw(text)?)
}

pub fn parse_path_formula(text: &str, ap: &BTreeSet<String>) -> Result<PathRef> {
    let f = parse_path(text)?;
    check_atoms(f.atoms(), ap)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ap(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn exists_until() {
        let f = parse_state("E (p U q)").unwrap();
        assert_eq!(f, exists(until(st(atom("p")), st(atom("q")))));
    }

    #[test]
    fn globally_expands_to_release() {
        let f = parse_state("A G p").unwrap();
        assert_eq!(f, forall(release(st(ff()), st(atom("p")))));
    }

    #[test]
    fn counting() {
        let f = parse_state("D2 (p & !q)").unwrap();
        assert_eq!(f, count(2, and(atom("p"), not(atom("q")))));
        assert!(parse_state("D0 p").is_err());
    }

    #[test]
    fn weak_until_and_implication() {
        let f = parse_path("p W q").unwrap();
        assert_eq!(f, release(st(atom("q")), st(or(atom("p"), atom("q")))));
        let g = parse_state("p -> q").unwrap();
        assert_eq!(g, or(not(atom("p")), atom("q")));
    }

    #[test]
    fn right_associative_temporal() {
        let f = parse_path("p U q U r").unwrap();
        assert_eq!(f, until(st(atom("p")), until(st(atom("q")), st(atom("r")))));
    }

    #[test]
    fn keyword_lexing() {
        let f = parse_state("EX p").unwrap();
        assert_eq!(f, exists(next(st(atom("p")))));
        let g = parse_state("Ef wX p").unwrap();
        assert_eq!(g, exists_fin(wnext(st(atom("p")))));
        let h = parse_state("A wY false").unwrap();
        assert_eq!(h, forall(wyesterday(st(ff()))));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_state("p & (q") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_state("X p"), Err(Error::Syntax { pos: 0, .. })));
        assert_eq!(
            parse_state_formula("p & z", &ap(&["p"])),
            Err(Error::UnknownAtom("z".into()))
        );
    }
}
