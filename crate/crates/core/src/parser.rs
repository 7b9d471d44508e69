//! Concrete syntax for arithmetic terms.
//!
//! ```text
//! expr   := addsub
//! addsub := muldiv (('+' | '-.') muldiv)*
//! muldiv := pow (('*' | '/' | '%') pow)*
//! pow    := atom ('^' pow)?
//! atom   := NAT | IDENT | '(' expr ')'
//! ```
//!
//! `-.` is truncated subtraction, `/` floored division and `%` the
//! remainder. `^` associates to the right, everything else to the left.
//! Numerals are decimal.

use std::fmt;

use thiserror::Error;

use crate::scalar::Nat;
use crate::term::{BinOp, Term};
use crate::Natural;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at column {column}: expected {expected}, found {found}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(BinOp),
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) => write!(f, "numeral `{s}`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Op(op) => write!(f, "`{}`", op.symbol()),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((col, Tok::Num(chars[start..i].iter().collect())));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((col, Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            '-' => {
                if chars.get(i + 1) != Some(&'.') {
                    return Err(ParseError {
                        column: col,
                        expected: "`-.` (truncated subtraction)".into(),
                        found: "`-`".into(),
                    });
                }
                i += 1;
                Tok::Op(BinOp::TruncSub)
            }
            '+' => Tok::Op(BinOp::Add),
            '*' => Tok::Op(BinOp::Mul),
            '/' => Tok::Op(BinOp::FloorDiv),
            '%' => Tok::Op(BinOp::Mod),
            '^' => Tok::Op(BinOp::Pow),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ParseError {
                    column: col,
                    expected: "a term".into(),
                    found: format!("character `{other}`"),
                })
            }
        };
        out.push((col, tok));
        i += 1;
    }
    out.push((chars.len() + 1, Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let (column, tok) = &self.toks[self.pos];
        ParseError {
            column: *column,
            expected: expected.into(),
            found: tok.to_string(),
        }
    }

    fn peek_op(&self, level: u8) -> Option<BinOp> {
        match self.peek() {
            Tok::Op(op) if op.precedence() == level => Some(*op),
            _ => None,
        }
    }

    fn left_assoc<N: Nat>(
        &mut self,
        level: u8,
        next: fn(&mut Self) -> Result<Term<N>, ParseError>,
    ) -> Result<Term<N>, ParseError> {
        let mut lhs = next(self)?;
        while let Some(op) = self.peek_op(level) {
            self.bump();
            let rhs = next(self)?;
            lhs = Term::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn expr<N: Nat>(&mut self) -> Result<Term<N>, ParseError> {
        self.left_assoc(1, Self::muldiv)
    }

    fn muldiv<N: Nat>(&mut self) -> Result<Term<N>, ParseError> {
        self.left_assoc(2, Self::pow)
    }

    fn pow<N: Nat>(&mut self) -> Result<Term<N>, ParseError> {
        let base = self.atom()?;
        if self.peek_op(3).is_some() {
            self.bump();
            let exp = self.pow()?;
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn atom<N: Nat>(&mut self) -> Result<Term<N>, ParseError> {
        let expected = "a numeral, identifier or `(`";
        match self.peek().clone() {
            Tok::Num(digits) => {
                let value = N::from_str_radix(&digits, 10).map_err(|_| ParseError {
                    column: self.toks[self.pos].0,
                    expected: "a numeral that fits the scalar type".into(),
                    found: format!("numeral `{digits}`"),
                })?;
                self.bump();
                Ok(Term::Const(value))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Term::Var(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(expected)),
        }
    }
}

/// Parses `src` into a term over the scalar `N`.
pub fn parse_as<N: Nat>(src: &str) -> Result<Term<N>, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let t = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("an operator or end of input"));
    }
    Ok(t)
}

/// Parses `src` into a term over arbitrary-precision naturals.
pub fn parse(src: &str) -> Result<Term<Natural>, ParseError> {
    parse_as(src)
}

/// Renders `t` in the concrete syntax with minimal parentheses.
pub fn print<N: fmt::Display>(t: &Term<N>) -> String {
    t.to_string()
}

fn needs_parens<N>(child: &Term<N>, parent: BinOp, is_rhs: bool) -> bool {
    let Some((op, _, _)) = child.as_binary() else {
        return false;
    };
    if parent == BinOp::Pow && !is_rhs {
        // The base of a power must be an atom.
        return true;
    }
    match op.precedence().cmp(&parent.precedence()) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => is_rhs != parent.is_right_assoc(),
    }
}

impl<N: fmt::Display> fmt::Display for Term<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => write!(f, "{c}"),
            Term::Var(v) => f.write_str(v),
            _ => {
                let (op, l, r) = self.as_binary().expect("binary node");
                let operand = |f: &mut fmt::Formatter<'_>, t: &Term<N>, rhs: bool| {
                    if needs_parens(t, op, rhs) {
                        write!(f, "({t})")
                    } else {
                        write!(f, "{t}")
                    }
                };
                operand(f, l, false)?;
                if op == BinOp::Pow {
                    f.write_str("^")?;
                } else {
                    write!(f, " {} ", op.symbol())?;
                }
                operand(f, r, true)
            }
        }
    }
}
