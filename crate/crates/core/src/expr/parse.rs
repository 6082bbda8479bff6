//! Recursive-descent parser for the expression language.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?
//! primary := integer | ident | ident '(' sum ')' | '(' sum ')'
//! ```
//! Exponents must evaluate to integers. Decimal literals are rejected.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::canon::Expr;
use super::poly::Q;
use super::symbol::{Chart, Symbol};
use crate::Error;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, Error> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            if i < b.len() && b[i] == b'.' {
                return Err(err(s, "decimal literals are not allowed; write a fraction like 3/2"));
            }
            let n: BigInt = text[s..i].parse().map_err(|_| err(s, "bad integer"))?;
            out.push((s, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let s = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((s, Tok::Ident(text[s..i].to_string())));
        } else if b"+-*/^(),".contains(&c) {
            out.push((i, Tok::Op(c as char)));
            i += 1;
        } else if c == b'.' {
            return Err(err(i, "decimal literals are not allowed; write a fraction like 3/2"));
        } else {
            let ch = text[i..].chars().next().unwrap();
            return Err(err(i, format!("unexpected character `{ch}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    resolve: &'a dyn Fn(&str) -> Option<Symbol>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), Error> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(self.here(), format!("expected `{c}`")))
        }
    }

    fn sum(&mut self) -> Result<Expr, Error> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.product()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, Error> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some(&Tok::Op('/')) {
                let at = self.here();
                self.pos += 1;
                let d = self.unary()?;
                acc = acc.checked_div(&d).ok_or_else(|| err(at, "division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, Error> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, Error> {
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Op('^')) {
            let at = self.here();
            self.pos += 1;
            let e = self.unary()?;
            let q: Q = e.as_rational().ok_or_else(|| err(at, "exponent must be an integer constant"))?;
            if !q.is_integer() {
                return Err(err(at, "non-integer exponent"));
            }
            let n = q.numer().to_i64().filter(|n| n.abs() <= 4096).ok_or_else(|| err(at, "exponent too large"))?;
            return base.pow(n).ok_or_else(|| err(at, "zero raised to a negative power"));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, Error> {
        let at = self.here();
        match self.toks.get(self.pos).map(|t| t.1.clone()) {
            None => Err(err(at, "unexpected end of input")),
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::rational(Q::from_integer(n)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Op(c)) => Err(err(at, format!("unexpected `{c}`"))),
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Op('(')) {
                    let f: fn(&Expr) -> Option<Expr> = match name.as_str() {
                        "exp" => |u| Some(Expr::exp(u)),
                        "sin" => |u| Some(Expr::sin(u)),
                        "cos" => |u| Some(Expr::cos(u)),
                        "tan" => |u| Some(Expr::tan(u)),
                        "ln" => Expr::ln,
                        _ => return Err(err(at, format!("unknown function `{name}`"))),
                    };
                    self.pos += 1;
                    let arg = self.sum()?;
                    self.expect(')')?;
                    return f(&arg).ok_or_else(|| err(at, format!("{name} is undefined at 0")));
                }
                match (self.resolve)(&name) {
                    Some(s) => Ok(Expr::sym(&s)),
                    None => Err(err(at, format!("unknown identifier `{name}`"))),
                }
            }
        }
    }
}

/// Parse with a custom identifier resolver.
pub fn parse_with(text: &str, resolve: &dyn Fn(&str) -> Option<Symbol>) -> Result<Expr, Error> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), resolve };
    if p.toks.is_empty() {
        return Err(err(0, "empty expression"));
    }
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(err(p.here(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Parse over a chart: identifiers must be coordinates or parameters.
pub fn parse(text: &str, chart: &Chart) -> Result<Expr, Error> {
    parse_with(text, &|n| chart.lookup(n).cloned())
}

/// Parse accepting any identifier as a symbol.
pub fn parse_free(text: &str) -> Result<Expr, Error> {
    parse_with(text, &|n| Some(Symbol::new(n)))
}
