//! Concrete syntax for second-order polynomials and monotone functions.
//!
//! Polynomials: `P ::= INT | "n" | "L(" P ")" | P "+" P | P "*" P`, with
//! `*` binding tighter than `+`, both left-associative, and parentheses
//! allowed. Integer literals must be positive.
//!
//! Monotone functions: `poly: 2*x^2 + 1`, `table: [1,3,7] tail+1`,
//! `table seg: [(0,1),(9,40)] tail+1`, or the alias `id`.

use super::monfn::{MonFn, TableMon};
use super::poly::UniPoly;
use super::SOPoly;
use num_bigint::BigUint;
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("syntax error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => err(self.pos, format!("expected '{}', found '{}'", c as char, got as char)),
            None => err(self.pos, format!("expected '{}', found end of input", c as char)),
        }
    }

    fn int(&mut self) -> Result<BigUint, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return err(start, "expected integer");
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        Ok(s.parse::<BigUint>().unwrap())
    }
}

/// Parse a second-order polynomial.
pub fn parse_sop(text: &str) -> Result<SOPoly, ParseError> {
    let mut cur = Cursor::new(text);
    let p = parse_expr(&mut cur)?;
    cur.skip_ws();
    if cur.pos != cur.text.len() {
        return err(cur.pos, "unexpected trailing input");
    }
    Ok(p)
}

fn parse_expr(cur: &mut Cursor) -> Result<SOPoly, ParseError> {
    let mut acc = parse_term(cur)?;
    while cur.peek() == Some(b'+') {
        cur.bump();
        let rhs = parse_term(cur)?;
        acc = SOPoly::sum(acc, rhs);
    }
    Ok(acc)
}

fn parse_term(cur: &mut Cursor) -> Result<SOPoly, ParseError> {
    let mut acc = parse_atom(cur)?;
    while cur.peek() == Some(b'*') {
        cur.bump();
        let rhs = parse_atom(cur)?;
        acc = SOPoly::prod(acc, rhs);
    }
    Ok(acc)
}

fn parse_atom(cur: &mut Cursor) -> Result<SOPoly, ParseError> {
    match cur.peek() {
        Some(b'n') => {
            cur.bump();
            Ok(SOPoly::VarN)
        }
        Some(b'L') => {
            cur.bump();
            cur.expect(b'(')?;
            let inner = parse_expr(cur)?;
            cur.expect(b')')?;
            Ok(SOPoly::apply(inner))
        }
        Some(b'(') => {
            cur.bump();
            let inner = parse_expr(cur)?;
            cur.expect(b')')?;
            Ok(inner)
        }
        Some(c) if c.is_ascii_digit() => {
            let pos = cur.pos;
            let v = cur.int()?;
            if v.is_zero() {
                return err(pos, "integer literals must be >= 1");
            }
            Ok(SOPoly::Const(v))
        }
        Some(c) => err(cur.pos, format!("expected term, found '{}'", c as char)),
        None => err(cur.pos, "expected term, found end of input"),
    }
}

impl fmt::Display for SOPoly {
    /// Fully parenthesized form; parsing the output reproduces the tree
    /// exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SOPoly::Const(c) => write!(f, "{c}"),
            SOPoly::VarN => write!(f, "n"),
            SOPoly::Apply(p) => write!(f, "L({p})"),
            SOPoly::Sum(a, b) => write!(f, "({a} + {b})"),
            SOPoly::Prod(a, b) => write!(f, "({a} * {b})"),
        }
    }
}

/// Parse a monotone function in one of its textual forms.
pub fn parse_monfn(text: &str) -> Result<MonFn, ParseError> {
    let trimmed = text.trim();
    if trimmed == "id" {
        return Ok(MonFn::identity());
    }
    if let Some(rest) = trimmed.strip_prefix("poly:") {
        let p = parse_unipoly(rest)?;
        return MonFn::try_poly(p).map_err(|e| ParseError { pos: 0, msg: e.to_string() });
    }
    if let Some(rest) = trimmed.strip_prefix("table seg:") {
        let t = parse_table_segments(rest)?;
        return Ok(MonFn::table(t));
    }
    if let Some(rest) = trimmed.strip_prefix("table:") {
        let t = parse_table_prefix(rest)?;
        return Ok(MonFn::table(t));
    }
    err(0, "expected 'id', 'poly: ...', 'table: ...' or 'table seg: ...'")
}

/// Parse `2*x^2 + x + 1`-style univariate polynomials.
pub fn parse_unipoly(text: &str) -> Result<UniPoly, ParseError> {
    let mut cur = Cursor::new(text);
    let mut acc = UniPoly::zero();
    loop {
        let term = parse_uni_term(&mut cur)?;
        acc = acc.add(&term);
        match cur.peek() {
            Some(b'+') => {
                cur.bump();
            }
            Some(c) => return err(cur.pos, format!("expected '+', found '{}'", c as char)),
            None => break,
        }
    }
    Ok(acc)
}

fn parse_uni_term(cur: &mut Cursor) -> Result<UniPoly, ParseError> {
    let coeff = match cur.peek() {
        Some(c) if c.is_ascii_digit() => {
            let v = cur.int()?;
            if cur.peek() == Some(b'*') {
                cur.bump();
            } else {
                return Ok(UniPoly::constant(v));
            }
            v
        }
        _ => BigUint::from(1u32),
    };
    match cur.peek() {
        Some(b'x') => {
            cur.bump();
            let exp: u32 = if cur.peek() == Some(b'^') {
                cur.bump();
                let pos = cur.pos;
                let e = cur.int()?;
                match e.try_into() {
                    Ok(e) => e,
                    Err(_) => return err(pos, "exponent too large"),
                }
            } else {
                1
            };
            let mut coeffs = vec![BigUint::zero(); exp as usize + 1];
            coeffs[exp as usize] = coeff;
            Ok(UniPoly::from_big_coeffs(coeffs))
        }
        Some(c) => err(cur.pos, format!("expected 'x', found '{}'", c as char)),
        None => err(cur.pos, "expected 'x', found end of input"),
    }
}

fn parse_table_prefix(text: &str) -> Result<TableMon, ParseError> {
    let mut cur = Cursor::new(text);
    cur.expect(b'[')?;
    let mut vals = Vec::new();
    if cur.peek() != Some(b']') {
        loop {
            vals.push(cur.int()?);
            match cur.peek() {
                Some(b',') => {
                    cur.bump();
                }
                _ => break,
            }
        }
    }
    cur.expect(b']')?;
    expect_tail(&mut cur)?;
    TableMon::from_prefix(&vals).map_err(|e| ParseError { pos: 0, msg: e.to_string() })
}

fn parse_table_segments(text: &str) -> Result<TableMon, ParseError> {
    let mut cur = Cursor::new(text);
    cur.expect(b'[')?;
    let mut segs = Vec::new();
    if cur.peek() != Some(b']') {
        loop {
            cur.expect(b'(')?;
            let s = cur.int()?;
            cur.expect(b',')?;
            let v = cur.int()?;
            cur.expect(b')')?;
            segs.push((s, v));
            match cur.peek() {
                Some(b',') => {
                    cur.bump();
                }
                _ => break,
            }
        }
    }
    cur.expect(b']')?;
    expect_tail(&mut cur)?;
    TableMon::from_segments(segs).map_err(|e| ParseError { pos: 0, msg: e.to_string() })
}

fn expect_tail(cur: &mut Cursor) -> Result<(), ParseError> {
    cur.skip_ws();
    let rest = &cur.text[cur.pos..];
    if rest != b"tail+1" {
        return err(cur.pos, "expected 'tail+1'");
    }
    cur.pos = cur.text.len();
    Ok(())
}
