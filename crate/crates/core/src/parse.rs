//! Inline polynomial syntax such as `z1^2 - 2 z1 z2 + (0.5+0.5i) z3`.
//!
//! ```text
//! expr     = term { ("+" | "-") term } ;
//! term     = factor { ["*" | "/"] factor } ;      (* juxtaposition multiplies; "/" needs a constant divisor *)
//! factor   = ("+" | "-") factor | power ;
//! power    = atom [ "^" integer ] ;
//! atom     = number | "i" | variable | "sqrt" "(" expr ")" | "(" expr ")" ;
//! variable = "z" integer ;                       (* z1, z2, ... *)
//! number   = digits [ "." digits ] [ ("e" | "E") ["+" | "-"] digits ] ;
//! ```
//!
//! `sqrt` accepts only constant nonnegative real arguments.

use crate::error::{Error, Result};
use crate::matrix::{c, cr, C64};
use crate::poly::MultiPoly;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    I,
    Var(usize),
    Sqrt,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' | '−' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' | '·' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            'i' => {
                out.push(Tok::I);
                i += 1
            }
            'z' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    return Err(Error::Parse(format!("variable without index at {i}")));
                }
                let idx: usize = chars[start..j].iter().collect::<String>().parse().unwrap();
                if idx == 0 {
                    return Err(Error::Parse("variables are numbered from z1".into()));
                }
                out.push(Tok::Var(idx - 1));
                i = j;
            }
            's' if chars[i..].starts_with(&['s', 'q', 'r', 't']) => {
                out.push(Tok::Sqrt);
                i += 4;
            }
            d if d.is_ascii_digit() || d == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        while j < chars.len() && chars[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let v: f64 = text
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad number '{text}'")))?;
                out.push(Tok::Num(v));
            }
            other => return Err(Error::Parse(format!("unexpected character '{other}' at {i}"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(Error::Parse(format!("expected {t:?}, found {got:?}"))),
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?)?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.factor()?;
                    let k = constant_value(&d)
                        .ok_or_else(|| Error::Parse("division by a non-constant".into()))?;
                    if k == C64::default() {
                        return Err(Error::Parse("division by zero".into()));
                    }
                    acc = acc.scale(k.inv());
                }
                Some(Tok::Num(_) | Tok::I | Tok::Var(_) | Tok::Sqrt | Tok::LParen) => {
                    acc = acc.mul(&self.power()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.factor()?.scale(cr(-1.0)))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Num(k)) if k >= 0.0 && k.fract() == 0.0 && k <= 64.0 => Ok(base.pow(k as u32)),
                got => Err(Error::Parse(format!("exponent must be a small integer, found {got:?}"))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(MultiPoly::constant(self.nvars, cr(v))),
            Some(Tok::I) => Ok(MultiPoly::constant(self.nvars, c(0.0, 1.0))),
            Some(Tok::Var(i)) => Ok(MultiPoly::var(self.nvars, i)),
            Some(Tok::Sqrt) => {
                self.expect(Tok::LParen)?;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                match constant_value(&inner) {
                    Some(k) if k.im == 0.0 && k.re >= 0.0 => {
                        Ok(MultiPoly::constant(self.nvars, cr(k.re.sqrt())))
                    }
                    _ => Err(Error::Parse("sqrt needs a nonnegative real constant".into())),
                }
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            got => Err(Error::Parse(format!("unexpected token {got:?}"))),
        }
    }
}

fn constant_value(p: &MultiPoly) -> Option<C64> {
    if p.degree() == 0 {
        Some(p.coeff(&vec![0; p.nvars()]))
    } else {
        None
    }
}

/// Parses an inline polynomial. The number of variables is the larger of
/// `min_vars` and the highest variable index that appears.
pub fn parse_poly(src: &str, min_vars: usize) -> Result<MultiPoly> {
    let toks = lex(src)?;
    let used = toks
        .iter()
        .filter_map(|t| if let Tok::Var(i) = t { Some(i + 1) } else { None })
        .max()
        .unwrap_or(0);
    let mut p = Parser {
        toks,
        pos: 0,
        nvars: used.max(min_vars).max(1),
    };
    if p.toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}
