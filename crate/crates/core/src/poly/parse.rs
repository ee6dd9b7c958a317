//! Text grammar for polynomials.
//!
//! A polynomial is a signed sum of terms. A term is an optional coefficient
//! (`3`, `3/2`) followed by a `*`-separated product of variables, each with an
//! optional `^k`. The `*` between a coefficient and the first variable may be
//! left out, so `2a*b` and `2*a*b` are the same term. Zero is written `0`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Exponent, Polynomial, Term};
use crate::error::{Error, Result};
use crate::Rational;

/// Ordered list of variable names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    vars: Vec<String>,
}

impl Ring {
    pub fn new(vars: Vec<String>) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(Error::Parse { pos: 0, msg: format!("invalid variable name {v:?}") });
            }
            if vars[..i].contains(v) {
                return Err(Error::Parse { pos: 0, msg: format!("duplicate variable {v:?}") });
            }
        }
        Ok(Ring { vars })
    }

    /// `x1, ..., xn`.
    pub fn default_names(n: usize) -> Self {
        Ring { vars: (1..=n).map(|i| format!("x{i}")).collect() }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// The ring with one extra trailing variable.
    pub fn extended(&self, name: &str) -> Result<Ring> {
        let mut vars = self.vars.clone();
        vars.push(name.to_string());
        Ring::new(vars)
    }

    /// A fresh variable name for homogenization: `e`, `e1`, `e2`, ...
    pub fn fresh_name(&self) -> String {
        std::iter::once("e".to_string())
            .chain((1..).map(|i| format!("e{i}")))
            .find(|n| self.index_of(n).is_none())
            .expect("infinitely many candidates")
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a polynomial over `ring`.
pub fn parse_polynomial(ring: &Ring, text: &str) -> Result<Polynomial> {
    parse_polynomial_at(ring, text, 0)
}

/// Like [`parse_polynomial`], with error positions offset by `base`.
pub(crate) fn parse_polynomial_at(ring: &Ring, text: &str, base: usize) -> Result<Polynomial> {
    let mut p = Parser { ring, src: text.as_bytes(), pos: 0, base };
    let poly = p.polynomial()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(poly)
}

struct Parser<'a> {
    ring: &'a Ring,
    src: &'a [u8],
    pos: usize,
    base: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.base + self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn polynomial(&mut self) -> Result<Polynomial> {
        let n = self.ring.nvars();
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                None if first => return Err(self.error("empty polynomial")),
                None => break,
                _ if first => false,
                _ => return Err(self.error("expected '+' or '-'")),
            };
            first = false;
            let mut t = self.term()?;
            if negative {
                t.coeff = -t.coeff;
            }
            terms.push(t);
        }
        Ok(Polynomial::from_terms(n, terms))
    }

    fn term(&mut self) -> Result<Term> {
        let n = self.ring.nvars();
        let mut exp = vec![0u32; n];
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let c = self.coefficient()?;
                match self.peek() {
                    Some(b'*') => {
                        self.pos += 1;
                        self.factor(&mut exp)?;
                    }
                    Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.factor(&mut exp)?,
                    _ => return Ok(Term { coeff: c, exp: Exponent(exp) }),
                }
                c
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                self.factor(&mut exp)?;
                Rational::one()
            }
            _ => return Err(self.error("expected a term")),
        };
        while self.peek() == Some(b'*') {
            self.pos += 1;
            self.factor(&mut exp)?;
        }
        Ok(Term { coeff, exp: Exponent(exp) })
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("ascii digits"))
    }

    fn coefficient(&mut self) -> Result<Rational> {
        let num = self.integer()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.integer()?;
            if den.is_zero() {
                return Err(self.error("zero denominator"));
            }
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::from_integer(num))
    }

    fn factor(&mut self, exp: &mut [u32]) -> Result<()> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        let Some(i) = self.ring.index_of(name) else {
            self.pos = start;
            return Err(self.error(&format!("unknown variable {name:?}")));
        };
        let mut power = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let k = self.integer()?;
            power = u32::try_from(k).map_err(|_| Error::Parse {
                pos: self.base + at,
                msg: "exponent out of range".into(),
            })?;
        }
        exp[i] += power;
        Ok(())
    }
}

/// Prints `f` in the grammar accepted by [`parse_polynomial`], largest
/// graded-lex term first.
pub fn format_polynomial(ring: &Ring, f: &Polynomial) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, t) in f.terms().iter().enumerate() {
        let negative = t.coeff.is_negative();
        match (k, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let c = t.coeff.abs();
        let mono = format_monomial(ring, &t.exp);
        if mono.is_empty() {
            out.push_str(&c.to_string());
        } else {
            if !c.is_one() {
                out.push_str(&c.to_string());
                out.push('*');
            }
            out.push_str(&mono);
        }
    }
    out
}

pub(crate) fn format_monomial(ring: &Ring, exp: &Exponent) -> String {
    exp.entries()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| match e {
            1 => ring.vars()[i].clone(),
            _ => format!("{}^{}", ring.vars()[i], e),
        })
        .collect::<Vec<_>>()
        .join("*")
}
