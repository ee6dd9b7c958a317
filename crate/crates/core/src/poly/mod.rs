//! Exact multivariate polynomials over `Q`.
//!
//! A [`Polynomial`] is a list of [`Term`]s with pairwise distinct exponents,
//! kept sorted by graded lex (largest first) so that equality of polynomials is
//! equality of representations. Term orders used for Gröbner computations live
//! in [`order`] and never affect storage.

mod order;
pub(crate) mod parse;

pub use order::{
    check_term_order, clear_denominators, compare_monomials, initial_term, primitive, OrderKey, Tiebreak,
    TermOrder,
};
pub use parse::{format_polynomial, parse_polynomial, Ring};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rational;

/// Exponent vector `alpha` of the monomial `x^alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(entries: Vec<u32>) -> Self {
        Exponent(entries)
    }

    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    /// The exponent of the variable `x_i` (0-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Exponent(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other - self`, when `self` divides `other`.
    pub fn quotient(&self, other: &Exponent) -> Option<Exponent> {
        if !self.divides(other) {
            return None;
        }
        Some(Exponent(
            other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect(),
        ))
    }

    pub fn product(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn lcm(&self, other: &Exponent) -> Exponent {
        Exponent(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Graded lex comparison, the canonical storage order.
    pub fn grlex_cmp(&self, other: &Exponent) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }

    /// `self - other` as a signed integer vector.
    pub fn difference(&self, other: &Exponent) -> Vec<i64> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| i64::from(a) - i64::from(b))
            .collect()
    }

    /// Extends by one trailing coordinate holding `e`.
    pub fn extended(&self, e: u32) -> Exponent {
        let mut v = self.0.clone();
        v.push(e);
        Exponent(v)
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grlex_cmp(other)
    }
}

impl From<Vec<u32>> for Exponent {
    fn from(v: Vec<u32>) -> Self {
        Exponent(v)
    }
}

/// A nonzero rational multiple of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Rational,
    pub exp: Exponent,
}

impl Term {
    pub fn new(coeff: Rational, exp: Exponent) -> Self {
        debug_assert!(!coeff.is_zero());
        Term { coeff, exp }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exp
            .cmp(&other.exp)
            .then_with(|| self.coeff.cmp(&other.coeff))
    }
}

/// A polynomial in a fixed number of variables with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    // Sorted by graded lex, largest exponent first; no zero coefficients.
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_terms(nvars, vec![Term { coeff: c, exp: Exponent::zero(nvars) }])
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn monomial(exp: Exponent) -> Self {
        let nvars = exp.len();
        Polynomial {
            nvars,
            terms: vec![Term::new(Rational::one(), exp)],
        }
    }

    /// The variable `x_i` (0-based).
    pub fn variable(nvars: usize, i: usize) -> Self {
        Self::monomial(Exponent::unit(nvars, i))
    }

    /// Builds a polynomial from arbitrary terms: like terms are combined and
    /// zero coefficients dropped.
    pub fn from_terms(nvars: usize, mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| b.exp.cmp(&a.exp));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            debug_assert_eq!(t.exp.len(), nvars);
            match out.last_mut() {
                Some(last) if last.exp == t.exp => last.coeff += t.coeff,
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        Polynomial { nvars, terms: out }
    }

    pub fn from_pairs<I>(nvars: usize, pairs: I) -> Self
    where
        I: IntoIterator<Item = (Rational, Vec<u32>)>,
    {
        Self::from_terms(
            nvars,
            pairs
                .into_iter()
                .map(|(c, e)| Term { coeff: c, exp: Exponent(e) })
                .collect(),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.exp.is_constant())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn exponents(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.iter().map(|t| &t.exp)
    }

    pub fn coefficient(&self, exp: &Exponent) -> Rational {
        self.terms
            .iter()
            .find(|t| &t.exp == exp)
            .map(|t| t.coeff.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|t| t.exp.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.iter().map(|t| t.exp.degree());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Term { coeff: &t.coeff * c, exp: t.exp.clone() })
                .collect(),
        }
    }

    /// Multiplies by `c * x^exp`.
    pub fn mul_term(&self, c: &Rational, exp: &Exponent) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        // Multiplying by a monomial preserves graded lex order.
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Term { coeff: &t.coeff * c, exp: t.exp.product(exp) })
                .collect(),
        }
    }

    /// Divides all coefficients by the coefficient at `exp`.
    pub fn monic_at(&self, exp: &Exponent) -> Option<Polynomial> {
        let c = self.coefficient(exp);
        if c.is_zero() {
            return None;
        }
        Some(self.scale(&c.recip()))
    }

    /// Sum of the terms whose exponent satisfies `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Exponent) -> bool) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|t| keep(&t.exp)).cloned().collect(),
        }
    }

    /// Homogenizes with a new last variable.
    pub fn homogenize(&self) -> Polynomial {
        let d = self.total_degree().unwrap_or(0);
        Polynomial::from_terms(
            self.nvars + 1,
            self.terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.clone(),
                    exp: t.exp.extended((d - t.exp.degree()) as u32),
                })
                .collect(),
        )
    }

    /// Substitutes 1 for the last variable.
    pub fn dehomogenize(&self) -> Polynomial {
        Polynomial::from_terms(
            self.nvars - 1,
            self.terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.clone(),
                    exp: Exponent(t.exp.0[..self.nvars - 1].to_vec()),
                })
                .collect(),
        )
    }

    fn merge(&self, other: &Polynomial, negate_other: bool) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "polynomials over different rings");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: &Rational| if negate_other { -c } else { c.clone() };
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.exp.cmp(&b.exp) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term { coeff: sign(&b.coeff), exp: b.exp.clone() });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other { &a.coeff - &b.coeff } else { &a.coeff + &b.coeff };
                    if !c.is_zero() {
                        out.push(Term { coeff: c, exp: a.exp.clone() });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(
            other.terms[j..]
                .iter()
                .map(|b| Term { coeff: sign(&b.coeff), exp: b.exp.clone() }),
        );
        Polynomial { nvars: self.nvars, terms: out }
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.cmp(&other.terms)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, true)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomials over different rings");
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                terms.push(Term { coeff: &a.coeff * &b.coeff, exp: a.exp.product(&b.exp) });
            }
        }
        Polynomial::from_terms(self.nvars, terms)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = Ring::default_names(self.nvars);
        f.write_str(&format_polynomial(&ring, self))
    }
}

/// A real weight vector `omega`; entries may be negative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector(pub Vec<Rational>);

impl WeightVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        WeightVector(entries)
    }

    pub fn from_integers(entries: &[i64]) -> Self {
        WeightVector(entries.iter().map(|&e| Rational::from_integer(e.into())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|w| w.is_positive())
    }

    pub fn dot(&self, exp: &Exponent) -> Rational {
        self.0
            .iter()
            .zip(exp.entries())
            .filter(|(_, &e)| e != 0)
            .map(|(w, &e)| w * Rational::from_integer(e.into()))
            .fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// The initial form `in_w(f)`: the sum of the terms of `f` whose exponents
/// maximize `<w, .>`.
pub fn initial_form(w: &WeightVector, f: &Polynomial) -> Result<Polynomial> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if w.len() != f.nvars() {
        return Err(Error::DimensionMismatch { expected: f.nvars(), found: w.len() });
    }
    let values: Vec<Rational> = f.terms().iter().map(|t| w.dot(&t.exp)).collect();
    let max = values.iter().max().cloned().expect("nonzero polynomial");
    let mut it = values.iter();
    Ok(f.filter_terms(|_| it.next() == Some(&max)))
}
