use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Exponent, Polynomial, Term};
use crate::error::{Error, Result};
use crate::Rational;

/// Order applied after all weight rows tie.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tiebreak {
    /// Lexicographic with `x1 > x2 > ... > xn`.
    Lex,
    /// Graded reverse lexicographic.
    RevlexGraded,
}

impl Tiebreak {
    pub fn parse(s: &str) -> Option<Tiebreak> {
        match s {
            "lex" => Some(Tiebreak::Lex),
            "grevlex" | "revlex-graded" | "degrevlex" => Some(Tiebreak::RevlexGraded),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Tiebreak::Lex => "lex",
            Tiebreak::RevlexGraded => "grevlex",
        }
    }
}

impl fmt::Display for Tiebreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A matrix order: monomials are compared by the integer weight rows in turn,
/// then by the tiebreak.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TermOrder {
    nvars: usize,
    rows: Vec<Vec<i64>>,
    tiebreak: Tiebreak,
}

/// Sort key realizing a [`TermOrder`]; larger keys are larger monomials.
pub type OrderKey = Vec<i128>;

impl TermOrder {
    pub fn new(nvars: usize, rows: Vec<Vec<i64>>, tiebreak: Tiebreak) -> Result<Self> {
        for row in &rows {
            if row.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: row.len() });
            }
        }
        Ok(TermOrder { nvars, rows, tiebreak })
    }

    pub fn lex(nvars: usize) -> Self {
        TermOrder { nvars, rows: Vec::new(), tiebreak: Tiebreak::Lex }
    }

    pub fn grevlex(nvars: usize) -> Self {
        TermOrder { nvars, rows: Vec::new(), tiebreak: Tiebreak::RevlexGraded }
    }

    pub fn tiebreak_only(nvars: usize, tiebreak: Tiebreak) -> Self {
        TermOrder { nvars, rows: Vec::new(), tiebreak }
    }

    /// Builds an order from rational rows. Each row is scaled to a primitive
    /// integer vector, which does not change the order.
    pub fn from_rational_rows(nvars: usize, rows: &[Vec<Rational>], tiebreak: Tiebreak) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| integer_row(&clear_denominators(r)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(nvars, rows, tiebreak)
    }

    pub fn from_integer_rows(nvars: usize, rows: &[Vec<BigInt>], tiebreak: Tiebreak) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| integer_row(&primitive(r)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(nvars, rows, tiebreak)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn tiebreak(&self) -> Tiebreak {
        self.tiebreak
    }

    /// The same order with `row` consulted first.
    pub fn with_leading_row(&self, row: Vec<i64>) -> Result<Self> {
        let mut rows = Vec::with_capacity(self.rows.len() + 1);
        rows.push(row);
        rows.extend(self.rows.iter().cloned());
        Self::new(self.nvars, rows, self.tiebreak)
    }

    /// Like [`TermOrder::with_leading_row`] for an arbitrary-precision row,
    /// which is first divided by the gcd of its entries.
    pub fn with_leading_integer_row(&self, row: &[BigInt]) -> Result<Self> {
        self.with_leading_row(integer_row(&primitive(row))?)
    }

    /// The same order with `rows` consulted first, in the given sequence.
    pub fn with_leading_rows(&self, leading: Vec<Vec<i64>>) -> Result<Self> {
        let mut rows = leading;
        rows.extend(self.rows.iter().cloned());
        Self::new(self.nvars, rows, self.tiebreak)
    }

    pub fn key(&self, exp: &Exponent) -> OrderKey {
        let e = exp.entries();
        let mut key = Vec::with_capacity(self.rows.len() + self.nvars + 1);
        for row in &self.rows {
            key.push(row.iter().zip(e).map(|(&w, &x)| i128::from(w) * i128::from(x)).sum());
        }
        match self.tiebreak {
            Tiebreak::Lex => key.extend(e.iter().map(|&x| i128::from(x))),
            Tiebreak::RevlexGraded => {
                key.push(e.iter().map(|&x| i128::from(x)).sum());
                key.extend(e.iter().rev().map(|&x| -i128::from(x)));
            }
        }
        key
    }

    pub fn compare(&self, a: &Exponent, b: &Exponent) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    pub fn is_term_order(&self) -> bool {
        check_term_order(self, self.nvars)
    }
}

/// Compares two monomials under `order`; `Equal` only when `a == b`.
pub fn compare_monomials(order: &TermOrder, a: &Exponent, b: &Exponent) -> Result<Ordering> {
    for e in [a, b] {
        if e.len() != order.nvars {
            return Err(Error::DimensionMismatch { expected: order.nvars, found: e.len() });
        }
    }
    Ok(order.compare(a, b))
}

/// The largest term of `f` under `order`.
pub fn initial_term(order: &TermOrder, f: &Polynomial) -> Result<Term> {
    if f.nvars() != order.nvars {
        return Err(Error::DimensionMismatch { expected: order.nvars, found: f.nvars() });
    }
    f.terms()
        .iter()
        .max_by(|a, b| order.compare(&a.exp, &b.exp))
        .cloned()
        .ok_or(Error::ZeroPolynomial)
}

/// Whether `order` satisfies `1 < x_i` for every variable: for each
/// coordinate, the first row with a nonzero entry there must be positive.
/// Both tiebreaks are term orders, so a coordinate on which every row vanishes
/// is fine. For matrix orders this is equivalent to `1 < x^alpha` for all
/// nonzero `alpha`.
pub fn check_term_order(order: &TermOrder, n: usize) -> bool {
    if order.nvars != n {
        return false;
    }
    (0..n).all(|i| {
        order
            .rows
            .iter()
            .map(|r| r[i])
            .find(|&w| w != 0)
            .map_or(true, |w| w > 0)
    })
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction. The zero vector stays zero.
pub fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    primitive(&ints)
}

/// Divides an integer vector by the gcd of its entries.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

fn integer_row(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::WeightOverflow(x.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, Ring};

    fn e(v: &[u32]) -> Exponent {
        Exponent::new(v.to_vec())
    }

    #[test]
    fn lex_and_weighted() {
        let lex = TermOrder::lex(2);
        assert_eq!(compare_monomials(&lex, &e(&[1, 0]), &e(&[0, 1])).unwrap(), Ordering::Greater);
        let w = TermOrder::new(2, vec![vec![1, 1]], Tiebreak::Lex).unwrap();
        assert_eq!(compare_monomials(&w, &e(&[2, 0]), &e(&[1, 1])).unwrap(), Ordering::Greater);
        assert_eq!(compare_monomials(&w, &e(&[1, 1]), &e(&[1, 1])).unwrap(), Ordering::Equal);
        assert!(compare_monomials(&w, &e(&[1, 1, 0]), &e(&[1, 1])).is_err());
    }

    #[test]
    fn dominating_weight_decides_before_tiebreak() {
        // <(0,-54,-36,-36), a - b> decides; lex alone would say b < a.
        let o = TermOrder::new(4, vec![vec![0, -54, -36, -36]], Tiebreak::Lex).unwrap();
        let a = e(&[1, 1, 0, 0]);
        let b = e(&[0, 0, 1, 0]);
        // a scores -54, b scores -36
        assert_eq!(o.compare(&a, &b), Ordering::Less);
        assert_eq!(TermOrder::lex(4).compare(&a, &b), Ordering::Greater);
    }

    #[test]
    fn grevlex_matches_definition() {
        let o = TermOrder::grevlex(3);
        // same degree: last nonzero entry of a-b negative means a > b
        assert_eq!(o.compare(&e(&[1, 1, 0]), &e(&[1, 0, 1])), Ordering::Greater);
        assert_eq!(o.compare(&e(&[0, 2, 0]), &e(&[1, 0, 1])), Ordering::Greater);
        assert_eq!(o.compare(&e(&[0, 0, 2]), &e(&[1, 1, 0])), Ordering::Less);
        assert_eq!(o.compare(&e(&[0, 0, 3]), &e(&[1, 1, 0])), Ordering::Greater);
    }

    #[test]
    fn initial_terms() {
        let r = Ring::new(vec!["a".into(), "b".into(), "c".into(), "d".into()]).unwrap();
        let f = parse_polynomial(&r, "a*c*d + a^2*c - a*b").unwrap();
        let t = initial_term(&TermOrder::lex(4), &f).unwrap();
        assert_eq!(t.exp, e(&[2, 0, 1, 0]));
        let g = parse_polynomial(&r, "a - 1").unwrap();
        assert_eq!(initial_term(&TermOrder::lex(4), &g).unwrap().exp, e(&[1, 0, 0, 0]));
        let m = parse_polynomial(&r, "-3*b^2*d").unwrap();
        assert_eq!(initial_term(&TermOrder::grevlex(4), &m).unwrap(), m.terms()[0]);
        assert_eq!(initial_term(&TermOrder::lex(4), &Polynomial::zero(4)), Err(Error::ZeroPolynomial));
    }

    // Brute-force oracle: an order is a term order on small exponents iff
    // 1 < x^a for every nonzero a in a box (multiplicativity is automatic).
    fn brute_force_positive(order: &TermOrder, n: usize, bound: u32) -> bool {
        let mut stack = vec![vec![]];
        while let Some(v) = stack.pop() {
            if v.len() == n {
                let x = Exponent::new(v);
                if !x.is_constant() && order.compare(&x, &Exponent::zero(n)) != Ordering::Greater {
                    return false;
                }
                continue;
            }
            for k in 0..=bound {
                let mut w = v.clone();
                w.push(k);
                stack.push(w);
            }
        }
        true
    }

    #[test]
    fn check_term_order_examples() {
        let o = TermOrder::new(4, vec![vec![1, 1, 1, 1]], Tiebreak::Lex).unwrap();
        assert!(check_term_order(&o, 4));
        let bad = TermOrder::new(2, vec![vec![-1, 0]], Tiebreak::Lex).unwrap();
        assert!(!check_term_order(&bad, 2));
        let two = TermOrder::new(2, vec![vec![1, 0], vec![0, -1]], Tiebreak::Lex).unwrap();
        assert_eq!(check_term_order(&two, 2), brute_force_positive(&two, 2, 4));
        assert!(!check_term_order(&two, 2));
        let ok = TermOrder::new(2, vec![vec![1, 0], vec![-5, 1]], Tiebreak::Lex).unwrap();
        assert!(check_term_order(&ok, 2));
        assert!(brute_force_positive(&ok, 2, 4));
        assert!(!check_term_order(&ok, 3));
    }

    #[test]
    fn rational_rows_are_cleared() {
        let half = Rational::new(1.into(), 2.into());
        let o = TermOrder::from_rational_rows(2, &[vec![half.clone(), half * Rational::from_integer(3.into())]], Tiebreak::Lex).unwrap();
        assert_eq!(o.rows(), &[vec![1, 3]]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_rows(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
            proptest::collection::vec(proptest::collection::vec(-3i64..4, n), 0..3)
        }

        proptest! {
            #[test]
            fn check_agrees_with_enumeration(rows in small_rows(3), lex in any::<bool>()) {
                let tb = if lex { Tiebreak::Lex } else { Tiebreak::RevlexGraded };
                let o = TermOrder::new(3, rows, tb).unwrap();
                prop_assert_eq!(check_term_order(&o, 3), brute_force_positive(&o, 3, 3));
            }
        }
    }
}
