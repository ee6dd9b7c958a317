//! Buchberger's algorithm and marked reduced Gröbner bases.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};

use crate::poly::{
    clear_denominators, format_polynomial, initial_form, Exponent, OrderKey, Polynomial, Ring, Term, TermOrder,
    WeightVector,
};
use crate::Rational;

/// An ideal given by nonzero generators in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    nvars: usize,
    generators: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(generators: Vec<Polynomial>) -> Result<Self> {
        let first = generators.first().ok_or(Error::EmptyIdeal)?;
        let nvars = first.nvars();
        for g in &generators {
            if g.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            if g.nvars() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: g.nvars() });
            }
        }
        Ok(Ideal { nvars, generators })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_homogeneous(&self) -> bool {
        self.generators.iter().all(Polynomial::is_homogeneous)
    }

    pub fn is_principal(&self) -> bool {
        self.generators.len() == 1
    }
}

/// A polynomial together with the exponent of its distinguished (initial)
/// term. The polynomial is monic at the mark.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedPolynomial {
    pub mark: Exponent,
    pub poly: Polynomial,
}

impl MarkedPolynomial {
    /// Exponents of the non-initial terms.
    pub fn tail_exponents(&self) -> impl Iterator<Item = &Exponent> {
        self.poly.exponents().filter(move |e| *e != &self.mark)
    }
}

/// A reduced Gröbner basis with marked initial terms. Elements are sorted by
/// mark in graded lex order, so two bases of the same ideal with the same
/// initial ideal compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedReducedGB {
    nvars: usize,
    elements: Vec<MarkedPolynomial>,
}

impl MarkedReducedGB {
    /// Wraps marked polynomials, normalizing each to be monic at its mark
    /// and sorting them. Reducedness is checked by [`MarkedReducedGB::is_reduced`],
    /// not here.
    pub fn from_marked(nvars: usize, elements: Vec<MarkedPolynomial>) -> Result<Self> {
        let mut out = Vec::with_capacity(elements.len());
        for MarkedPolynomial { mark, poly } in elements {
            if poly.nvars() != nvars || mark.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: poly.nvars() });
            }
            let poly = poly
                .monic_at(&mark)
                .ok_or_else(|| Error::InconsistentMarking("mark is not a term of its polynomial".into()))?;
            out.push(MarkedPolynomial { mark, poly });
        }
        out.sort();
        Ok(MarkedReducedGB { nvars, elements: out })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn elements(&self) -> &[MarkedPolynomial] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn marks(&self) -> impl Iterator<Item = &Exponent> {
        self.elements.iter().map(|g| &g.mark)
    }

    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.elements.iter().map(|g| g.poly.clone()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].mark.is_constant()
    }

    /// Monic at the marks, marks pairwise non-dividing, and no mark divides
    /// a non-initial monomial of any element.
    pub fn is_reduced(&self) -> bool {
        let monic = self.elements.iter().all(|g| g.poly.coefficient(&g.mark).is_one());
        let minimal = self.elements.iter().enumerate().all(|(i, g)| {
            self.elements
                .iter()
                .enumerate()
                .all(|(j, h)| i == j || !h.mark.divides(&g.mark))
        });
        let reduced = self
            .elements
            .iter()
            .all(|g| g.tail_exponents().all(|e| !self.marks().any(|m| m.divides(e))));
        monic && minimal && reduced
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        normal_form(f, &self.elements)
    }

    /// Whether every S-polynomial reduces to zero.
    pub fn is_groebner(&self) -> Result<bool> {
        for (i, g) in self.elements.iter().enumerate() {
            for h in &self.elements[i + 1..] {
                if !normal_form(&s_polynomial(g, h), &self.elements)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// A stable textual form used for canonical ordering of cones.
    pub fn serialize(&self, ring: &Ring) -> String {
        self.elements
            .iter()
            .map(|g| {
                let marks: Vec<String> = g.mark.entries().iter().map(u32::to_string).collect();
                format!("[{}] {}", marks.join(","), format_polynomial(ring, &g.poly))
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Display for MarkedReducedGB {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize(&Ring::default_names(self.nvars)))
    }
}

fn s_polynomial(g: &MarkedPolynomial, h: &MarkedPolynomial) -> Polynomial {
    let l = g.mark.lcm(&h.mark);
    let one = Rational::one();
    let a = g.poly.mul_term(&one, &g.mark.quotient(&l).expect("mark divides lcm"));
    let b = h.poly.mul_term(&one, &h.mark.quotient(&l).expect("mark divides lcm"));
    &a - &b
}

const NORMAL_FORM_STEPS: usize = 200_000;

/// Reduces `f` modulo marked polynomials until no monomial is divisible by a
/// mark. Terminates whenever the marking is induced by a term order; other
/// markings are cut off after a fixed number of steps.
pub fn normal_form(f: &Polynomial, basis: &[MarkedPolynomial]) -> Result<Polynomial> {
    let mut current = f.clone();
    for _ in 0..NORMAL_FORM_STEPS {
        // Largest reducible term first, in graded lex.
        let hit = current.terms().iter().find_map(|t| {
            basis.iter().find_map(|g| {
                g.mark.quotient(&t.exp).map(|q| (t.coeff.clone() / g.poly.coefficient(&g.mark), q, g))
            })
        });
        match hit {
            None => return Ok(current),
            Some((c, q, g)) => current = &current - &g.poly.mul_term(&c, &q),
        }
    }
    Err(Error::ReductionLimit(NORMAL_FORM_STEPS))
}

/// Limits guarding Buchberger's algorithm against orders that are not term
/// orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GbOptions {
    pub pair_limit: usize,
    pub reduction_limit: usize,
}

impl Default for GbOptions {
    fn default() -> Self {
        GbOptions { pair_limit: 100_000, reduction_limit: 2_000_000 }
    }
}

// A polynomial sorted by a term order, largest first, with cached order keys.
// Keys are linear in the exponent, so shifting a polynomial by a monomial
// shifts every key by the monomial's key.
#[derive(Clone, Debug)]
struct OrdPoly {
    terms: Vec<(OrderKey, Exponent, Rational)>,
}

impl OrdPoly {
    fn from_poly(p: &Polynomial, order: &TermOrder) -> OrdPoly {
        let mut terms: Vec<_> = p
            .terms()
            .iter()
            .map(|t| (order.key(&t.exp), t.exp.clone(), t.coeff.clone()))
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        OrdPoly { terms }
    }

    fn lead(&self) -> &Exponent {
        &self.terms[0].1
    }

    fn make_monic(&mut self) {
        let c = self.terms[0].2.recip();
        for t in &mut self.terms {
            t.2 *= &c;
        }
    }

    fn to_marked(&self, nvars: usize) -> MarkedPolynomial {
        MarkedPolynomial {
            mark: self.lead().clone(),
            poly: Polynomial::from_terms(
                nvars,
                self.terms.iter().map(|(_, e, c)| Term::new(c.clone(), e.clone())).collect(),
            ),
        }
    }
}

fn add_key(a: &OrderKey, b: &OrderKey) -> OrderKey {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

type Work = BTreeMap<OrderKey, (Exponent, Rational)>;

fn work_add(work: &mut Work, key: OrderKey, exp: Exponent, c: Rational) {
    use std::collections::btree_map::Entry;
    match work.entry(key) {
        Entry::Vacant(v) => {
            v.insert((exp, c));
        }
        Entry::Occupied(mut o) => {
            o.get_mut().1 += c;
            if o.get().1.is_zero() {
                o.remove();
            }
        }
    }
}

/// Subtracts `c * x^q * g` from the work set, skipping `g`'s leading term.
fn work_sub_tail(work: &mut Work, g: &OrdPoly, c: &Rational, q: &Exponent, qkey: &OrderKey) {
    for (k, e, gc) in &g.terms[1..] {
        work_add(work, add_key(k, qkey), e.product(q), -(c * gc));
    }
}

struct Reducer<'a> {
    order: &'a TermOrder,
    limit: usize,
    steps: usize,
}

impl Reducer<'_> {
    /// Full reduction of the work set by `basis`.
    fn reduce(&mut self, mut work: Work, basis: &[OrdPoly], skip: Option<usize>) -> Result<OrdPoly> {
        let mut rem = Vec::new();
        while let Some((key, (exp, c))) = work.pop_last() {
            self.steps += 1;
            if self.steps > self.limit {
                return Err(Error::ReductionLimit(self.limit));
            }
            let divisor = basis
                .iter()
                .enumerate()
                .filter(|(i, _)| Some(*i) != skip)
                .find_map(|(_, g)| g.lead().quotient(&exp).map(|q| (g, q)));
            match divisor {
                Some((g, q)) => {
                    let qkey = self.order.key(&q);
                    // g is monic
                    work_sub_tail(&mut work, g, &c, &q, &qkey);
                }
                None => rem.push((key, exp, c)),
            }
        }
        Ok(OrdPoly { terms: rem })
    }
}

fn work_from(p: &OrdPoly) -> Work {
    p.terms.iter().map(|(k, e, c)| (k.clone(), (e.clone(), c.clone()))).collect()
}

/// The reduced Gröbner basis of `ideal` under `order`.
pub fn buchberger(ideal: &Ideal, order: &TermOrder) -> Result<MarkedReducedGB> {
    buchberger_with(ideal, order, &GbOptions::default())
}

/// Buchberger's algorithm with the normal selection strategy and both of
/// Buchberger's criteria, followed by minimization and interreduction.
pub fn buchberger_with(ideal: &Ideal, order: &TermOrder, opts: &GbOptions) -> Result<MarkedReducedGB> {
    let n = ideal.nvars();
    if order.nvars() != n {
        return Err(Error::DimensionMismatch { expected: n, found: order.nvars() });
    }
    let mut reducer = Reducer { order, limit: opts.reduction_limit, steps: 0 };

    let mut basis: Vec<OrdPoly> = Vec::new();
    for g in ideal.generators() {
        let mut p = OrdPoly::from_poly(g, order);
        p = reducer.reduce(work_from(&p), &basis, None)?;
        if p.terms.is_empty() {
            continue;
        }
        p.make_monic();
        basis.push(p);
    }

    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }
    let mut processed = 0usize;
    while !pending.is_empty() {
        if basis.iter().any(|g| g.lead().is_constant()) {
            break;
        }
        // normal strategy: smallest lcm first, ties by index
        let (i, j) = *pending
            .iter()
            .min_by(|a, b| {
                let la = order.key(&basis[a.0].lead().lcm(basis[a.1].lead()));
                let lb = order.key(&basis[b.0].lead().lcm(basis[b.1].lead()));
                la.cmp(&lb).then(a.cmp(b))
            })
            .expect("nonempty");
        pending.remove(&(i, j));
        processed += 1;
        if processed > opts.pair_limit {
            return Err(Error::PairLimit(opts.pair_limit));
        }

        let (li, lj) = (basis[i].lead().clone(), basis[j].lead().clone());
        if li.is_coprime(&lj) {
            continue;
        }
        let l = li.lcm(&lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lead().divides(&l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }

        let mut work = Work::new();
        let qi = li.quotient(&l).expect("divides lcm");
        let qj = lj.quotient(&l).expect("divides lcm");
        let one = Rational::one();
        work_sub_tail(&mut work, &basis[i], &-one.clone(), &qi, &order.key(&qi));
        work_sub_tail(&mut work, &basis[j], &one, &qj, &order.key(&qj));
        let mut r = reducer.reduce(work, &basis, None)?;
        if r.terms.is_empty() {
            continue;
        }
        r.make_monic();
        let k = basis.len();
        basis.push(r);
        for i in 0..k {
            pending.insert((i, k));
        }
    }

    if let Some(unit) = basis.iter().find(|g| g.lead().is_constant()) {
        let mut u = unit.clone();
        u.terms.truncate(1);
        u.make_monic();
        return MarkedReducedGB::from_marked(n, vec![u.to_marked(n)]);
    }

    // minimize
    let mut minimal: Vec<OrdPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && h.lead().divides(g.lead()) && (h.lead() != g.lead() || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    // interreduce: each element keeps its lead and reduces its tail
    let mut reduced = Vec::with_capacity(minimal.len());
    for (i, g) in minimal.iter().enumerate() {
        let mut tail = work_from(g);
        let lead = g.terms[0].clone();
        tail.remove(&lead.0);
        let mut r = reducer.reduce(tail, &minimal, Some(i))?;
        let mut terms = vec![lead];
        terms.append(&mut r.terms);
        let mut p = OrdPoly { terms };
        p.make_monic();
        reduced.push(p.to_marked(n));
    }
    MarkedReducedGB::from_marked(n, reduced)
}

/// Clears denominators of a positive weight and prepends it to `tiebreak`.
pub fn weight_order(w: &WeightVector, tiebreak: &TermOrder) -> Result<TermOrder> {
    if w.len() != tiebreak.nvars() {
        return Err(Error::DimensionMismatch { expected: tiebreak.nvars(), found: w.len() });
    }
    if !w.is_positive() {
        let text: Vec<String> = w.entries().iter().map(|x| x.to_string()).collect();
        return Err(Error::NonPositiveWeight(text.join(",")));
    }
    tiebreak.with_leading_integer_row(&clear_denominators(w.entries()))
}

/// The reduced Gröbner basis for the order "`w` first, then `tiebreak`".
pub fn gb_for_weight(ideal: &Ideal, w: &WeightVector, tiebreak: &TermOrder) -> Result<MarkedReducedGB> {
    buchberger(ideal, &weight_order(w, tiebreak)?)
}

/// The monomial ideal generated by the marks.
pub fn initial_ideal(gb: &MarkedReducedGB) -> Ideal {
    Ideal::new(gb.marks().cloned().map(Polynomial::monomial).collect()).expect("nonempty basis")
}

/// Generators of `in_w(I)`: the initial forms of the elements of the reduced
/// Gröbner basis for `w` refined by `tiebreak`.
pub fn initial_forms_ideal(ideal: &Ideal, w: &WeightVector, tiebreak: &TermOrder) -> Result<Vec<Polynomial>> {
    let gb = gb_for_weight(ideal, w, tiebreak)?;
    gb.elements().iter().map(|g| initial_form(w, &g.poly)).collect()
}

/// Generators of the homogenization of `ideal` in one extra trailing
/// variable, obtained by homogenizing a Gröbner basis for the order "total
/// degree first, then `order`".
pub fn homogenize(ideal: &Ideal, order: &TermOrder) -> Result<Ideal> {
    let n = ideal.nvars();
    let graded = order.with_leading_row(vec![1; n])?;
    let gb = buchberger(ideal, &graded)?;
    Ideal::new(gb.elements().iter().map(|g| g.poly.homogenize()).collect())
}

/// Whether two ideals are equal, decided by comparing reduced Gröbner bases.
pub fn same_ideal(a: &Ideal, b: &Ideal) -> Result<bool> {
    if a.nvars() != b.nvars() {
        return Ok(false);
    }
    let order = TermOrder::grevlex(a.nvars());
    Ok(buchberger(a, &order)? == buchberger(b, &order)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, Tiebreak};

    fn ring(names: &[&str]) -> Ring {
        Ring::new(names.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn ideal(r: &Ring, gens: &[&str]) -> Ideal {
        Ideal::new(gens.iter().map(|g| parse_polynomial(r, g).unwrap()).collect()).unwrap()
    }

    fn marked(r: &Ring, mark: &[u32], p: &str) -> MarkedPolynomial {
        MarkedPolynomial { mark: Exponent::new(mark.to_vec()), poly: parse_polynomial(r, p).unwrap() }
    }

    #[test]
    fn normal_form_examples() {
        let r = ring(&["x1", "x2"]);
        let g = vec![marked(&r, &[1, 0], "x1 - 1"), marked(&r, &[0, 1], "x2 - 1")];
        let f = parse_polynomial(&r, "x1*x2 - 1").unwrap();
        assert!(normal_form(&f, &g).unwrap().is_zero());
        let h = parse_polynomial(&r, "3").unwrap();
        assert_eq!(normal_form(&h, &g).unwrap(), h);
        // x1 -> x1 - (x1 - 1) = 1
        let x1 = parse_polynomial(&r, "x1").unwrap();
        assert_eq!(normal_form(&x1, &g).unwrap(), Polynomial::one(2));
    }

    #[test]
    fn example_one_basis() {
        let r = ring(&["x1", "x2"]);
        let i = ideal(&r, &["x1 - 1", "x2 - 1"]);
        let gb = buchberger(&i, &TermOrder::lex(2)).unwrap();
        assert_eq!(gb.len(), 2);
        assert_eq!(gb.polynomials(), vec![parse_polynomial(&r, "x2 - 1").unwrap(), parse_polynomial(&r, "x1 - 1").unwrap()]);
        assert!(gb.is_reduced());
        assert!(gb.is_groebner().unwrap());
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let r = ring(&["x", "y", "z"]);
        let i = ideal(&r, &["x^2*y", "y^3", "x*z"]);
        let gb = buchberger(&i, &TermOrder::grevlex(3)).unwrap();
        let mut got: Vec<_> = gb.polynomials();
        let mut want: Vec<_> = i.generators().to_vec();
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn lex_elimination() {
        let r = ring(&["x", "y"]);
        let i = ideal(&r, &["x^2 - y", "y^2 - x"]);
        let gb = buchberger(&i, &TermOrder::lex(2)).unwrap();
        assert_eq!(gb.polynomials(), vec![parse_polynomial(&r, "x - y^2").unwrap(), parse_polynomial(&r, "y^4 - y").unwrap()]);
    }

    #[test]
    fn unit_ideal() {
        let r = ring(&["x", "y"]);
        let i = ideal(&r, &["x*y - 1", "x"]);
        let gb = buchberger(&i, &TermOrder::grevlex(2)).unwrap();
        assert!(gb.is_unit());
    }

    #[test]
    fn weight_examples() {
        let r = ring(&["x1", "x2"]);
        let i = ideal(&r, &["x1 - 1", "x2 - 1"]);
        let lex = TermOrder::lex(2);
        let forms = initial_forms_ideal(&i, &WeightVector::from_integers(&[1, 1]), &lex).unwrap();
        let want = Ideal::new(vec![Polynomial::variable(2, 0), Polynomial::variable(2, 1)]).unwrap();
        assert!(same_ideal(&Ideal::new(forms).unwrap(), &want).unwrap());
        let forms = initial_forms_ideal(&i, &WeightVector::from_integers(&[1, 2]), &lex).unwrap();
        assert!(same_ideal(&Ideal::new(forms).unwrap(), &want).unwrap());
        assert!(matches!(
            initial_forms_ideal(&i, &WeightVector::from_integers(&[3, -1]), &lex),
            Err(Error::NonPositiveWeight(_))
        ));
    }

    #[test]
    fn principal_ideal_basis_is_the_generator() {
        let r = ring(&["x1", "x2"]);
        let i = ideal(&r, &["2*x1 + x2 + 1"]);
        let gb = gb_for_weight(&i, &WeightVector::from_integers(&[1, 3]), &TermOrder::lex(2)).unwrap();
        assert_eq!(gb.len(), 1);
        assert_eq!(gb.elements()[0].mark, Exponent::new(vec![0, 1]));
        assert_eq!(gb.elements()[0].poly, parse_polynomial(&r, "2*x1 + x2 + 1").unwrap());
    }

    #[test]
    fn homogenization() {
        let r = ring(&["x1"]);
        let i = ideal(&r, &["x1 - 1"]);
        let h = homogenize(&i, &TermOrder::lex(1)).unwrap();
        let r2 = ring(&["x1", "e"]);
        assert_eq!(h.generators(), &[parse_polynomial(&r2, "x1 - e").unwrap()]);
        let r3 = ring(&["x", "y"]);
        let hom = ideal(&r3, &["x^2 - x*y"]);
        let h = homogenize(&hom, &TermOrder::lex(2)).unwrap();
        assert_eq!(h.generators()[0].terms().iter().map(|t| t.exp.entries()[2]).max(), Some(0));
    }

    #[test]
    fn invalid_order_hits_the_guard() {
        let r = ring(&["x"]);
        let i = ideal(&r, &["x - x^2", "x^3"]);
        // 1 > x here, so x^3 -> x^4 -> ... never stops
        let bad = TermOrder::new(1, vec![vec![-1]], Tiebreak::Lex).unwrap();
        let opts = GbOptions { pair_limit: 50, reduction_limit: 10_000 };
        assert_eq!(buchberger_with(&i, &bad, &opts), Err(Error::ReductionLimit(10_000)));
    }
}
