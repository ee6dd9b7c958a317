//! Gröbner cones and enumeration of the restricted Gröbner fan by facet
//! flipping.
//!
//! Every maximal cone is identified by its marked reduced Gröbner basis. The
//! search starts from the cone of the order "total degree, then tiebreak",
//! computes the facets of each cone meeting the open positive orthant, and
//! obtains the neighbor across a facet from a fresh Buchberger run with the
//! matrix order (facet point, outward normal, tiebreak).

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groebner::{buchberger_with, homogenize, GbOptions, Ideal, MarkedReducedGB};
use crate::poly::{primitive, Exponent, TermOrder};
use crate::polyhedra::{Cone, Membership};
use crate::Rational;

/// Closure of the set of weights whose initial forms on `gb` are the marked
/// terms: `<u, beta - alpha> <= 0` for every mark `alpha` and every other
/// exponent `beta` of the same element.
pub fn groebner_cone(gb: &MarkedReducedGB) -> Result<Cone> {
    let n = gb.nvars();
    let mut rows = Vec::new();
    for g in gb.elements() {
        for beta in g.tail_exponents() {
            rows.push(beta.difference(&g.mark).into_iter().map(BigInt::from).collect());
        }
    }
    let cone = Cone::new(n, vec![], rows)?;
    if !cone.is_full_dimensional() {
        return Err(Error::InconsistentMarking(gb.to_string()));
    }
    Ok(cone)
}

/// The Gröbner cone intersected with the non-negative orthant. Fails when the
/// intersection is not full-dimensional.
pub fn restricted_cone(gb: &MarkedReducedGB) -> Result<Cone> {
    let cone = groebner_cone(gb)?.intersect(&Cone::orthant(gb.nvars()))?;
    if !cone.is_full_dimensional() {
        return Err(Error::InconsistentMarking(gb.to_string()));
    }
    Ok(cone)
}

/// A facet of a maximal cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFacet {
    /// Outward normal: the cone satisfies `<normal, u> <= 0`.
    pub normal: Vec<BigInt>,
    /// A point in the relative interior of the facet, integer and primitive.
    pub point: Vec<BigInt>,
    /// Index of the cone on the other side, `None` when the facet lies on the
    /// boundary of the orthant.
    pub neighbor: Option<usize>,
}

/// A maximal cone of the restricted fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerCone {
    pub key: MarkedReducedGB,
    /// The restricted cone.
    pub cone: Cone,
    /// A strictly positive interior point, integer and primitive.
    pub representative: Vec<BigInt>,
    pub facets: Vec<ConeFacet>,
}

/// Adjacency between cones `i < j` across a common facet. Cone `i` lies on
/// the non-positive side of `direction`, cone `j` on the non-negative side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanEdge {
    pub i: usize,
    pub j: usize,
    pub direction: Vec<BigInt>,
    pub facet_point: Vec<BigInt>,
}

/// The maximal cones of a restricted fan with their adjacency graph. Cones
/// are sorted by the textual form of their keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanGraph {
    pub nvars: usize,
    pub cones: Vec<GroebnerCone>,
    pub edges: Vec<FanEdge>,
}

impl FanGraph {
    /// Indices of the cones containing `w` (interior or boundary).
    pub fn locate(&self, w: &[Rational]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (k, c) in self.cones.iter().enumerate() {
            if c.cone.contains(w)? != Membership::Outside {
                out.push(k);
            }
        }
        Ok(out)
    }

    /// The cone containing `w` in its interior.
    pub fn locate_interior(&self, w: &[Rational]) -> Result<Option<usize>> {
        for (k, c) in self.cones.iter().enumerate() {
            if c.cone.contains(w)? == Membership::Interior {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<&FanEdge> {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        self.edges.iter().find(|e| e.i == i && e.j == j)
    }

    pub fn index_of(&self, key: &MarkedReducedGB) -> Option<usize> {
        self.cones.iter().position(|c| &c.key == key)
    }

    /// Whether the adjacency graph is connected.
    pub fn is_connected(&self) -> bool {
        connected(self.cones.len(), self.edges.iter().map(|e| (e.i, e.j)))
    }
}

pub(crate) fn connected(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    if n == 0 {
        return true;
    }
    let mut adj = vec![Vec::new(); n];
    for (i, j) in edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[derive(Clone, Debug)]
pub struct FanOptions {
    /// Abort after discovering this many cones.
    pub max_cones: usize,
    pub gb: GbOptions,
    /// Expand each breadth-first layer in parallel.
    pub parallel: bool,
}

impl Default for FanOptions {
    fn default() -> Self {
        FanOptions { max_cones: 100_000, gb: GbOptions::default(), parallel: true }
    }
}

/// How weight rows on the fan's ambient space become term orders.
enum Setting<'a> {
    /// The ideal's own variables.
    Direct { ideal: &'a Ideal, tiebreak: TermOrder },
    /// The homogenized ideal, weights padded by a zero on the extra variable.
    Slice { homogenized: Ideal, tiebreak: TermOrder },
}

impl Setting<'_> {
    fn ambient(&self) -> usize {
        match self {
            Setting::Direct { ideal, .. } => ideal.nvars(),
            Setting::Slice { homogenized, .. } => homogenized.nvars() - 1,
        }
    }

    fn gb(&self, rows: &[Vec<BigInt>], opts: &GbOptions) -> Result<MarkedReducedGB> {
        let (ideal, tiebreak, pad) = match self {
            Setting::Direct { ideal, tiebreak } => (*ideal, tiebreak, false),
            Setting::Slice { homogenized, tiebreak } => (homogenized, tiebreak, true),
        };
        let mut lead = Vec::with_capacity(rows.len());
        for r in rows {
            let mut row = small_row(&primitive(r))?;
            if pad {
                row.push(0);
            }
            lead.push(row);
        }
        buchberger_with(ideal, &tiebreak.with_leading_rows(lead)?, opts)
    }

    // The cone in the ambient space, restricted to the orthant.
    fn cone(&self, gb: &MarkedReducedGB) -> Result<Cone> {
        match self {
            Setting::Direct { .. } => restricted_cone(gb),
            Setting::Slice { .. } => {
                let full = groebner_cone(gb)?;
                let n = self.ambient();
                let drop = |r: &Vec<BigInt>| r[..n].to_vec();
                let sliced = Cone::new(
                    n,
                    full.equalities().iter().map(drop).collect(),
                    full.inequalities().iter().map(drop).collect(),
                )?
                .intersect(&Cone::orthant(n))?;
                if !sliced.is_full_dimensional() {
                    return Err(Error::InconsistentMarking(gb.to_string()));
                }
                Ok(sliced)
            }
        }
    }
}

fn small_row(row: &[BigInt]) -> Result<Vec<i64>> {
    row.iter()
        .map(|x| {
            x.to_i64().ok_or_else(|| {
                let text: Vec<String> = row.iter().map(|y| y.to_string()).collect();
                Error::WeightOverflow(text.join(","))
            })
        })
        .collect()
}

/// Pads a tiebreak order on `n` variables to one with a trailing variable
/// that every row ignores.
fn pad_order(order: &TermOrder) -> Result<TermOrder> {
    let rows = order.rows().iter().map(|r| r.iter().copied().chain([0]).collect()).collect();
    TermOrder::new(order.nvars() + 1, rows, order.tiebreak())
}

/// Enumerates the maximal cones of the restricted Gröbner fan of `ideal` and
/// their adjacency graph.
pub fn enumerate_restricted_fan(ideal: &Ideal, tiebreak: &TermOrder) -> Result<FanGraph> {
    enumerate_restricted_fan_with(ideal, tiebreak, &FanOptions::default())
}

pub fn enumerate_restricted_fan_with(ideal: &Ideal, tiebreak: &TermOrder, opts: &FanOptions) -> Result<FanGraph> {
    check_tiebreak(ideal.nvars(), tiebreak)?;
    search(&Setting::Direct { ideal, tiebreak: tiebreak.clone() }, opts)
}

/// The homogenization of `ideal` (extra trailing variable) used for the
/// extended fan, computed with the order "total degree, then `tiebreak`".
pub fn homogenized_ideal(ideal: &Ideal, tiebreak: &TermOrder) -> Result<Ideal> {
    homogenize(ideal, tiebreak)
}

/// The Gröbner fan of the homogenized ideal intersected with the hyperplane
/// where the extra variable has weight zero, restricted to the orthant.
pub fn extended_fan_slice(ideal: &Ideal, tiebreak: &TermOrder) -> Result<FanGraph> {
    extended_fan_slice_with(ideal, tiebreak, &FanOptions::default())
}

pub fn extended_fan_slice_with(ideal: &Ideal, tiebreak: &TermOrder, opts: &FanOptions) -> Result<FanGraph> {
    check_tiebreak(ideal.nvars(), tiebreak)?;
    let homogenized = homogenized_ideal(ideal, tiebreak)?;
    search(&Setting::Slice { homogenized, tiebreak: pad_order(tiebreak)? }, opts)
}

fn check_tiebreak(n: usize, tiebreak: &TermOrder) -> Result<()> {
    if tiebreak.nvars() != n {
        return Err(Error::DimensionMismatch { expected: n, found: tiebreak.nvars() });
    }
    if !tiebreak.is_term_order() {
        return Err(Error::InvalidTermOrder(format!("{:?}", tiebreak.rows())));
    }
    Ok(())
}

/// The maximal cone selected by the order "`w`, then `tiebreak`": its
/// marked reduced Gröbner basis and its restricted cone.
pub fn cone_at(ideal: &Ideal, tiebreak: &TermOrder, w: &[BigInt]) -> Result<(MarkedReducedGB, Cone)> {
    check_weight(w)?;
    let setting = Setting::Direct { ideal, tiebreak: tiebreak.clone() };
    let key = setting.gb(&[w.to_vec()], &GbOptions::default())?;
    let cone = setting.cone(&key)?;
    Ok((key, cone))
}

/// Like [`cone_at`] in the extended fan: the basis is that of the
/// homogenized ideal for the order "`(w, 0)`, then `tiebreak`", and the cone
/// is the slice of its Gröbner cone, restricted to the orthant.
pub fn extended_cone_at(homogenized: &Ideal, tiebreak: &TermOrder, w: &[BigInt]) -> Result<(MarkedReducedGB, Cone)> {
    check_weight(w)?;
    let setting = Setting::Slice { homogenized: homogenized.clone(), tiebreak: pad_order(tiebreak)? };
    let key = setting.gb(&[w.to_vec()], &GbOptions::default())?;
    let cone = setting.cone(&key)?;
    Ok((key, cone))
}

fn check_weight(w: &[BigInt]) -> Result<()> {
    if w.iter().all(|x| x.is_positive()) {
        Ok(())
    } else {
        let text: Vec<String> = w.iter().map(|x| x.to_string()).collect();
        Err(Error::NonPositiveWeight(text.join(",")))
    }
}

/// The marked reduced Gröbner basis of the cone across a facet: the order
/// with rows `(facet_point, outward_normal)` followed by `tiebreak`.
pub fn flip(ideal: &Ideal, tiebreak: &TermOrder, facet_point: &[BigInt], outward_normal: &[BigInt]) -> Result<MarkedReducedGB> {
    if !facet_point.iter().all(|x| x.is_positive()) {
        return Err(Error::DegenerateCone("facet point is not strictly positive".into()));
    }
    let setting = Setting::Direct { ideal, tiebreak: tiebreak.clone() };
    setting.gb(&[facet_point.to_vec(), outward_normal.to_vec()], &GbOptions::default())
}

struct Expanded {
    cone: Cone,
    representative: Vec<BigInt>,
    // (normal, point, neighbor key); key is None on the orthant boundary
    facets: Vec<(Vec<BigInt>, Vec<BigInt>, Option<MarkedReducedGB>)>,
}

fn expand(setting: &Setting<'_>, key: &MarkedReducedGB, opts: &GbOptions) -> Result<Expanded> {
    let cone = setting.cone(key)?;
    let representative = cone.relative_interior_point();
    if !representative.iter().all(|x| x.is_positive()) {
        return Err(Error::InconsistentFan(format!("cone of {key} misses the open orthant")));
    }
    let mut facets = Vec::new();
    for normal in cone.facets()?.to_vec() {
        let face = cone.with_equality(&normal)?;
        let point = face.relative_interior_point();
        let neighbor = if point.iter().all(|x| x.is_positive()) {
            let next = setting.gb(&[point.clone(), normal.clone()], opts)?;
            if &next == key {
                return Err(Error::InconsistentFan(format!("flip across {normal:?} returned the same basis")));
            }
            Some(next)
        } else {
            None
        };
        facets.push((normal, point, neighbor));
    }
    Ok(Expanded { cone, representative, facets })
}

fn search(setting: &Setting<'_>, opts: &FanOptions) -> Result<FanGraph> {
    let n = setting.ambient();
    let seed = setting.gb(&[vec![BigInt::from(1); n]], &opts.gb)?;
    if seed.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let mut found: HashMap<MarkedReducedGB, Expanded> = HashMap::new();
    let mut queued: HashSet<MarkedReducedGB> = HashSet::from([seed.clone()]);
    let mut frontier = vec![seed];
    while !frontier.is_empty() {
        let results: Vec<Result<Expanded>> = if opts.parallel {
            frontier.par_iter().map(|k| expand(setting, k, &opts.gb)).collect()
        } else {
            frontier.iter().map(|k| expand(setting, k, &opts.gb)).collect()
        };
        let mut next = Vec::new();
        for (key, res) in frontier.into_iter().zip(results) {
            let ex = res?;
            for (_, _, nb) in &ex.facets {
                if let Some(nb) = nb {
                    if queued.insert(nb.clone()) {
                        if queued.len() > opts.max_cones {
                            return Err(Error::ConeLimit(opts.max_cones));
                        }
                        next.push(nb.clone());
                    }
                }
            }
            found.insert(key, ex);
        }
        // canonical frontier order keeps error reporting reproducible
        next.sort_by_cached_key(|k: &MarkedReducedGB| k.to_string());
        frontier = next;
    }
    assemble(n, found)
}

fn assemble(n: usize, found: HashMap<MarkedReducedGB, Expanded>) -> Result<FanGraph> {
    let mut sorted: BTreeMap<String, (MarkedReducedGB, Expanded)> = BTreeMap::new();
    for (k, ex) in found {
        sorted.insert(k.to_string(), (k, ex));
    }
    let index: HashMap<MarkedReducedGB, usize> =
        sorted.values().enumerate().map(|(i, (k, _))| (k.clone(), i)).collect();
    let mut cones = Vec::with_capacity(sorted.len());
    for (key, ex) in sorted.into_values() {
        let facets = ex
            .facets
            .into_iter()
            .map(|(normal, point, nb)| ConeFacet { normal, point, neighbor: nb.map(|k| index[&k]) })
            .collect();
        cones.push(GroebnerCone { key, cone: ex.cone, representative: ex.representative, facets });
    }
    let mut edges = Vec::new();
    for (i, c) in cones.iter().enumerate() {
        for f in &c.facets {
            let Some(j) = f.neighbor else { continue };
            let neg: Vec<BigInt> = f.normal.iter().map(|x| -x).collect();
            let back = cones[j].facets.iter().any(|g| g.neighbor == Some(i) && g.normal == neg);
            if !back {
                return Err(Error::InconsistentFan(format!("cones {i} and {j} disagree on their common facet")));
            }
            if cones[j].cone.contains_int(&f.point)? != Membership::Boundary {
                return Err(Error::InconsistentFan(format!("facet point of ({i},{j}) not on the boundary of {j}")));
            }
            if i < j {
                edges.push(FanEdge { i, j, direction: f.normal.clone(), facet_point: f.point.clone() });
            }
        }
    }
    let graph = FanGraph { nvars: n, cones, edges };
    if !graph.is_connected() {
        return Err(Error::InconsistentFan("adjacency graph is disconnected".into()));
    }
    Ok(graph)
}

/// The vector `-sum of exponents of standard monomials` for a zero-dimensional
/// initial ideal, `None` when infinitely many monomials are standard.
pub fn standard_monomial_sum(gb: &MarkedReducedGB) -> Option<Vec<BigInt>> {
    let n = gb.nvars();
    let marks: Vec<&Exponent> = gb.marks().collect();
    let mut bounds = vec![None; n];
    for m in &marks {
        let nz: Vec<usize> = (0..n).filter(|&i| m.entries()[i] > 0).collect();
        if let [i] = nz[..] {
            let b = m.entries()[i];
            bounds[i] = Some(bounds[i].map_or(b, |x: u32| x.min(b)));
        }
    }
    let bounds: Vec<u32> = bounds.into_iter().collect::<Option<_>>()?;
    let mut sum = vec![BigInt::zero(); n];
    let mut e = vec![0u32; n];
    loop {
        let exp = Exponent::new(e.clone());
        if !marks.iter().any(|m| m.divides(&exp)) {
            for (s, &x) in sum.iter_mut().zip(&e) {
                *s -= x;
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return Some(sum);
            }
            e[k] += 1;
            if e[k] < bounds[k] {
                break;
            }
            e[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, Ring, WeightVector};
    use crate::groebner::gb_for_weight;

    fn ideal(vars: &[&str], gens: &[&str]) -> Ideal {
        let r = Ring::new(vars.iter().map(|s| s.to_string()).collect()).unwrap();
        Ideal::new(gens.iter().map(|g| parse_polynomial(&r, g).unwrap()).collect()).unwrap()
    }

    fn sequential() -> FanOptions {
        FanOptions { parallel: false, ..FanOptions::default() }
    }

    #[test]
    fn linear_ideal_has_one_cone() {
        let i = ideal(&["x1", "x2"], &["x1 - 1", "x2 - 1"]);
        let g = enumerate_restricted_fan(&i, &TermOrder::lex(2)).unwrap();
        assert_eq!(g.cones.len(), 1);
        assert!(g.edges.is_empty());
        assert!(g.cones[0].cone.same_set(&Cone::orthant(2)));
    }

    #[test]
    fn principal_line() {
        let i = ideal(&["x1", "x2"], &["x1 + x2 + 1"]);
        let g = enumerate_restricted_fan_with(&i, &TermOrder::lex(2), &sequential()).unwrap();
        assert_eq!(g.cones.len(), 2);
        assert_eq!(g.edges.len(), 1);
        let e = &g.edges[0];
        assert_eq!(primitive(&e.facet_point), vec![BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn zero_dimensional_cycle() {
        let i = ideal(&["x1", "x2"], &["x1^2 - x2", "x2^2 - x1"]);
        let g = enumerate_restricted_fan(&i, &TermOrder::lex(2)).unwrap();
        assert_eq!(g.cones.len(), 3);
        assert_eq!(g.edges.len(), 2);
        let mut sums: Vec<Vec<BigInt>> = g.cones.iter().map(|c| standard_monomial_sum(&c.key).unwrap()).collect();
        sums.sort();
        let expected: Vec<Vec<BigInt>> = [[-6, 0], [-2, -2], [0, -6]]
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(sums, expected);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let i = ideal(&["x", "y", "z"], &["x^2 - y", "y^2 - z", "z^2 - x"]);
        let a = enumerate_restricted_fan_with(&i, &TermOrder::lex(3), &sequential()).unwrap();
        let b = enumerate_restricted_fan(&i, &TermOrder::lex(3)).unwrap();
        assert_eq!(a, b);
        assert!(a.cones.len() > 3);
    }

    #[test]
    fn representatives_reproduce_keys() {
        let i = ideal(&["x", "y", "z"], &["x^2 - y*z + x", "y^3 - x*z"]);
        let g = enumerate_restricted_fan(&i, &TermOrder::lex(3)).unwrap();
        for c in &g.cones {
            let w = WeightVector::new(c.representative.iter().map(|x| Rational::from_integer(x.clone())).collect());
            assert_eq!(gb_for_weight(&i, &w, &TermOrder::lex(3)).unwrap(), c.key);
            assert_eq!(c.cone.contains_int(&c.representative).unwrap(), Membership::Interior);
        }
    }

    #[test]
    fn flip_is_an_involution() {
        let i = ideal(&["x1", "x2"], &["x1^2 - x2", "x2^2 - x1"]);
        let t = TermOrder::lex(2);
        let g = enumerate_restricted_fan(&i, &t).unwrap();
        let e = &g.edges[0];
        let there = flip(&i, &t, &e.facet_point, &e.direction).unwrap();
        assert_eq!(there, g.cones[e.j].key);
        let neg: Vec<BigInt> = e.direction.iter().map(|x| -x).collect();
        assert_eq!(flip(&i, &t, &e.facet_point, &neg).unwrap(), g.cones[e.i].key);
    }

    #[test]
    fn unit_ideal_is_rejected() {
        let i = ideal(&["x1", "x2"], &["x1 - 1", "x1"]);
        assert_eq!(enumerate_restricted_fan(&i, &TermOrder::lex(2)), Err(Error::UnitIdeal));
    }

    #[test]
    fn cone_limit() {
        let i = ideal(&["x", "y", "z"], &["x^2 - y", "y^2 - z", "z^2 - x"]);
        let opts = FanOptions { max_cones: 2, ..FanOptions::default() };
        assert_eq!(enumerate_restricted_fan_with(&i, &TermOrder::lex(3), &opts), Err(Error::ConeLimit(2)));
    }

    #[test]
    fn homogeneous_slice_matches_direct_fan() {
        let i = ideal(&["x1", "x2", "x3"], &["x1^2 - x2*x3"]);
        let direct = enumerate_restricted_fan(&i, &TermOrder::lex(3)).unwrap();
        let slice = extended_fan_slice(&i, &TermOrder::lex(3)).unwrap();
        assert_eq!(direct.cones.len(), slice.cones.len());
        for c in &direct.cones {
            assert!(slice.cones.iter().any(|d| d.cone.same_set(&c.cone)));
        }
    }

    #[test]
    fn standard_monomials_of_non_artinian_ideal() {
        let i = ideal(&["x1", "x2"], &["x1 + x2 + 1"]);
        let gb = gb_for_weight(&i, &WeightVector::from_integers(&[2, 1]), &TermOrder::lex(2)).unwrap();
        assert_eq!(standard_monomial_sum(&gb), None);
    }
}
