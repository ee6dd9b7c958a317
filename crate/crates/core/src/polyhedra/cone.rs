use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{rank, LinearProgram, LpOutcome, Relation};
use crate::poly::{clear_denominators, primitive};
use crate::Rational;

/// Position of a vector relative to a cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// In the relative interior.
    Interior,
    /// In the cone but not in its relative interior.
    Boundary,
    Outside,
}

/// The polyhedral cone `{u : E u = 0, A u <= 0}` with integer rows.
pub struct Cone {
    ambient: usize,
    equalities: Vec<Vec<BigInt>>,
    inequalities: Vec<Vec<BigInt>>,
    analysis: OnceLock<Analysis>,
    facets: OnceLock<Vec<Vec<BigInt>>>,
}

#[derive(Clone, Debug)]
struct Analysis {
    // per inequality: true if it holds with equality on the whole cone
    implicit: Vec<bool>,
    // a point strictly satisfying every other inequality
    interior: Vec<Rational>,
    dim: usize,
}

impl Clone for Cone {
    fn clone(&self) -> Self {
        Cone {
            ambient: self.ambient,
            equalities: self.equalities.clone(),
            inequalities: self.inequalities.clone(),
            analysis: self.analysis.clone(),
            facets: self.facets.clone(),
        }
    }
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient
            && self.equalities == other.equalities
            && self.inequalities == other.inequalities
    }
}

impl Eq for Cone {}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cone")
            .field("ambient", &self.ambient)
            .field("equalities", &self.equalities)
            .field("inequalities", &self.inequalities)
            .finish()
    }
}

fn to_rational(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

pub(crate) fn dot_int(a: &[BigInt], u: &[Rational]) -> Rational {
    a.iter()
        .zip(u)
        .filter(|(x, _)| !x.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + Rational::from_integer(x.clone()) * y)
}

fn normalize_rows(rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(rows.len());
    for r in rows {
        if r.iter().all(Zero::is_zero) {
            continue;
        }
        let p = primitive(&r);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Converts small integer rows.
pub fn int_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

impl Cone {
    /// Rows are scaled to primitive vectors; zero rows and duplicates are
    /// dropped.
    pub fn new(ambient: usize, equalities: Vec<Vec<BigInt>>, inequalities: Vec<Vec<BigInt>>) -> Result<Self> {
        for r in equalities.iter().chain(&inequalities) {
            if r.len() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: r.len() });
            }
        }
        Ok(Cone {
            ambient,
            equalities: normalize_rows(equalities),
            inequalities: normalize_rows(inequalities),
            analysis: OnceLock::new(),
            facets: OnceLock::new(),
        })
    }

    pub fn from_i64(ambient: usize, equalities: &[Vec<i64>], inequalities: &[Vec<i64>]) -> Result<Self> {
        Self::new(ambient, int_rows(equalities), int_rows(inequalities))
    }

    pub fn full_space(ambient: usize) -> Self {
        Self::new(ambient, vec![], vec![]).expect("no rows")
    }

    /// The non-negative orthant, as `-u_i <= 0`.
    pub fn orthant(ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| (0..ambient).map(|j| if i == j { -BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        Self::new(ambient, vec![], rows).expect("square rows")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn equalities(&self) -> &[Vec<BigInt>] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Vec<BigInt>] {
        &self.inequalities
    }

    /// The cone cut out by both constraint systems.
    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        Cone::new(
            self.ambient,
            self.equalities.iter().chain(&other.equalities).cloned().collect(),
            self.inequalities.iter().chain(&other.inequalities).cloned().collect(),
        )
    }

    /// Adds `row` as an equality.
    pub fn with_equality(&self, row: &[BigInt]) -> Result<Cone> {
        let mut eqs = self.equalities.clone();
        eqs.push(row.to_vec());
        Cone::new(self.ambient, eqs, self.inequalities.clone())
    }

    /// Adds `row` as an inequality `<row, u> <= 0`.
    pub fn with_inequality(&self, row: &[BigInt]) -> Result<Cone> {
        let mut ineqs = self.inequalities.clone();
        ineqs.push(row.to_vec());
        Cone::new(self.ambient, self.equalities.clone(), ineqs)
    }

    fn analysis(&self) -> &Analysis {
        self.analysis.get_or_init(|| self.analyze())
    }

    // One LP: maximize sum t_k subject to E u = 0, <a_k, u> + t_k <= 0,
    // 0 <= t_k <= 1. An inequality can be strict somewhere on the cone iff
    // t_k = 1 at every optimum, and then the optimal u is strict on all of
    // them at once.
    fn analyze(&self) -> Analysis {
        let n = self.ambient;
        let m = self.inequalities.len();
        let mut lp = LinearProgram::new(n + m);
        for k in 0..m {
            lp.set_nonnegative(n + k);
        }
        let mut obj = vec![Rational::zero(); n + m];
        for o in obj.iter_mut().skip(n) {
            *o = Rational::one();
        }
        lp.set_objective(obj);
        for e in &self.equalities {
            let mut row = to_rational(e);
            row.resize(n + m, Rational::zero());
            lp.add_constraint(row, Relation::Eq, Rational::zero());
        }
        for (k, a) in self.inequalities.iter().enumerate() {
            let mut row = to_rational(a);
            row.resize(n + m, Rational::zero());
            row[n + k] = Rational::one();
            lp.add_constraint(row, Relation::Le, Rational::zero());
            lp.add_sparse(&[(n + k, Rational::one())], Relation::Le, Rational::one());
        }
        let (point, _) = lp.solve().optimal().expect("bounded and feasible at u = 0");
        let implicit: Vec<bool> = (0..m).map(|k| point[n + k].is_zero()).collect();
        let interior: Vec<Rational> = point[..n].to_vec();
        let mut eq_rows: Vec<Vec<Rational>> = self.equalities.iter().map(|e| to_rational(e)).collect();
        eq_rows.extend(
            self.inequalities
                .iter()
                .zip(&implicit)
                .filter(|(_, &imp)| imp)
                .map(|(a, _)| to_rational(a)),
        );
        let dim = n - rank(&eq_rows);
        Analysis { implicit, interior, dim }
    }

    pub fn dimension(&self) -> usize {
        self.analysis().dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dimension() == self.ambient
    }

    /// Whether each inequality holds with equality on the whole cone.
    pub fn implicit_equalities(&self) -> &[bool] {
        &self.analysis().implicit
    }

    /// The lineality-aware linear span equations: the given equalities plus
    /// implicit ones.
    pub fn span_equations(&self) -> Vec<Vec<BigInt>> {
        let mut rows = self.equalities.clone();
        rows.extend(
            self.inequalities
                .iter()
                .zip(self.implicit_equalities())
                .filter(|(_, &imp)| imp)
                .map(|(a, _)| a.clone()),
        );
        rows
    }

    /// Maximum of `<c, u>` over the cone intersected with `<c, u> <= 1`:
    /// zero iff `c` is non-positive on the cone.
    pub fn max_linear(&self, c: &[BigInt]) -> (Rational, Vec<Rational>) {
        let n = self.ambient;
        let mut lp = LinearProgram::new(n);
        lp.set_objective(to_rational(c));
        for e in &self.equalities {
            lp.add_constraint(to_rational(e), Relation::Eq, Rational::zero());
        }
        for a in &self.inequalities {
            lp.add_constraint(to_rational(a), Relation::Le, Rational::zero());
        }
        lp.add_constraint(to_rational(c), Relation::Le, Rational::one());
        match lp.solve() {
            LpOutcome::Optimal { point, value } => (value, point),
            other => unreachable!("bounded and feasible at u = 0, got {other:?}"),
        }
    }

    /// Whether `<c, u> <= 0` holds on the whole cone.
    pub fn satisfies(&self, c: &[BigInt]) -> bool {
        self.max_linear(c).0.is_zero()
    }

    /// Irredundant outward facet normals (`<a, u> <= 0` on the cone). For a
    /// cone that is not full-dimensional the normals are relative to its
    /// span; implicit equalities are never facets.
    pub fn facets(&self) -> Result<&[Vec<BigInt>]> {
        if self.facets.get().is_none() {
            let f = self.compute_facets()?;
            let _ = self.facets.set(f);
        }
        Ok(self.facets.get().expect("just set"))
    }

    fn compute_facets(&self) -> Result<Vec<Vec<BigInt>>> {
        if self.dimension() == 0 {
            return Err(Error::DegenerateCone("cone is the origin".into()));
        }
        let span = self.span_equations();
        let mut candidates: Vec<Vec<BigInt>> = self
            .inequalities
            .iter()
            .zip(self.implicit_equalities())
            .filter(|(_, &imp)| !imp)
            .map(|(a, _)| a.clone())
            .collect();
        let mut k = 0;
        while k < candidates.len() {
            let others: Vec<Vec<BigInt>> = candidates
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, a)| a.clone())
                .collect();
            let relaxed = Cone::new(self.ambient, span.clone(), others)?;
            if relaxed.satisfies(&candidates[k]) {
                candidates.remove(k);
            } else {
                k += 1;
            }
        }
        Ok(candidates)
    }

    /// A point in the relative interior. When the relative interior meets
    /// the open positive orthant the point is strictly positive. Integer,
    /// primitive.
    pub fn relative_interior_point(&self) -> Vec<BigInt> {
        let restricted = self.intersect(&Cone::orthant(self.ambient)).expect("same ambient");
        if restricted.dimension() == self.dimension() {
            let p = clear_denominators(&restricted.analysis().interior);
            if p.iter().all(|x| x.is_positive()) {
                return p;
            }
        }
        clear_denominators(&self.analysis().interior)
    }

    /// Like [`Cone::relative_interior_point`] but as exact rationals, with
    /// no rescaling.
    pub fn interior_rational(&self) -> &[Rational] {
        &self.analysis().interior
    }

    pub fn contains(&self, w: &[Rational]) -> Result<Membership> {
        if w.len() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: w.len() });
        }
        if self.equalities.iter().any(|e| !dot_int(e, w).is_zero()) {
            return Ok(Membership::Outside);
        }
        let values: Vec<Rational> = self.inequalities.iter().map(|a| dot_int(a, w)).collect();
        if values.iter().any(|v| v.is_positive()) {
            return Ok(Membership::Outside);
        }
        let strict = values
            .iter()
            .zip(self.implicit_equalities())
            .all(|(v, &imp)| imp || v.is_negative());
        Ok(if strict { Membership::Interior } else { Membership::Boundary })
    }

    pub fn contains_int(&self, w: &[BigInt]) -> Result<Membership> {
        self.contains(&to_rational(w))
    }

    /// Facet normals (from [`Cone::facets`]) that vanish at `w`.
    pub fn tight_facets(&self, w: &[Rational]) -> Result<Vec<Vec<BigInt>>> {
        Ok(self
            .facets()?
            .iter()
            .filter(|a| dot_int(a, w).is_zero())
            .cloned()
            .collect())
    }

    /// Whether the two constraint systems describe the same set.
    pub fn same_set(&self, other: &Cone) -> bool {
        self.ambient == other.ambient && self.contained_in(other) && other.contained_in(self)
    }

    /// Whether every point of `self` lies in `other`.
    pub fn contained_in(&self, other: &Cone) -> bool {
        let neg = |v: &Vec<BigInt>| v.iter().map(|x| -x).collect::<Vec<_>>();
        other.inequalities.iter().all(|a| self.satisfies(a))
            && other
                .equalities
                .iter()
                .all(|e| self.satisfies(e) && self.satisfies(&neg(e)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    fn r(x: &[i64]) -> Vec<Rational> {
        x.iter().map(|&a| Rational::from_integer(a.into())).collect()
    }

    #[test]
    fn redundant_inequality_is_dropped() {
        // x >= 0, y >= 0, x + y >= 0
        let c = Cone::from_i64(2, &[], &[vec![-1, 0], vec![0, -1], vec![-1, -1]]).unwrap();
        let mut f = c.facets().unwrap().to_vec();
        f.sort();
        assert_eq!(f, vec![v(&[-1, 0]), v(&[0, -1])]);
        assert_eq!(c.dimension(), 2);
    }

    #[test]
    fn duplicates_and_scalings_collapse() {
        let c = Cone::from_i64(2, &[], &[vec![-2, 0], vec![-1, 0], vec![0, -3]]).unwrap();
        assert_eq!(c.inequalities().len(), 2);
        assert_eq!(c.facets().unwrap().len(), 2);
    }

    #[test]
    fn implicit_equalities_lower_dimension() {
        // x <= 0 and x >= 0 in R^3 gives the plane x = 0
        let c = Cone::from_i64(3, &[], &[vec![1, 0, 0], vec![-1, 0, 0], vec![0, -1, 0]]).unwrap();
        assert_eq!(c.dimension(), 2);
        assert_eq!(c.implicit_equalities(), &[true, true, false]);
        assert_eq!(c.facets().unwrap(), &[v(&[0, -1, 0])]);
    }

    #[test]
    fn membership() {
        let q = Cone::orthant(2);
        assert_eq!(q.contains(&r(&[1, 1])).unwrap(), Membership::Interior);
        assert_eq!(q.contains(&r(&[0, 1])).unwrap(), Membership::Boundary);
        assert_eq!(q.contains(&r(&[0, 0])).unwrap(), Membership::Boundary);
        assert_eq!(q.contains(&r(&[-1, 1])).unwrap(), Membership::Outside);
        assert_eq!(Cone::full_space(2).contains(&r(&[0, 0])).unwrap(), Membership::Interior);
        assert!(q.contains(&r(&[1])).is_err());
        assert_eq!(q.relative_interior_point(), v(&[1, 1]));
    }

    #[test]
    fn halfplane_meets_quadrant() {
        // x - y <= 0 intersected with the quadrant is the sector between
        // the y-axis and the diagonal
        let h = Cone::from_i64(2, &[], &[vec![1, -1]]).unwrap();
        let s = h.intersect(&Cone::orthant(2)).unwrap();
        let mut f = s.facets().unwrap().to_vec();
        f.sort();
        assert_eq!(f, vec![v(&[-1, 0]), v(&[1, -1])]);
        assert!(h.intersect(&Cone::full_space(2)).unwrap().same_set(&h));
    }

    #[test]
    fn relint_point_is_positive_when_possible() {
        // a cone that sticks out of the orthant
        let c = Cone::from_i64(2, &[], &[vec![1, -3]]).unwrap();
        let p = c.relative_interior_point();
        assert!(p.iter().all(|x| x.is_positive()));
        assert_eq!(c.contains_int(&p).unwrap(), Membership::Interior);
        // a line through the origin: no positive point exists
        let l = Cone::from_i64(2, &[vec![1, 1]], &[]).unwrap();
        let p = l.relative_interior_point();
        assert_eq!(l.contains_int(&p).unwrap(), Membership::Interior);
    }

    // Oracle: a 3D cone generated by rays; its facets are the planes
    // through pairs of rays with all other rays on one side.
    fn brute_force_facets(rays: &[[i64; 3]]) -> Vec<Vec<BigInt>> {
        let mut out = Vec::new();
        for i in 0..rays.len() {
            for j in i + 1..rays.len() {
                let (a, b) = (rays[i], rays[j]);
                let n = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
                if n == [0, 0, 0] {
                    continue;
                }
                let side: Vec<i64> = rays.iter().map(|r| r[0] * n[0] + r[1] * n[1] + r[2] * n[2]).collect();
                let normal = if side.iter().all(|&s| s <= 0) {
                    n
                } else if side.iter().all(|&s| s >= 0) {
                    [-n[0], -n[1], -n[2]]
                } else {
                    continue;
                };
                let p = primitive(&v(&normal));
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out.sort();
        out
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(40))]
            #[test]
            fn facets_match_ray_oracle(raw in proptest::collection::vec((1i64..5, -3i64..4, -3i64..4), 3..6)) {
                // rays in the half-space x > 0 generate a pointed cone
                let rays: Vec<[i64; 3]> = raw.iter().map(|&(a, b, c)| [a, b, c]).collect();
                let mut oracle = brute_force_facets(&rays);
                // H-representation: every candidate plane through two rays,
                // oriented when valid, plus redundant scaled copies
                let mut ineqs = oracle.clone();
                ineqs.extend(oracle.iter().map(|a| a.iter().map(|x| x * 2).collect::<Vec<_>>()));
                let sum: Vec<BigInt> = (0..3).map(|k| oracle.iter().map(|a| a[k].clone()).sum()).collect();
                ineqs.push(sum);
                let c = Cone::new(3, vec![], ineqs).unwrap();
                let mut got = c.facets().unwrap().to_vec();
                got.sort();
                oracle.sort();
                if c.dimension() == 3 {
                    prop_assert_eq!(got, oracle);
                }
                let p = c.relative_interior_point();
                prop_assert_eq!(c.contains_int(&p).unwrap(), Membership::Interior);
            }
        }
    }
}
