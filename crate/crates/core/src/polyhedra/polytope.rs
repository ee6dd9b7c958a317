//! Polyhedra in V-representation, Newton polytopes and normal cones.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::cone::Cone;
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation};
use crate::poly::Polynomial;
use crate::Rational;

/// `conv(vertices) + cone(rays)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    pub ambient: usize,
    pub vertices: Vec<Vec<BigInt>>,
    pub rays: Vec<Vec<BigInt>>,
}

impl Polyhedron {
    /// The vertices among `points`, in their original order.
    pub fn from_points(ambient: usize, points: &[Vec<BigInt>]) -> Polyhedron {
        Self::build(ambient, points, vec![])
    }

    /// Minkowski sum with the non-positive orthant.
    pub fn plus_nonpositive_orthant(&self) -> Polyhedron {
        let rays = (0..self.ambient)
            .map(|i| (0..self.ambient).map(|j| if i == j { -BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        Self::build(self.ambient, &self.vertices, rays)
    }

    /// Minkowski sum with the non-negative orthant.
    pub fn plus_nonnegative_orthant(&self) -> Polyhedron {
        let rays = (0..self.ambient)
            .map(|i| (0..self.ambient).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        Self::build(self.ambient, &self.vertices, rays)
    }

    fn build(ambient: usize, points: &[Vec<BigInt>], rays: Vec<Vec<BigInt>>) -> Polyhedron {
        let mut distinct: Vec<Vec<BigInt>> = Vec::new();
        for p in points {
            if !distinct.contains(p) {
                distinct.push(p.clone());
            }
        }
        let vertices = distinct
            .iter()
            .enumerate()
            .filter(|(i, p)| {
                let others: Vec<&Vec<BigInt>> =
                    distinct.iter().enumerate().filter(|(j, _)| j != i).map(|(_, q)| q).collect();
                !in_hull(p, &others, &rays)
            })
            .map(|(_, p)| p.clone())
            .collect();
        Polyhedron { ambient, vertices, rays }
    }

    /// The closure of `{w : face_w(P) = F}` for the face spanned by the
    /// given vertex indices: `w` is constant on the face, maximal there, and
    /// non-positive on every ray.
    pub fn normal_cone(&self, face: &[usize]) -> Result<Cone> {
        let first = *face.first().ok_or_else(|| Error::DegenerateCone("empty face".into()))?;
        let base = &self.vertices[first];
        let diff = |q: &Vec<BigInt>| q.iter().zip(base).map(|(a, b)| a - b).collect::<Vec<_>>();
        let eqs = face[1..].iter().map(|&i| diff(&self.vertices[i])).collect();
        let mut ineqs: Vec<Vec<BigInt>> = self.vertices.iter().map(diff).collect();
        ineqs.extend(self.rays.iter().cloned());
        Cone::new(self.ambient, eqs, ineqs)
    }

    /// Normal cones of all vertices, i.e. the maximal cones of the normal fan
    /// when every vertex cone is full-dimensional.
    pub fn vertex_normal_cones(&self) -> Result<Vec<Cone>> {
        (0..self.vertices.len()).map(|i| self.normal_cone(&[i])).collect()
    }
}

// Whether p lies in conv(others) + cone(rays).
fn in_hull(p: &[BigInt], others: &[&Vec<BigInt>], rays: &[Vec<BigInt>]) -> bool {
    if others.is_empty() {
        return false;
    }
    let k = others.len();
    let r = rays.len();
    let mut lp = LinearProgram::new(k + r);
    lp.set_all_nonnegative();
    for (d, pd) in p.iter().enumerate() {
        let mut row: Vec<Rational> = others.iter().map(|q| Rational::from_integer(q[d].clone())).collect();
        row.extend(rays.iter().map(|ray| Rational::from_integer(ray[d].clone())));
        lp.add_constraint(row, Relation::Eq, Rational::from_integer(pd.clone()));
    }
    let mut convex = vec![Rational::one(); k];
    convex.extend(vec![Rational::zero(); r]);
    lp.add_constraint(convex, Relation::Eq, Rational::one());
    lp.solve().optimal().is_some()
}

/// The convex hull of the exponent vectors of `f`.
pub fn newton_polytope(f: &Polynomial) -> Result<Polyhedron> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let points: Vec<Vec<BigInt>> = f
        .exponents()
        .map(|e| e.entries().iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    Ok(Polyhedron::from_points(f.nvars(), &points))
}

/// Normal cone of `p` at the face spanned by `face` (vertex indices).
pub fn normal_cone(p: &Polyhedron, face: &[usize]) -> Result<Cone> {
    p.normal_cone(face)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, Ring};
    use crate::polyhedra::Membership;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    fn triangle() -> Polyhedron {
        let r = Ring::new(vec!["x1".into(), "x2".into()]).unwrap();
        newton_polytope(&parse_polynomial(&r, "x1 + x2 + 1").unwrap()).unwrap()
    }

    #[test]
    fn triangle_vertices() {
        let t = triangle();
        let mut vs = t.vertices.clone();
        vs.sort();
        assert_eq!(vs, vec![v(&[0, 0]), v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn interior_points_are_not_vertices() {
        let r = Ring::new(vec!["x1".into(), "x2".into()]).unwrap();
        let p = newton_polytope(&parse_polynomial(&r, "x1^2 + x2^2 + x1*x2 + 1 + x1").unwrap()).unwrap();
        let mut vs = p.vertices.clone();
        vs.sort();
        // (1,1) is on the edge, (1,0) on the edge: only the corners remain
        assert_eq!(vs, vec![v(&[0, 0]), v(&[0, 2]), v(&[2, 0])]);
    }

    #[test]
    fn monomial_has_full_normal_cone() {
        let p = Polyhedron::from_points(2, &[v(&[3, 1])]);
        let c = p.normal_cone(&[0]).unwrap();
        assert!(c.same_set(&Cone::full_space(2)));
    }

    #[test]
    fn vertex_normal_cone_by_maximization() {
        let t = triangle();
        let i = t.vertices.iter().position(|p| p == &v(&[1, 0])).unwrap();
        let c = t.normal_cone(&[i]).unwrap();
        // {w : w1 >= w2, w1 >= 0}
        let expected = Cone::from_i64(2, &[], &[vec![-1, 1], vec![-1, 0]]).unwrap();
        assert!(c.same_set(&expected));
        // oracle: maximize over the three points directly
        for w in [[2i64, 1], [1, 1], [1, -3], [-1, -2], [0, 5]] {
            let vals: Vec<i64> = [[0, 0], [1, 0], [0, 1]].iter().map(|p| p[0] * w[0] + p[1] * w[1]).collect();
            let max = *vals.iter().max().unwrap();
            let at_vertex = vals[1] == max;
            let wq: Vec<Rational> = w.iter().map(|&x| Rational::from_integer(x.into())).collect();
            assert_eq!(c.contains(&wq).unwrap() != Membership::Outside, at_vertex, "w = {w:?}");
        }
    }

    #[test]
    fn minkowski_with_negative_orthant_drops_origin() {
        let t = triangle().plus_nonpositive_orthant();
        let mut vs = t.vertices.clone();
        vs.sort();
        assert_eq!(vs, vec![v(&[0, 1]), v(&[1, 0])]);
    }
}
