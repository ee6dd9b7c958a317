//! An explicit non-regularity certificate for the restricted Gröbner fan of
//! `<acd + a^2c - ab, ad^2 - c, ad^4 + ac>` in `Q[a, b, c, d]`, and its
//! replay.
//!
//! The certificate is a subgraph of 15 cones and 20 edges. Each cone is given
//! by a weight vector in its interior, each edge by a vector in the relative
//! interior of the common facet and a direction vector separating the two
//! cones. Four flows on the subgraph are orthogonal to the directions on
//! every edge except `(29, 30)`, which forces the scalar on that edge to be
//! zero in any solution of the cycle-flow system.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{cone_at, extended_cone_at, homogenized_ideal as homogenized_ideal_of, FanGraph};
use crate::groebner::{Ideal, MarkedReducedGB};
use crate::poly::{parse_polynomial, Ring, TermOrder};
use crate::polyhedra::{Cone, FarkasVector, Membership};
use crate::regularity::{build_system, positively_parallel, DirectedEdge, EdgeGraph, Flow, SystemMatrix};
use crate::Rational;

/// Cone labels with interior weight vectors.
const REPRESENTATIVES: [(u32, [i64; 4]); 15] = [
    (5, [10, 2, 5, 3]),
    (6, [14, 4, 11, 5]),
    (15, [7, 6, 5, 3]),
    (16, [7, 11, 8, 4]),
    (17, [5, 2, 3, 3]),
    (18, [4, 3, 5, 4]),
    (19, [5, 1, 2, 2]),
    (26, [7, 1, 2, 3]),
    (27, [17, 1, 4, 9]),
    (29, [10, 1, 2, 6]),
    (30, [15, 1, 3, 11]),
    (33, [3, 1, 2, 3]),
    (44, [7, 5, 4, 4]),
    (57, [7, 1, 2, 7]),
    (58, [7, 1, 3, 8]),
];

/// `(i, j, facet vector, direction, flows)`; flow values are from `i` to `j`.
type EdgeRow = (u32, u32, [i64; 4], [i64; 4], [i64; 4]);

const EDGES: [EdgeRow; 20] = [
    (5, 6, [3, 1, 2, 1], [-1, -1, 2, 0], [-72, 0, -36, -36]),
    (5, 19, [8, 4, 5, 3], [0, 1, -2, 2], [72, 0, 36, 36]),
    (6, 18, [2, 1, 2, 1], [-1, 0, 0, 2], [-72, 0, -36, -36]),
    (15, 16, [6, 8, 6, 3], [-1, 0, 0, 2], [72, 54, 60, 36]),
    (15, 19, [5, 3, 3, 2], [-1, -2, 3, 1], [-72, 0, -24, 0]),
    (15, 26, [9, 2, 3, 3], [0, 0, -1, 1], [0, -54, -36, -36]),
    (16, 17, [8, 15, 11, 5], [-1, -2, 3, 1], [0, 0, 6, -18]),
    (16, 44, [5, 7, 5, 3], [0, 1, -2, 1], [72, 54, 54, 54]),
    (17, 19, [4, 1, 2, 2], [1, 0, 0, -2], [0, 0, -12, 0]),
    (17, 33, [6, 1, 3, 4], [-1, -1, 1, 1], [0, 0, 18, -18]),
    (18, 33, [4, 1, 3, 4], [1, 1, -3, 1], [-72, 0, -36, -36]),
    (19, 26, [10, 1, 3, 4], [1, 2, -4, 0], [0, 0, 0, 36]),
    (26, 27, [18, 2, 5, 9], [-1, 0, 0, 2], [0, -54, -36, 0]),
    (27, 29, [13, 1, 3, 7], [0, 2, -3, 1], [0, -54, -36, 0]),
    (29, 30, [8, 1, 2, 5], [-1, -1, 2, 1], [0, -18, 0, 0]),
    (29, 44, [9, 3, 3, 5], [0, 1, -1, 0], [0, -36, -36, 0]),
    (30, 44, [6, 5, 4, 4], [1, 2, -3, -1], [-72, -18, -18, -54]),
    (30, 57, [13, 1, 3, 11], [-1, -1, 1, 1], [72, 0, 18, 54]),
    (33, 58, [6, 1, 3, 7], [0, 2, -3, 1], [-72, 0, -18, -54]),
    (57, 58, [10, 1, 3, 11], [-1, -2, 4, 0], [72, 0, 18, 54]),
];

/// Non-zero only on the rows `(r, t) = (1,1), (2,2), (3,3), (4,4)` of the
/// flow-major stacked system.
const FARKAS_Y: [i64; 16] = [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1];

pub const GENERATORS: [&str; 3] = ["a*c*d + a^2*c - a*b", "a*d^2 - c", "a*d^4 + a*c"];

/// Generators of the homogenization of [`ideal`] in `a, b, c, d, e`.
pub const HOMOGENIZED_GENERATORS: [&str; 8] = [
    "c*d^2 + a*c*e",
    "-c^2*e + c^2*d + a*b*d",
    "c^2*e + c^3 - b*c*e - b*c*d - a*b*d + a*b*c",
    "-c*e^2 + a*d^2",
    "-c^2*e + a*c*d - a*b*e",
    "c^2*e - b*c*e + a*c^2 - a*b*d",
    "c^2*e + a^2*c",
    "b*c*e + a^2*b",
];

pub fn ring() -> Ring {
    Ring::new(["a", "b", "c", "d"].map(String::from).to_vec()).expect("valid names")
}

/// `<acd + a^2c - ab, ad^2 - c, ad^4 + ac>`.
pub fn ideal() -> Ideal {
    let r = ring();
    Ideal::new(GENERATORS.iter().map(|g| parse_polynomial(&r, g).expect("valid")).collect()).expect("nonzero")
}

/// The listed homogenization, in `Q[a, b, c, d, e]`.
pub fn homogenized_ideal() -> Ideal {
    let r = ring().extended("e").expect("fresh name");
    Ideal::new(HOMOGENIZED_GENERATORS.iter().map(|g| parse_polynomial(&r, g).expect("valid")).collect())
        .expect("nonzero")
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateEdge {
    pub i: u32,
    pub j: u32,
    pub facet_vector: Vec<BigInt>,
    pub direction: Vec<BigInt>,
    /// One value per flow.
    pub flows: Vec<BigInt>,
}

/// The embedded certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateData {
    pub vertex_ids: Vec<u32>,
    pub representatives: Vec<Vec<BigInt>>,
    pub edges: Vec<CertificateEdge>,
    pub farkas_y: Vec<BigInt>,
}

impl Default for CertificateData {
    fn default() -> Self {
        Self::embedded()
    }
}

impl CertificateData {
    pub fn embedded() -> Self {
        CertificateData {
            vertex_ids: REPRESENTATIVES.iter().map(|(id, _)| *id).collect(),
            representatives: REPRESENTATIVES.iter().map(|(_, w)| ints(w)).collect(),
            edges: EDGES
                .iter()
                .map(|(i, j, p, d, f)| CertificateEdge {
                    i: *i,
                    j: *j,
                    facet_vector: ints(p),
                    direction: ints(d),
                    flows: ints(f),
                })
                .collect(),
            farkas_y: FARKAS_Y.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn index_of(&self, id: u32) -> Option<usize> {
        self.vertex_ids.iter().position(|&v| v == id)
    }

    pub fn representative(&self, id: u32) -> Option<&[BigInt]> {
        self.index_of(id).map(|k| self.representatives[k].as_slice())
    }

    pub fn flow_count(&self) -> usize {
        self.edges.first().map_or(0, |e| e.flows.len())
    }

    /// The subgraph with vertices in the order of `vertex_ids`.
    pub fn graph(&self) -> EdgeGraph {
        let edges = self
            .edges
            .iter()
            .map(|e| DirectedEdge {
                i: self.index_of(e.i).expect("known vertex"),
                j: self.index_of(e.j).expect("known vertex"),
                direction: e.direction.iter().map(|x| Rational::from_integer(x.clone())).collect(),
            })
            .collect();
        EdgeGraph::new(self.vertex_ids.len(), 4, edges).expect("well-formed data")
    }

    pub fn flows(&self) -> Vec<Flow> {
        (0..self.flow_count())
            .map(|r| Flow { values: self.edges.iter().map(|e| Rational::from_integer(e.flows[r].clone())).collect() })
            .collect()
    }

    /// The stacked system of the four flows, 16 rows by 20 edge columns.
    pub fn system(&self) -> SystemMatrix {
        build_system(&self.graph(), &self.flows()).expect("consistent sizes")
    }
}

/// Conservation of each flow at every vertex.
pub fn check_flows(data: &CertificateData) -> Vec<bool> {
    let g = data.graph();
    data.flows().iter().map(|f| f.is_conserved(&g)).collect()
}

/// `sum_r d_r f^r` per edge: the contribution of the edge to the combination
/// of the diagonal equations `(r, r)`.
pub fn check_orthogonality(data: &CertificateData) -> Vec<BigInt> {
    data.edges
        .iter()
        .map(|e| e.direction.iter().zip(&e.flows).map(|(d, f)| d * f).sum())
        .collect()
}

/// Whether the embedded `y` satisfies `y^T A >= 0`, `y^T A != 0` for the
/// stacked system.
pub fn farkas_replay(data: &CertificateData) -> bool {
    let sys = data.system();
    FarkasVector(data.farkas_y.iter().map(|y| Rational::from_integer(y.clone())).collect()).certifies(&sys.rows, sys.ncols)
}

/// `y^T A` for the embedded `y`.
pub fn farkas_combination(data: &CertificateData) -> Vec<Rational> {
    let sys = data.system();
    FarkasVector(data.farkas_y.iter().map(|y| Rational::from_integer(y.clone())).collect()).combination(&sys.rows, sys.ncols)
}

/// Checks on one edge of the subgraph against the actual Gröbner cones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCheck {
    pub i: u32,
    pub j: u32,
    /// The two representatives give different reduced Gröbner bases.
    pub distinct_bases: bool,
    /// Both cones are full-dimensional and contain their representative in
    /// the interior.
    pub full_dimensional: bool,
    /// The facet vector is on the boundary of cone `i`.
    pub boundary_i: bool,
    /// The facet vector is on the boundary of cone `j`.
    pub boundary_j: bool,
    /// `<d, u> <= 0` on cone `i` and `>= 0` on cone `j`.
    pub separates: bool,
    /// The facet vector lies on exactly one facet of cone `i`, and that
    /// facet's outward normal is a positive multiple of the direction.
    pub relative_interior: bool,
}

impl EdgeCheck {
    pub fn passed(&self) -> bool {
        self.distinct_bases
            && self.full_dimensional
            && self.boundary_i
            && self.boundary_j
            && self.separates
            && self.relative_interior
    }
}

/// Recomputes the cone of every representative with [`cone_at`] and runs
/// [`EdgeCheck`] on every edge.
pub fn verify_subgraph(ideal: &Ideal, data: &CertificateData) -> Result<Vec<EdgeCheck>> {
    let tiebreak = TermOrder::lex(ideal.nvars());
    verify_subgraph_with(data, |w| cone_at(ideal, &tiebreak, w))
}

/// [`verify_subgraph`] in the extended fan of `ideal`, with cones selected by
/// [`extended_cone_at`].
pub fn verify_subgraph_extended(ideal: &Ideal, data: &CertificateData) -> Result<Vec<EdgeCheck>> {
    let tiebreak = TermOrder::lex(ideal.nvars());
    let homogenized = homogenized_ideal_of(ideal, &tiebreak)?;
    verify_subgraph_with(data, |w| extended_cone_at(&homogenized, &tiebreak, w))
}

/// [`verify_subgraph`] with a caller-supplied map from representatives to
/// `(basis, cone)`.
pub fn verify_subgraph_with<F>(data: &CertificateData, cone_of: F) -> Result<Vec<EdgeCheck>>
where
    F: Fn(&[BigInt]) -> Result<(MarkedReducedGB, Cone)>,
{
    let mut vertices = Vec::new();
    for rep in &data.representatives {
        let (key, cone) = match cone_of(rep) {
            Ok((key, cone)) => (Some(key), Some(cone)),
            Err(Error::InconsistentMarking(_)) => (None, None),
            Err(e) => return Err(e),
        };
        let interior = match &cone {
            Some(c) => c.contains_int(rep)? == Membership::Interior,
            None => false,
        };
        vertices.push((key, cone, interior));
    }
    let mut out = Vec::new();
    for e in &data.edges {
        let (ka, ca, ia) = &vertices[data.index_of(e.i).expect("known vertex")];
        let (kb, cb, ib) = &vertices[data.index_of(e.j).expect("known vertex")];
        let mut check = EdgeCheck {
            i: e.i,
            j: e.j,
            distinct_bases: ka.is_some() && ka != kb,
            full_dimensional: *ia && *ib,
            boundary_i: false,
            boundary_j: false,
            separates: false,
            relative_interior: false,
        };
        if let (Some(ci), Some(cj)) = (ca, cb) {
            check.boundary_i = ci.contains_int(&e.facet_vector)? == Membership::Boundary;
            check.boundary_j = cj.contains_int(&e.facet_vector)? == Membership::Boundary;
            let neg: Vec<BigInt> = e.direction.iter().map(|x| -x).collect();
            check.separates = ci.satisfies(&e.direction) && cj.satisfies(&neg);
            let tight = ci.tight_facets(&to_rat(&e.facet_vector))?;
            check.relative_interior = check.boundary_i
                && tight.len() == 1
                && positively_parallel(&to_rat(&tight[0]), &to_rat(&e.direction));
        }
        out.push(check);
    }
    Ok(out)
}

fn to_rat(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

/// The full checklist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub flows_conserved: Vec<bool>,
    /// `(i, j, sum_r d_r f^r)` per edge.
    pub local_contributions: Vec<(u32, u32, String)>,
    /// Exactly one edge has a non-zero contribution, and it is positive.
    pub orthogonal_except_one: bool,
    pub edges: Vec<EdgeCheck>,
    pub farkas_accepted: bool,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.flows_conserved.iter().all(|&b| b)
            && self.orthogonal_except_one
            && self.edges.iter().all(EdgeCheck::passed)
            && self.farkas_accepted
    }

    pub fn to_text(&self) -> String {
        let mark = |b: bool| if b { "ok" } else { "FAIL" };
        let mut s = String::new();
        for (r, ok) in self.flows_conserved.iter().enumerate() {
            s.push_str(&format!("flow {} conserved: {}\n", r + 1, mark(*ok)));
        }
        for (i, j, v) in &self.local_contributions {
            s.push_str(&format!("edge ({i},{j}) local contribution {v}\n"));
        }
        s.push_str(&format!("orthogonal except one edge: {}\n", mark(self.orthogonal_except_one)));
        for e in &self.edges {
            s.push_str(&format!(
                "edge ({},{}): distinct {} full-dim {} boundary {}/{} separates {} relint {}\n",
                e.i,
                e.j,
                mark(e.distinct_bases),
                mark(e.full_dimensional),
                mark(e.boundary_i),
                mark(e.boundary_j),
                mark(e.separates),
                mark(e.relative_interior)
            ));
        }
        s.push_str(&format!("farkas vector accepted: {}\n", mark(self.farkas_accepted)));
        s.push_str(&format!("certificate: {}\n", if self.passed() { "VALID" } else { "INVALID" }));
        s
    }
}

pub fn verify_certificate(ideal: &Ideal, data: &CertificateData) -> Result<CertificateReport> {
    let contributions = check_orthogonality(data);
    let nonzero: Vec<&BigInt> = contributions.iter().filter(|v| !v.is_zero()).collect();
    Ok(CertificateReport {
        flows_conserved: check_flows(data),
        local_contributions: data.edges.iter().zip(&contributions).map(|(e, v)| (e.i, e.j, v.to_string())).collect(),
        orthogonal_except_one: nonzero.len() == 1 && nonzero[0].is_positive(),
        edges: verify_subgraph(ideal, data)?,
        farkas_accepted: farkas_replay(data),
    })
}

/// Maps each certificate vertex to the enumerated cone containing its
/// representative in the interior.
pub fn match_to_fan(graph: &FanGraph, data: &CertificateData) -> Result<Vec<Option<usize>>> {
    data.representatives.iter().map(|rep| graph.locate_interior(&to_rat(rep))).collect()
}

/// Edges where `y^T A` is non-zero for the embedded `y`.
pub fn forced_edges(data: &CertificateData) -> Vec<(u32, u32)> {
    farkas_combination(data)
        .iter()
        .zip(&data.edges)
        .filter(|(v, _)| !v.is_zero())
        .map(|(_, e)| (e.i, e.j))
        .collect()
}
