//! The cycle-flow test for regularity of a polyhedral fan.
//!
//! If a fan is the normal fan of a polyhedron, the polyhedron has one vertex
//! per maximal cone, and the edge between adjacent vertices `i`, `j` is a
//! positive multiple `s_(i,j) d_(i,j)` of the facet normal. Going around any
//! cycle of the adjacency graph returns to the start, so for every flow `f`
//! on the graph `sum_e f_e s_e d_e = 0`. Taking the fundamental cycles of a
//! spanning tree as a basis of the flow space gives a linear system `A s = 0`
//! that must have a solution with `s > 0`. When it does, integrating along
//! the tree produces candidate vertex coordinates. When it does not, a Farkas
//! vector certifies non-regularity.

use std::collections::VecDeque;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::FanGraph;
use crate::polyhedra::{lp_feasible_strict, FarkasVector, StrictFeasibility};
use crate::Rational;

/// An edge `i -> j` with direction `d`: vertex `j` is reached from `i` by
/// moving along a positive multiple of `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedEdge {
    pub i: usize,
    pub j: usize,
    pub direction: Vec<Rational>,
}

/// A graph with a direction vector on every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeGraph {
    pub vertices: usize,
    pub dim: usize,
    pub edges: Vec<DirectedEdge>,
}

impl EdgeGraph {
    pub fn new(vertices: usize, dim: usize, edges: Vec<DirectedEdge>) -> Result<Self> {
        for e in &edges {
            if e.i >= vertices || e.j >= vertices || e.i == e.j {
                return Err(Error::InconsistentFan(format!("bad edge ({}, {})", e.i, e.j)));
            }
            if e.direction.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: e.direction.len() });
            }
        }
        Ok(EdgeGraph { vertices, dim, edges })
    }

    /// Adjacency lists of `(neighbor, edge index)`.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for (k, e) in self.edges.iter().enumerate() {
            adj[e.i].push((e.j, k));
            adj[e.j].push((e.i, k));
        }
        adj
    }

    pub fn components(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices);
        for e in &self.edges {
            uf.union(e.i, e.j);
        }
        (0..self.vertices).filter(|&v| uf.find(v) == v).count()
    }
}

impl From<&FanGraph> for EdgeGraph {
    fn from(g: &FanGraph) -> Self {
        let edges = g
            .edges
            .iter()
            .map(|e| DirectedEdge {
                i: e.i,
                j: e.j,
                direction: e.direction.iter().map(|x| Rational::from_integer(x.clone())).collect(),
            })
            .collect();
        EdgeGraph { vertices: g.cones.len(), dim: g.nvars, edges }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.0[v] != v {
            self.0[v] = self.0[self.0[v]];
            v = self.0[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// A value per edge. Positive values flow from `i` to `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    pub values: Vec<Rational>,
}

impl Flow {
    /// Net outflow at each vertex.
    pub fn imbalance(&self, graph: &EdgeGraph) -> Vec<Rational> {
        let mut net = vec![Rational::zero(); graph.vertices];
        for (e, f) in graph.edges.iter().zip(&self.values) {
            net[e.i] += f;
            net[e.j] -= f;
        }
        net
    }

    /// Whether inflow equals outflow at every vertex.
    pub fn is_conserved(&self, graph: &EdgeGraph) -> bool {
        self.values.len() == graph.edges.len() && self.imbalance(graph).iter().all(Zero::is_zero)
    }
}

/// Fundamental cycles of a spanning forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleBasis {
    pub flows: Vec<Flow>,
    /// Edge indices of the spanning forest.
    pub spanning_tree: Vec<usize>,
}

/// Cycle basis from a breadth-first spanning forest rooted at the lowest
/// vertex of each component.
pub fn cycle_basis(graph: &EdgeGraph) -> CycleBasis {
    let adj = graph.adjacency();
    let mut seen = vec![false; graph.vertices];
    let mut tree = Vec::new();
    for root in 0..graph.vertices {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, k) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    tree.push(k);
                    queue.push_back(w);
                }
            }
        }
    }
    cycle_basis_from_tree(graph, &tree).expect("breadth-first forest is spanning")
}

/// Cycle basis for a given spanning forest (edge indices).
pub fn cycle_basis_from_tree(graph: &EdgeGraph, tree: &[usize]) -> Result<CycleBasis> {
    let mut uf = UnionFind::new(graph.vertices);
    let mut in_tree = vec![false; graph.edges.len()];
    for &k in tree {
        let e = graph.edges.get(k).ok_or_else(|| Error::InconsistentFan(format!("no edge {k}")))?;
        if !uf.union(e.i, e.j) {
            return Err(Error::InconsistentFan("spanning tree contains a cycle".into()));
        }
        in_tree[k] = true;
    }
    if tree.len() + graph.components() != graph.vertices {
        return Err(Error::InconsistentFan("tree does not span the graph".into()));
    }
    // parent pointers of the forest
    let mut tree_adj = vec![Vec::new(); graph.vertices];
    for &k in tree {
        let e = &graph.edges[k];
        tree_adj[e.i].push((e.j, k));
        tree_adj[e.j].push((e.i, k));
    }
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; graph.vertices];
    let mut depth = vec![0usize; graph.vertices];
    let mut seen = vec![false; graph.vertices];
    for root in 0..graph.vertices {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, k) in &tree_adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, k));
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    let m = graph.edges.len();
    let mut flows = Vec::new();
    for (k, e) in graph.edges.iter().enumerate() {
        if in_tree[k] {
            continue;
        }
        let mut values = vec![Rational::zero(); m];
        values[k] = Rational::one();
        // return from j to i along the tree
        let (mut a, mut b) = (e.j, e.i);
        let mut tail = Vec::new();
        while a != b {
            if depth[a] >= depth[b] {
                let (p, t) = parent[a].expect("non-root");
                // traverse a -> p
                values[t] += step_sign(&graph.edges[t], a, p);
                a = p;
            } else {
                let (p, t) = parent[b].expect("non-root");
                // the path from i climbs b -> p; returning it goes p -> b
                tail.push((t, p, b));
                b = p;
            }
        }
        for (t, from, to) in tail {
            values[t] += step_sign(&graph.edges[t], from, to);
        }
        flows.push(Flow { values });
    }
    Ok(CycleBasis { flows, spanning_tree: tree.to_vec() })
}

fn step_sign(e: &DirectedEdge, from: usize, to: usize) -> Rational {
    if e.i == from && e.j == to {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// The stacked system `sum_e f^r_e s_e d_e = 0`, one block of `dim` rows per
/// flow; row `r * dim + t` is coordinate `t` of flow `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemMatrix {
    pub rows: Vec<Vec<Rational>>,
    pub ncols: usize,
}

pub fn build_system(graph: &EdgeGraph, flows: &[Flow]) -> Result<SystemMatrix> {
    let m = graph.edges.len();
    let mut rows = Vec::with_capacity(flows.len() * graph.dim);
    for f in flows {
        if f.values.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: f.values.len() });
        }
        for t in 0..graph.dim {
            rows.push(graph.edges.iter().zip(&f.values).map(|(e, v)| v * &e.direction[t]).collect());
        }
    }
    Ok(SystemMatrix { rows, ncols: m })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegularityOutcome {
    /// Scalars `s_e >= 1` and vertex coordinates with
    /// `coordinates[j] - coordinates[i] = s_e d_e`. This is consistent with
    /// regularity but does not prove it.
    Embedding { scalars: Vec<Rational>, coordinates: Vec<Vec<Rational>> },
    /// `certificate` replays against the system built from `spanning_tree`;
    /// `witness_edges` are the edges whose scalar vanishes on every
    /// non-negative solution.
    NonRegular { certificate: FarkasVector, witness_edges: Vec<usize>, spanning_tree: Vec<usize> },
}

impl RegularityOutcome {
    pub fn is_embedding(&self) -> bool {
        matches!(self, RegularityOutcome::Embedding { .. })
    }

    pub fn verdict(&self) -> &'static str {
        match self {
            RegularityOutcome::Embedding { .. } => "passes necessary condition",
            RegularityOutcome::NonRegular { .. } => "not regular",
        }
    }
}

pub fn check_regularity(graph: &FanGraph) -> Result<RegularityOutcome> {
    check_graph(&EdgeGraph::from(graph))
}

/// [`check_regularity`] on an arbitrary direction-labelled graph with the
/// breadth-first cycle basis.
pub fn check_graph(graph: &EdgeGraph) -> Result<RegularityOutcome> {
    check_with_basis(graph, &cycle_basis(graph))
}

pub fn check_with_basis(graph: &EdgeGraph, basis: &CycleBasis) -> Result<RegularityOutcome> {
    let system = build_system(graph, &basis.flows)?;
    match lp_feasible_strict(&system.rows, system.ncols) {
        StrictFeasibility::Feasible { s } => {
            let coordinates = integrate(graph, &basis.spanning_tree, &s);
            let outcome = RegularityOutcome::Embedding { scalars: s, coordinates };
            if !verify_outcome(graph, &outcome, basis)? {
                return Err(Error::InconsistentFan("embedding does not close up".into()));
            }
            Ok(outcome)
        }
        StrictFeasibility::Infeasible { certificate, forced_zero } => Ok(RegularityOutcome::NonRegular {
            certificate,
            witness_edges: forced_zero,
            spanning_tree: basis.spanning_tree.clone(),
        }),
    }
}

// Coordinates from the spanning forest, each component rooted at its lowest
// vertex placed at the origin.
fn integrate(graph: &EdgeGraph, tree: &[usize], s: &[Rational]) -> Vec<Vec<Rational>> {
    let mut adj = vec![Vec::new(); graph.vertices];
    for &k in tree {
        let e = &graph.edges[k];
        adj[e.i].push((e.j, k));
        adj[e.j].push((e.i, k));
    }
    let mut coords: Vec<Option<Vec<Rational>>> = vec![None; graph.vertices];
    for root in 0..graph.vertices {
        if coords[root].is_some() {
            continue;
        }
        coords[root] = Some(vec![Rational::zero(); graph.dim]);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let here = coords[v].clone().expect("visited");
            for &(w, k) in &adj[v] {
                if coords[w].is_none() {
                    let e = &graph.edges[k];
                    let sign = if e.i == v { Rational::one() } else { -Rational::one() };
                    let there = here
                        .iter()
                        .zip(&e.direction)
                        .map(|(x, d)| x + &sign * &s[k] * d)
                        .collect();
                    coords[w] = Some(there);
                    queue.push_back(w);
                }
            }
        }
    }
    coords.into_iter().map(|c| c.expect("forest spans")).collect()
}

/// Exact check that `coordinates[j] - coordinates[i] = s_e d_e` on every edge
/// and every `s_e >= 1`.
pub fn verify_embedding(graph: &EdgeGraph, scalars: &[Rational], coordinates: &[Vec<Rational>]) -> bool {
    if scalars.len() != graph.edges.len() || coordinates.len() != graph.vertices {
        return false;
    }
    if coordinates.iter().any(|c| c.len() != graph.dim) {
        return false;
    }
    graph.edges.iter().zip(scalars).all(|(e, s)| {
        *s >= Rational::one()
            && (0..graph.dim).all(|t| &coordinates[e.j][t] - &coordinates[e.i][t] == s * &e.direction[t])
    })
}

/// Replays an outcome: embeddings through [`verify_embedding`], certificates
/// against the system of the recorded spanning tree.
pub fn verify_outcome(graph: &EdgeGraph, outcome: &RegularityOutcome, basis: &CycleBasis) -> Result<bool> {
    match outcome {
        RegularityOutcome::Embedding { scalars, coordinates } => Ok(verify_embedding(graph, scalars, coordinates)),
        RegularityOutcome::NonRegular { certificate, witness_edges, spanning_tree } => {
            let basis = if &basis.spanning_tree == spanning_tree {
                basis.clone()
            } else {
                cycle_basis_from_tree(graph, spanning_tree)?
            };
            let system = build_system(graph, &basis.flows)?;
            Ok(certificate.certifies(&system.rows, system.ncols)
                && !witness_edges.is_empty()
                && witness_edges.iter().all(|&k| k < graph.edges.len()))
        }
    }
}

/// Replays a certificate against the system of its spanning tree.
pub fn replay(graph: &EdgeGraph, outcome: &RegularityOutcome) -> Result<bool> {
    let tree = match outcome {
        RegularityOutcome::NonRegular { spanning_tree, .. } => spanning_tree.clone(),
        RegularityOutcome::Embedding { .. } => return verify_outcome(graph, outcome, &cycle_basis(graph)),
    };
    let basis = cycle_basis_from_tree(graph, &tree)?;
    verify_outcome(graph, outcome, &basis)
}

/// Whether `a` and `b` are positive multiples of each other.
pub fn positively_parallel(a: &[Rational], b: &[Rational]) -> bool {
    if a.len() != b.len() || a.iter().all(Zero::is_zero) || b.iter().all(Zero::is_zero) {
        return false;
    }
    let k = (0..a.len()).find(|&k| !a[k].is_zero());
    let Some(k) = k else { return false };
    let ratio = &b[k] / &a[k];
    ratio.is_positive() && a.iter().zip(b).all(|(x, y)| x * &ratio == *y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> Rational {
        Rational::from_integer(x.into())
    }

    fn edge(i: usize, j: usize, d: &[i64]) -> DirectedEdge {
        DirectedEdge { i, j, direction: d.iter().map(|&x| q(x)).collect() }
    }

    fn square() -> EdgeGraph {
        // vertices of the unit square, counter-clockwise
        EdgeGraph::new(
            4,
            2,
            vec![edge(0, 1, &[1, 0]), edge(1, 2, &[0, 1]), edge(2, 3, &[-1, 0]), edge(0, 3, &[0, 1])],
        )
        .unwrap()
    }

    #[test]
    fn tree_has_empty_basis() {
        let g = EdgeGraph::new(3, 1, vec![edge(0, 1, &[1]), edge(1, 2, &[1])]).unwrap();
        let b = cycle_basis(&g);
        assert!(b.flows.is_empty());
        let sys = build_system(&g, &b.flows).unwrap();
        assert!(sys.rows.is_empty());
        assert!(check_graph(&g).unwrap().is_embedding());
    }

    #[test]
    fn square_cycle() {
        let g = square();
        let b = cycle_basis(&g);
        assert_eq!(b.flows.len(), 1);
        assert!(b.flows[0].is_conserved(&g));
        assert!(b.flows[0].values.iter().all(|v| v.abs() == q(1)));
        let sys = build_system(&g, &b.flows).unwrap();
        assert_eq!((sys.rows.len(), sys.ncols), (2, 4));
        let ones = vec![q(1); 4];
        for row in &sys.rows {
            assert!(row.iter().zip(&ones).fold(q(0), |a, (x, y)| a + x * y).is_zero());
        }
        match check_graph(&g).unwrap() {
            RegularityOutcome::Embedding { scalars, coordinates } => {
                assert!(verify_embedding(&g, &scalars, &coordinates));
                assert_eq!(coordinates[0], vec![q(0), q(0)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inconsistent_triangle_is_not_regular() {
        // three directions that cannot close up with positive scalars
        let g = EdgeGraph::new(3, 2, vec![edge(0, 1, &[1, 0]), edge(1, 2, &[0, 1]), edge(0, 2, &[-1, -1])]).unwrap();
        match check_graph(&g).unwrap() {
            out @ RegularityOutcome::NonRegular { .. } => {
                assert!(replay(&g, &out).unwrap());
                if let RegularityOutcome::NonRegular { witness_edges, .. } = out {
                    assert_eq!(witness_edges, vec![0, 1, 2]);
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn embedding_perturbation_breaks_incident_edges() {
        let g = square();
        let RegularityOutcome::Embedding { scalars, mut coordinates } = check_graph(&g).unwrap() else {
            panic!()
        };
        let shift = vec![q(5), q(-2)];
        let moved: Vec<Vec<Rational>> =
            coordinates.iter().map(|c| c.iter().zip(&shift).map(|(x, y)| x + y).collect()).collect();
        assert!(verify_embedding(&g, &scalars, &moved));
        coordinates[2][0] += q(1);
        let broken: Vec<usize> = g
            .edges
            .iter()
            .enumerate()
            .filter(|(k, e)| {
                (0..2).any(|t| &coordinates[e.j][t] - &coordinates[e.i][t] != &scalars[*k] * &e.direction[t])
            })
            .map(|(k, _)| k)
            .collect();
        assert_eq!(broken, vec![1, 2]);
        assert!(!verify_embedding(&g, &scalars, &coordinates));
    }

    #[test]
    fn rejects_cyclic_tree() {
        let g = square();
        assert!(cycle_basis_from_tree(&g, &[0, 1, 2, 3]).is_err());
        assert!(cycle_basis_from_tree(&g, &[0, 1]).is_err());
        assert!(cycle_basis_from_tree(&g, &[1, 2, 3]).is_ok());
    }

    #[test]
    fn parallel_vectors() {
        assert!(positively_parallel(&[q(1), q(2)], &[q(3), q(6)]));
        assert!(!positively_parallel(&[q(1), q(2)], &[q(-1), q(-2)]));
        assert!(!positively_parallel(&[q(0), q(0)], &[q(0), q(0)]));
    }
}
