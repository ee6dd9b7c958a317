#![allow(dead_code)]

use grobfan::fan::{standard_monomial_sum, FanGraph};
use grobfan::groebner::Ideal;
use grobfan::poly::{parse_polynomial, Polynomial, Ring};
use grobfan::regularity::{positively_parallel, EdgeGraph, RegularityOutcome};
use grobfan::{BigInt, Rational};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn ring(vars: &[&str]) -> Ring {
    Ring::new(vars.iter().map(|s| s.to_string()).collect()).unwrap()
}

pub fn ideal(vars: &[&str], gens: &[&str]) -> Ideal {
    let r = ring(vars);
    Ideal::new(gens.iter().map(|g| parse_polynomial(&r, g).unwrap()).collect()).unwrap()
}

pub fn q(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(x.into())).collect()
}

pub fn to_q(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::from_integer(0.into()), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// A uniformly shuffled Kruskal spanning forest.
pub fn random_tree<R: Rng>(graph: &EdgeGraph, rng: &mut R) -> Vec<usize> {
    let mut order: Vec<usize> = (0..graph.edges.len()).collect();
    order.shuffle(rng);
    let mut parent: Vec<usize> = (0..graph.vertices).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            v = p[v];
        }
        v
    }
    let mut tree = Vec::new();
    for k in order {
        let (a, b) = (find(&mut parent, graph.edges[k].i), find(&mut parent, graph.edges[k].j));
        if a != b {
            parent[a] = b;
            tree.push(k);
        }
    }
    tree
}

/// A polynomial with random small coefficients on the given monomials.
pub fn random_polynomial<R: Rng>(n: usize, exps: &[Vec<u32>], rng: &mut R) -> Polynomial {
    Polynomial::from_pairs(
        n,
        exps.iter().map(|e| {
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-3i64..=3);
            }
            (Rational::from_integer(c.into()), e.clone())
        }),
    )
}

/// `<x^a + r1, y^b + r2>` with `deg r1 < a`, `deg r2 < b`: the leading terms
/// for total degree are pure powers, so the ideal is zero-dimensional.
pub fn random_zero_dimensional<R: Rng>(rng: &mut R) -> Ideal {
    let a = rng.gen_range(2u32..=3);
    let b = rng.gen_range(2u32..=3);
    let lower = |d: u32, rng: &mut R| -> Vec<Vec<u32>> {
        let all: Vec<Vec<u32>> = (0..d).flat_map(|t| (0..=t).map(move |i| vec![i, t - i])).collect();
        let k = rng.gen_range(1..=2.min(all.len()));
        all.choose_multiple(rng, k).cloned().collect()
    };
    let mut e1 = vec![vec![a, 0]];
    e1.extend(lower(a, rng));
    let mut e2 = vec![vec![0, b]];
    e2.extend(lower(b, rng));
    Ideal::new(vec![random_polynomial(2, &e1, rng), random_polynomial(2, &e2, rng)]).unwrap()
}

/// A homogeneous polynomial in three variables with 2 to 4 terms.
pub fn random_homogeneous<R: Rng>(rng: &mut R) -> Polynomial {
    let d = rng.gen_range(2u32..=3);
    let all: Vec<Vec<u32>> = (0..=d).flat_map(|i| (0..=d - i).map(move |j| vec![i, j, d - i - j])).collect();
    let k = rng.gen_range(2..=4);
    let exps: Vec<Vec<u32>> = all.choose_multiple(rng, k).cloned().collect();
    random_polynomial(3, &exps, rng)
}

/// Checks an embedding of a zero-dimensional ideal's fan against the vectors
/// `v = -sum of standard monomial exponents` of each cone: along every edge
/// `v_j - v_i` is a positive multiple of the direction and of the embedding's
/// difference, and each representative is maximized at its own `v`.
pub fn zero_dimensional_oracle(graph: &FanGraph, outcome: &RegularityOutcome) -> Result<(), String> {
    let RegularityOutcome::Embedding { coordinates, .. } = outcome else {
        return Err("expected an embedding".into());
    };
    let vs: Vec<Vec<Rational>> = graph
        .cones
        .iter()
        .map(|c| standard_monomial_sum(&c.key).map(|v| to_q(&v)).ok_or("infinitely many standard monomials"))
        .collect::<Result<_, _>>()?;
    for e in &graph.edges {
        let dv = sub(&vs[e.j], &vs[e.i]);
        let dc = sub(&coordinates[e.j], &coordinates[e.i]);
        if !positively_parallel(&to_q(&e.direction), &dv) {
            return Err(format!("edge ({}, {}): v difference not along the direction", e.i, e.j));
        }
        if !positively_parallel(&dv, &dc) {
            return Err(format!("edge ({}, {}): embedding difference not along the v difference", e.i, e.j));
        }
    }
    for (i, c) in graph.cones.iter().enumerate() {
        let w = to_q(&c.representative);
        let own = dot(&w, &vs[i]);
        if vs.iter().enumerate().any(|(k, v)| k != i && dot(&w, v) >= own) {
            return Err(format!("representative of cone {i} is not maximized at its own vertex"));
        }
    }
    Ok(())
}
