//! Ideal files and JSON documents.
//!
//! An ideal file is a sequence of `;`-terminated statements, with `#`
//! starting a comment that runs to the end of the line:
//!
//! ```text
//! ring a,b,c,d;
//! ideal a*c*d + a^2*c - a*b, a*d^2 - c, a*d^4 + a*c;
//! tiebreak lex;   # optional, `lex` (default) or `grevlex`
//! ```
//!
//! Documents carry every rational number as a `"p/q"` string (or `"p"` for
//! integers) so that values survive serialization exactly.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{ConeFacet, FanEdge, FanGraph, GroebnerCone};
use crate::groebner::{Ideal, MarkedPolynomial, MarkedReducedGB};
use crate::poly::parse::{is_identifier, parse_polynomial_at};
use crate::poly::{format_polynomial, parse_polynomial, Exponent, Ring, TermOrder, Tiebreak};
use crate::polyhedra::{Cone, FarkasVector, Membership};
use crate::regularity::{DirectedEdge, EdgeGraph, RegularityOutcome};
use crate::Rational;

/// A parsed ideal file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealFile {
    pub ring: Ring,
    pub ideal: Ideal,
    pub tiebreak: Tiebreak,
}

impl IdealFile {
    pub fn tiebreak_order(&self) -> TermOrder {
        TermOrder::tiebreak_only(self.ring.nvars(), self.tiebreak)
    }

    /// Generators in the file's variable names.
    pub fn generator_strings(&self) -> Vec<String> {
        self.ideal.generators().iter().map(|g| format_polynomial(&self.ring, g)).collect()
    }

    pub fn to_text(&self) -> String {
        format!(
            "ring {};\nideal {};\ntiebreak {};\n",
            self.ring.vars().join(","),
            self.generator_strings().join(", "),
            self.tiebreak.name()
        )
    }
}

fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

// Splits on `sep`, returning each piece with its byte offset.
fn split_at_char(text: &str, base: usize, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (k, c) in text.char_indices() {
        if c == sep {
            out.push((base + start, &text[start..k]));
            start = k + c.len_utf8();
        }
    }
    out.push((base + start, &text[start..]));
    out
}

fn trimmed(pos: usize, s: &str) -> (usize, &str) {
    let lead = s.len() - s.trim_start().len();
    (pos + lead, s.trim())
}

/// Parses an ideal file. Errors carry the byte offset of the problem.
pub fn parse_ideal_file(text: &str) -> Result<IdealFile> {
    // blank out comments, keeping offsets
    let mut clean = String::with_capacity(text.len());
    let mut in_comment = false;
    for c in text.chars() {
        match c {
            '#' => in_comment = true,
            '\n' => in_comment = false,
            _ => {}
        }
        if in_comment {
            clean.extend(std::iter::repeat(' ').take(c.len_utf8()));
        } else {
            clean.push(c);
        }
    }
    let pieces = split_at_char(&clean, 0, ';');
    let (last_pos, last) = pieces.last().copied().expect("split yields at least one piece");
    if !last.trim().is_empty() {
        let (p, _) = trimmed(last_pos, last);
        return Err(parse_err(p, "statement is missing its terminating ';'"));
    }
    let mut ring: Option<Ring> = None;
    let mut gens: Option<Vec<crate::poly::Polynomial>> = None;
    let mut tiebreak: Option<Tiebreak> = None;
    for &(pos, stmt) in &pieces[..pieces.len() - 1] {
        let (pos, stmt) = trimmed(pos, stmt);
        if stmt.is_empty() {
            continue;
        }
        let kw_len = stmt.find(char::is_whitespace).unwrap_or(stmt.len());
        let (kw, rest) = stmt.split_at(kw_len);
        let rest_pos = pos + kw_len;
        match kw {
            "ring" => {
                if ring.is_some() {
                    return Err(parse_err(pos, "duplicate ring declaration"));
                }
                let mut vars = Vec::new();
                for (p, name) in split_at_char(rest, rest_pos, ',') {
                    let (p, name) = trimmed(p, name);
                    if !is_identifier(name) {
                        return Err(parse_err(p, format!("invalid variable name {name:?}")));
                    }
                    if vars.iter().any(|v| v == name) {
                        return Err(parse_err(p, format!("duplicate variable {name:?}")));
                    }
                    vars.push(name.to_string());
                }
                ring = Some(Ring::new(vars).map_err(|e| match e {
                    Error::Parse { msg, .. } => parse_err(pos, msg),
                    other => other,
                })?);
            }
            "ideal" => {
                let r = ring.as_ref().ok_or_else(|| parse_err(pos, "ideal before ring declaration"))?;
                if gens.is_some() {
                    return Err(parse_err(pos, "duplicate ideal statement"));
                }
                let mut list = Vec::new();
                for (p, g) in split_at_char(rest, rest_pos, ',') {
                    let (p, g) = trimmed(p, g);
                    if g.is_empty() {
                        return Err(parse_err(p, "empty generator"));
                    }
                    let f = parse_polynomial_at(r, g, p)?;
                    if f.is_zero() {
                        return Err(parse_err(p, "zero generator"));
                    }
                    list.push(f);
                }
                gens = Some(list);
            }
            "tiebreak" => {
                let (p, name) = trimmed(rest_pos, rest);
                if tiebreak.is_some() {
                    return Err(parse_err(pos, "duplicate tiebreak statement"));
                }
                tiebreak = Some(Tiebreak::parse(name).ok_or_else(|| parse_err(p, format!("unknown tiebreak {name:?}")))?);
            }
            other => return Err(parse_err(pos, format!("unknown statement {other:?}"))),
        }
    }
    let ring = ring.ok_or_else(|| parse_err(0, "missing ring declaration"))?;
    let gens = gens.ok_or_else(|| parse_err(text.len(), "missing ideal statement"))?;
    Ok(IdealFile { ring, ideal: Ideal::new(gens)?, tiebreak: tiebreak.unwrap_or(Tiebreak::Lex) })
}

/// Parses just the ideal of an ideal file.
pub fn parse_ideal(text: &str) -> Result<Ideal> {
    Ok(parse_ideal_file(text)?.ideal)
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn rational_to_string(x: &Rational) -> String {
    x.to_string()
}

pub fn rational_from_str(s: &str) -> Result<Rational> {
    Rational::from_str(s).map_err(|_| Error::Document(format!("not a rational number: {s:?}")))
}

fn int_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn rat_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational_to_string).collect()
}

fn parse_ints(v: &[String]) -> Result<Vec<BigInt>> {
    v.iter()
        .map(|s| {
            let q = rational_from_str(s)?;
            if q.is_integer() {
                Ok(q.to_integer())
            } else {
                Err(Error::Document(format!("expected an integer, found {s:?}")))
            }
        })
        .collect()
}

fn parse_rats(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| rational_from_str(s)).collect()
}

pub const FAN_FORMAT: &str = "grobfan-fan/1";
pub const REGULARITY_FORMAT: &str = "grobfan-regularity/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisElementDoc {
    pub mark: Vec<u32>,
    pub polynomial: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetDoc {
    pub normal: Vec<String>,
    pub point: Vec<String>,
    pub neighbor: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeDoc {
    pub id: usize,
    pub basis: Vec<BasisElementDoc>,
    pub representative: Vec<String>,
    pub facets: Vec<FacetDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub i: usize,
    pub j: usize,
    pub direction: Vec<String>,
    pub facet_point: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanMetadata {
    pub cones: usize,
    pub edges: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// A fan graph with enough context to rebuild it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDocument {
    pub format: String,
    /// `"restricted"` or `"extended"`.
    pub kind: String,
    pub ring: Vec<String>,
    pub ideal: Vec<String>,
    pub tiebreak: String,
    /// Variables of the bases: `ring`, plus the homogenizing variable for an
    /// extended fan.
    pub basis_ring: Vec<String>,
    pub cones: Vec<ConeDoc>,
    pub edges: Vec<EdgeDoc>,
    pub metadata: FanMetadata,
}

impl FanDocument {
    pub fn new(file: &IdealFile, kind: &str, graph: &FanGraph) -> Result<Self> {
        let basis_ring = match graph.cones.first() {
            Some(c) if c.key.nvars() == file.ring.nvars() + 1 => file.ring.extended(&file.ring.fresh_name())?,
            _ => file.ring.clone(),
        };
        let cones = graph
            .cones
            .iter()
            .enumerate()
            .map(|(id, c)| ConeDoc {
                id,
                basis: c
                    .key
                    .elements()
                    .iter()
                    .map(|g| BasisElementDoc {
                        mark: g.mark.entries().to_vec(),
                        polynomial: format_polynomial(&basis_ring, &g.poly),
                    })
                    .collect(),
                representative: int_strings(&c.representative),
                facets: c
                    .facets
                    .iter()
                    .map(|f| FacetDoc { normal: int_strings(&f.normal), point: int_strings(&f.point), neighbor: f.neighbor })
                    .collect(),
            })
            .collect();
        let edges = graph
            .edges
            .iter()
            .map(|e| EdgeDoc { i: e.i, j: e.j, direction: int_strings(&e.direction), facet_point: int_strings(&e.facet_point) })
            .collect();
        Ok(FanDocument {
            format: FAN_FORMAT.into(),
            kind: kind.into(),
            ring: file.ring.vars().to_vec(),
            ideal: file.generator_strings(),
            tiebreak: file.tiebreak.name().into(),
            basis_ring: basis_ring.vars().to_vec(),
            cones,
            edges,
            metadata: FanMetadata { cones: graph.cones.len(), edges: graph.edges.len(), elapsed_ms: None },
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: FanDocument = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    fn validate(&self) -> Result<()> {
        if self.format != FAN_FORMAT {
            return Err(Error::Document(format!("unknown format {:?}", self.format)));
        }
        if self.metadata.cones != self.cones.len() || self.metadata.edges != self.edges.len() {
            return Err(Error::Document("counts do not match contents".into()));
        }
        let n = self.ring.len();
        for (k, c) in self.cones.iter().enumerate() {
            if c.id != k {
                return Err(Error::Document(format!("cone {k} has id {}", c.id)));
            }
            if c.representative.len() != n || c.facets.iter().any(|f| f.normal.len() != n || f.point.len() != n) {
                return Err(Error::Document(format!("cone {k} has vectors of the wrong length")));
            }
            if c.facets.iter().any(|f| f.neighbor.is_some_and(|j| j >= self.cones.len())) {
                return Err(Error::Document(format!("cone {k} refers to a missing neighbor")));
            }
        }
        for e in &self.edges {
            if e.i >= e.j || e.j >= self.cones.len() || e.direction.len() != n || e.facet_point.len() != n {
                return Err(Error::Document(format!("malformed edge ({}, {})", e.i, e.j)));
            }
        }
        Ok(())
    }

    /// The direction-labelled graph, without re-parsing the bases.
    pub fn edge_graph(&self) -> Result<EdgeGraph> {
        let edges = self
            .edges
            .iter()
            .map(|e| Ok(DirectedEdge { i: e.i, j: e.j, direction: parse_rats(&e.direction)? }))
            .collect::<Result<Vec<_>>>()?;
        EdgeGraph::new(self.cones.len(), self.ring.len(), edges)
    }

    /// Rebuilds the fan graph; cones are recovered from their facet normals.
    pub fn to_fan_graph(&self) -> Result<FanGraph> {
        let ring = Ring::new(self.basis_ring.clone())?;
        let n = self.ring.len();
        let mut cones = Vec::with_capacity(self.cones.len());
        for c in &self.cones {
            let elements = c
                .basis
                .iter()
                .map(|b| {
                    Ok(MarkedPolynomial { mark: Exponent::new(b.mark.clone()), poly: parse_polynomial(&ring, &b.polynomial)? })
                })
                .collect::<Result<Vec<_>>>()?;
            let key = MarkedReducedGB::from_marked(ring.nvars(), elements)?;
            let facets = c
                .facets
                .iter()
                .map(|f| Ok(ConeFacet { normal: parse_ints(&f.normal)?, point: parse_ints(&f.point)?, neighbor: f.neighbor }))
                .collect::<Result<Vec<_>>>()?;
            let cone = Cone::new(n, vec![], facets.iter().map(|f| f.normal.clone()).collect())?;
            cones.push(GroebnerCone { key, cone, representative: parse_ints(&c.representative)?, facets });
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Ok(FanEdge { i: e.i, j: e.j, direction: parse_ints(&e.direction)?, facet_point: parse_ints(&e.facet_point)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(FanGraph { nvars: n, cones, edges })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub edge: usize,
    pub i: usize,
    pub j: usize,
}

/// The outcome of the regularity test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularityDocument {
    pub format: String,
    /// `"embedding"` or `"non-regular"`.
    pub outcome: String,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalars: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_edges: Option<Vec<WitnessDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spanning_tree: Option<Vec<usize>>,
}

impl RegularityDocument {
    pub fn new(graph: &EdgeGraph, outcome: &RegularityOutcome) -> Self {
        let mut doc = RegularityDocument {
            format: REGULARITY_FORMAT.into(),
            outcome: String::new(),
            verdict: outcome.verdict().into(),
            scalars: None,
            coordinates: None,
            certificate: None,
            witness_edges: None,
            spanning_tree: None,
        };
        match outcome {
            RegularityOutcome::Embedding { scalars, coordinates } => {
                doc.outcome = "embedding".into();
                doc.scalars = Some(rat_strings(scalars));
                doc.coordinates = Some(coordinates.iter().map(|c| rat_strings(c)).collect());
            }
            RegularityOutcome::NonRegular { certificate, witness_edges, spanning_tree } => {
                doc.outcome = "non-regular".into();
                doc.certificate = Some(rat_strings(&certificate.0));
                doc.witness_edges = Some(
                    witness_edges
                        .iter()
                        .map(|&k| WitnessDoc { edge: k, i: graph.edges[k].i, j: graph.edges[k].j })
                        .collect(),
                );
                doc.spanning_tree = Some(spanning_tree.clone());
            }
        }
        doc
    }

    pub fn to_outcome(&self) -> Result<RegularityOutcome> {
        let missing = |what: &str| Error::Document(format!("missing field {what:?}"));
        match self.outcome.as_str() {
            "embedding" => Ok(RegularityOutcome::Embedding {
                scalars: parse_rats(self.scalars.as_ref().ok_or_else(|| missing("scalars"))?)?,
                coordinates: self
                    .coordinates
                    .as_ref()
                    .ok_or_else(|| missing("coordinates"))?
                    .iter()
                    .map(|c| parse_rats(c))
                    .collect::<Result<_>>()?,
            }),
            "non-regular" => Ok(RegularityOutcome::NonRegular {
                certificate: FarkasVector(parse_rats(self.certificate.as_ref().ok_or_else(|| missing("certificate"))?)?),
                witness_edges: self.witness_edges.as_ref().ok_or_else(|| missing("witness_edges"))?.iter().map(|w| w.edge).collect(),
                spanning_tree: self.spanning_tree.clone().ok_or_else(|| missing("spanning_tree"))?,
            }),
            other => Err(Error::Document(format!("unknown outcome {other:?}"))),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: RegularityDocument = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        if doc.format != REGULARITY_FORMAT {
            return Err(Error::Document(format!("unknown format {:?}", doc.format)));
        }
        Ok(doc)
    }
}

/// The cone selected by a weight vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyDocument {
    pub ring: Vec<String>,
    pub weight: Vec<String>,
    pub tiebreak: String,
    pub basis: Vec<BasisElementDoc>,
    /// `"interior"` or `"boundary"`.
    pub membership: String,
    pub facets: Vec<Vec<String>>,
    /// Facet normals vanishing at the weight.
    pub tight_facets: Vec<Vec<String>>,
}

impl ClassifyDocument {
    pub fn new(file: &IdealFile, weight: &[BigInt], key: &MarkedReducedGB, cone: &Cone) -> Result<Self> {
        let w: Vec<Rational> = weight.iter().map(|x| Rational::from_integer(x.clone())).collect();
        let membership = match cone.contains(&w)? {
            Membership::Interior => "interior",
            Membership::Boundary => "boundary",
            Membership::Outside => "outside",
        };
        Ok(ClassifyDocument {
            ring: file.ring.vars().to_vec(),
            weight: int_strings(weight),
            tiebreak: file.tiebreak.name().into(),
            basis: key
                .elements()
                .iter()
                .map(|g| BasisElementDoc { mark: g.mark.entries().to_vec(), polynomial: format_polynomial(&file.ring, &g.poly) })
                .collect(),
            membership: membership.into(),
            facets: cone.facets()?.iter().map(|f| int_strings(f)).collect(),
            tight_facets: cone.tight_facets(&w)?.iter().map(|f| int_strings(f)).collect(),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

/// Parses a comma-separated list of integers such as `10,1,2,6`.
pub fn parse_weight(text: &str) -> Result<Vec<BigInt>> {
    let mut out = Vec::new();
    for (p, part) in split_at_char(text, 0, ',') {
        let (p, part) = trimmed(p, part);
        out.push(BigInt::from_str(part).map_err(|_| parse_err(p, format!("not an integer: {part:?}")))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::enumerate_restricted_fan;

    #[test]
    fn parses_example_files() {
        let f = parse_ideal_file("ring a,b,c,d; ideal a*c*d + a^2*c - a*b, a*d^2 - c, a*d^4 + a*c;").unwrap();
        assert_eq!(f.ring.vars(), ["a", "b", "c", "d"]);
        assert_eq!(f.ideal.generators().len(), 3);
        assert_eq!(f.tiebreak, Tiebreak::Lex);
        let g = parse_ideal_file("# linear\nring x1,x2;\nideal x1-1, x2-1; # two lines\ntiebreak grevlex;\n").unwrap();
        assert_eq!(g.tiebreak, Tiebreak::RevlexGraded);
        assert_eq!(g.generator_strings(), vec!["x1 - 1", "x2 - 1"]);
        assert_eq!(parse_ideal_file(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn errors() {
        let pos = |text: &str| match parse_ideal_file(text) {
            Err(Error::Parse { pos, .. }) => pos,
            other => panic!("{text}: {other:?}"),
        };
        assert_eq!(pos("ring x; ideal 0;"), 14);
        assert_eq!(pos("ring x,y,x; ideal x;"), 9);
        assert_eq!(pos("ring x; ideal x + z;"), 18);
        assert_eq!(pos("ideal x;"), 0);
        assert_eq!(pos("ring x; ideal x"), 8);
        assert_eq!(pos("ring x; ideal x; tiebreak foo;"), 26);
        assert_eq!(pos("ring x; ideal x, ;"), 16);
        assert_eq!(pos("ring x; frobnicate;"), 8);
        assert_eq!(pos("ring x;"), 7);
    }

    #[test]
    fn weights() {
        assert_eq!(parse_weight("10, 1,2,6").unwrap(), vec![BigInt::from(10), 1.into(), 2.into(), 6.into()]);
        assert!(matches!(parse_weight("1,x"), Err(Error::Parse { pos: 2, .. })));
    }

    #[test]
    fn fan_document_round_trip() {
        let f = parse_ideal_file("ring x,y; ideal x^2 - y, y^2 - x;").unwrap();
        let g = enumerate_restricted_fan(&f.ideal, &f.tiebreak_order()).unwrap();
        let doc = FanDocument::new(&f, "restricted", &g).unwrap();
        let text = doc.to_json();
        let back = FanDocument::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        let rebuilt = back.to_fan_graph().unwrap();
        assert_eq!(rebuilt.cones.len(), g.cones.len());
        for (a, b) in rebuilt.cones.iter().zip(&g.cones) {
            assert_eq!(a.key, b.key);
            assert!(a.cone.same_set(&b.cone));
        }
        assert_eq!(rebuilt.edges, g.edges);
        assert_eq!(back.edge_graph().unwrap(), EdgeGraph::from(&g));
    }

    #[test]
    fn rejects_inconsistent_documents() {
        let f = parse_ideal_file("ring x,y; ideal x^2 - y, y^2 - x;").unwrap();
        let g = enumerate_restricted_fan(&f.ideal, &f.tiebreak_order()).unwrap();
        let mut doc = FanDocument::new(&f, "restricted", &g).unwrap();
        doc.metadata.edges += 1;
        assert!(FanDocument::from_json(&doc.to_json()).is_err());
        assert!(FanDocument::from_json("{}").is_err());
    }

    #[test]
    fn rationals_as_strings() {
        let x = Rational::new(BigInt::from(-3), BigInt::from(6));
        assert_eq!(rational_to_string(&x), "-1/2");
        assert_eq!(rational_from_str("-1/2").unwrap(), x);
        assert_eq!(rational_to_string(&Rational::from_integer(7.into())), "7");
        assert!(rational_from_str("1.5").is_err());
    }
}
