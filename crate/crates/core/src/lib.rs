//! Restricted Gröbner fans of ideals in `Q[x1, ..., xn]` and a regularity test
//! for them.
//!
//! The crate is organized bottom-up:
//!
//! * [`poly`] exact multivariate polynomials, matrix term orders, initial terms
//!   and initial forms, and the text grammar for polynomials.
//! * [`groebner`] Buchberger's algorithm, marked reduced Gröbner bases,
//!   initial ideals and homogenization.
//! * [`lp`] an exact rational simplex method (Bland's rule).
//! * [`polyhedra`] polyhedral cones in H-representation, facets, relative
//!   interior points, strict feasibility with Farkas certificates, Newton
//!   polytopes and normal cones.
//! * [`fan`] Gröbner cones, enumeration of the restricted Gröbner fan by
//!   facet flipping, and the extended fan obtained from the homogenized ideal.
//! * [`regularity`] the cycle-flow system whose strict feasibility is
//!   necessary for a fan to be the normal fan of a polyhedron.
//! * [`certificate`] the embedded non-regularity certificate for the ideal
//!   `<acd + a^2c - ab, ad^2 - c, ad^4 + ac>` and its replay.
//! * [`io`] ideal files and JSON documents for fans and regularity outcomes.
//!
//! ```
//! use grobfan::{fan, io, regularity};
//!
//! let file = io::parse_ideal_file("ring x1,x2; ideal x1 + x2 + 1;").unwrap();
//! let graph = fan::enumerate_restricted_fan(&file.ideal, &file.tiebreak_order()).unwrap();
//! assert_eq!(graph.cones.len(), 2);
//! let outcome = regularity::check_regularity(&graph).unwrap();
//! assert!(outcome.is_embedding());
//! ```

pub mod certificate;
pub mod error;
pub mod fan;
pub mod groebner;
pub mod io;
pub mod lp;
pub mod poly;
pub mod polyhedra;
pub mod regularity;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Exact rational numbers used throughout the crate.
pub type Rational = BigRational;
