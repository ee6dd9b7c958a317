//! mdbook cannot run listings that depend on workspace crates, so each chapter
//! is included here as module docs and `cargo test --doc` checks them.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod polynomials {}
#[doc = include_str!("../../../book/src/groebner.md")]
pub mod groebner {}
#[doc = include_str!("../../../book/src/cones.md")]
pub mod cones {}
#[doc = include_str!("../../../book/src/enumeration.md")]
pub mod enumeration {}
#[doc = include_str!("../../../book/src/regularity.md")]
pub mod regularity {}
#[doc = include_str!("../../../book/src/nonregular.md")]
pub mod nonregular {}
#[doc = include_str!("../../../book/src/extended.md")]
pub mod extended {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
