//! Exact polyhedral geometry: cones in H-representation, strict feasibility
//! with Farkas certificates, Newton polytopes and normal cones.

mod cone;
mod feasibility;
mod polytope;

pub use cone::{int_rows, Cone, Membership};
pub use feasibility::{forced_zero_by_columns, lp_feasible_strict, FarkasVector, StrictFeasibility};
pub use polytope::{newton_polytope, normal_cone, Polyhedron};


use crate::error::Result;

/// `c1 ∩ c2`.
pub fn common_refinement(c1: &Cone, c2: &Cone) -> Result<Cone> {
    c1.intersect(c2)
}

/// Intersects each cone with the non-negative orthant and keeps the
/// full-dimensional results.
pub fn refine_with_orthant(cones: &[Cone]) -> Result<Vec<Cone>> {
    let mut out = Vec::new();
    for c in cones {
        let r = c.intersect(&Cone::orthant(c.ambient_dim()))?;
        if r.is_full_dimensional() {
            out.push(r);
        }
    }
    Ok(out)
}

/// Position of `w` relative to `c`.
pub fn contains(c: &Cone, w: &[crate::Rational]) -> Result<Membership> {
    c.contains(w)
}
