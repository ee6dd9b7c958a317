//! Strict feasibility of `A s = 0, s > 0` with Farkas certificates.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::lp::{nullspace_basis, solve_linear, LinearProgram, LpOutcome, Relation};
use crate::Rational;

/// A vector `y` with `y^T A >= 0` and `y^T A != 0`, witnessing that no
/// `s > 0` solves `A s = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FarkasVector(pub Vec<Rational>);

impl FarkasVector {
    /// `y^T A`.
    pub fn combination(&self, a: &[Vec<Rational>], ncols: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); ncols];
        for (y, row) in self.0.iter().zip(a) {
            if y.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o += y * x;
                }
            }
        }
        out
    }

    /// Exact replay of the certificate conditions.
    pub fn certifies(&self, a: &[Vec<Rational>], ncols: usize) -> bool {
        if self.0.len() != a.len() {
            return false;
        }
        let c = self.combination(a, ncols);
        c.iter().all(|x| !x.is_negative()) && c.iter().any(|x| !x.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrictFeasibility {
    /// `A s = 0` with every `s_i >= 1`.
    Feasible { s: Vec<Rational> },
    /// No strictly positive solution. `forced_zero` lists the columns that
    /// vanish on every non-negative solution.
    Infeasible { certificate: FarkasVector, forced_zero: Vec<usize> },
}

impl StrictFeasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, StrictFeasibility::Feasible { .. })
    }
}

/// Decides whether `A s = 0` has a solution with all `s_i > 0`.
///
/// Works in coordinates of a nullspace basis `N` of `A`, so `s = N z`. If
/// `N z >= 1` is feasible the answer is yes. Otherwise a vector
/// `c >= 0, c != 0` with `N^T c = 0` lies in the row space of `A`, which
/// gives the Farkas vector and shows that every column in the support of
/// `c` vanishes on all non-negative solutions. Fixing those columns to zero
/// and repeating until the remaining columns admit `s >= 1` yields exactly
/// the set of forced-zero columns.
pub fn lp_feasible_strict(a: &[Vec<Rational>], ncols: usize) -> StrictFeasibility {
    for row in a {
        assert_eq!(row.len(), ncols, "ragged matrix");
    }
    if ncols == 0 {
        return StrictFeasibility::Feasible { s: vec![] };
    }
    let basis = nullspace_basis(a, ncols);
    let mut forced = vec![false; ncols];
    let mut certificate: Option<FarkasVector> = None;
    loop {
        if let Some(z) = positive_combination(&basis, &forced) {
            let s: Vec<Rational> = (0..ncols)
                .map(|e| basis.iter().zip(&z).fold(Rational::zero(), |acc, (v, zk)| acc + &v[e] * zk))
                .collect();
            return match certificate {
                None => StrictFeasibility::Feasible { s },
                Some(certificate) => StrictFeasibility::Infeasible {
                    certificate,
                    forced_zero: (0..ncols).filter(|&e| forced[e]).collect(),
                },
            };
        }
        let c = orthogonal_nonnegative(&basis, &forced, ncols);
        if certificate.is_none() {
            certificate = Some(row_combination(a, &c, ncols));
        }
        let mut progress = false;
        for e in 0..ncols {
            if !forced[e] && c[e].is_positive() {
                forced[e] = true;
                progress = true;
            }
        }
        assert!(progress, "alternative vector has positive support");
        if forced.iter().all(|&f| f) {
            return StrictFeasibility::Infeasible {
                certificate: certificate.expect("set above"),
                forced_zero: (0..ncols).collect(),
            };
        }
    }
}

// z with (N z)_e >= 1 for free columns and (N z)_e = 0 for forced ones.
fn positive_combination(basis: &[Vec<Rational>], forced: &[bool]) -> Option<Vec<Rational>> {
    let k = basis.len();
    let mut lp = LinearProgram::new(k);
    for (e, &f) in forced.iter().enumerate() {
        let coeffs: Vec<Rational> = basis.iter().map(|v| v[e].clone()).collect();
        if f {
            lp.add_constraint(coeffs, Relation::Eq, Rational::zero());
        } else {
            lp.add_constraint(coeffs, Relation::Ge, Rational::one());
        }
    }
    lp.solve().optimal().map(|(z, _)| z)
}

// c with N^T c = 0, c >= 0 and sum 1 on free columns, c arbitrary on forced
// ones.
fn orthogonal_nonnegative(basis: &[Vec<Rational>], forced: &[bool], ncols: usize) -> Vec<Rational> {
    let mut lp = LinearProgram::new(ncols);
    for (e, &f) in forced.iter().enumerate() {
        if !f {
            lp.set_nonnegative(e);
        }
    }
    for v in basis {
        lp.add_constraint(v.clone(), Relation::Eq, Rational::zero());
    }
    let total: Vec<Rational> =
        forced.iter().map(|&f| if f { Rational::zero() } else { Rational::one() }).collect();
    lp.add_constraint(total, Relation::Eq, Rational::one());
    match lp.solve() {
        LpOutcome::Optimal { point, .. } => point,
        other => panic!("Farkas alternative violated: {other:?}"),
    }
}

// y with y^T A = c for c in the row space of A.
fn row_combination(a: &[Vec<Rational>], c: &[Rational], ncols: usize) -> FarkasVector {
    let transposed: Vec<Vec<Rational>> = (0..ncols).map(|e| a.iter().map(|row| row[e].clone()).collect()).collect();
    let y = solve_linear(&transposed, c, a.len()).expect("c is orthogonal to the nullspace");
    FarkasVector(y)
}

/// Per-column oracle for the forced-zero set: one LP `max s_e` over
/// `A s = 0, s >= 0, sum s <= 1` for each column.
pub fn forced_zero_by_columns(a: &[Vec<Rational>], ncols: usize) -> Vec<usize> {
    (0..ncols)
        .filter(|&e| {
            let mut lp = LinearProgram::new(ncols);
            lp.set_all_nonnegative();
            let mut obj = vec![Rational::zero(); ncols];
            obj[e] = Rational::one();
            lp.set_objective(obj);
            for row in a {
                lp.add_constraint(row.clone(), Relation::Eq, Rational::zero());
            }
            lp.add_constraint(vec![Rational::one(); ncols], Relation::Le, Rational::one());
            let (_, v) = lp.solve().optimal().expect("bounded, feasible at 0");
            v.is_zero()
        })
        .collect()
}
