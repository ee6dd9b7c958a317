//! Exact rational linear programming.
//!
//! A dense two-phase tableau simplex over `BigRational`. Entering variables
//! are chosen by largest reduced cost, falling back to Bland's rule after a
//! long run of degenerate pivots, so it terminates on degenerate problems. Problems in this crate have at most a few hundred rows and
//! columns; pivots only touch the nonzero entries of the pivot row.

use num_traits::{One, Signed, Zero};

use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `maximize <objective, x>` subject to linear constraints. Variables are
/// free unless marked non-negative.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    nonnegative: Vec<bool>,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { point: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<(Vec<Rational>, Rational)> {
        match self {
            LpOutcome::Optimal { point, value } => Some((point, value)),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            nonnegative: vec![false; num_vars],
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn set_nonnegative(&mut self, var: usize) {
        self.nonnegative[var] = true;
    }

    pub fn set_all_nonnegative(&mut self) {
        self.nonnegative.iter_mut().for_each(|b| *b = true);
    }

    pub fn set_objective(&mut self, objective: Vec<Rational>) {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    /// Adds `sum coeffs[k].1 * x[coeffs[k].0] (rel) rhs` from sparse entries.
    pub fn add_sparse(&mut self, coeffs: &[(usize, Rational)], relation: Relation, rhs: Rational) {
        let mut dense = vec![Rational::zero(); self.num_vars];
        for (i, c) in coeffs {
            dense[*i] += c;
        }
        self.add_constraint(dense, relation, rhs);
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

const DEGENERATE_LIMIT: usize = 50;

struct Tableau {
    // rows x (cols + 1); last column is the right-hand side
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
    // first artificial column; columns >= this are artificial
    art_start: usize,
    // structural column ranges per original variable: (positive, negative part)
    var_cols: Vec<(usize, Option<usize>)>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut var_cols = Vec::with_capacity(lp.num_vars);
        let mut next = 0;
        for v in 0..lp.num_vars {
            if lp.nonnegative[v] {
                var_cols.push((next, None));
                next += 1;
            } else {
                var_cols.push((next, Some(next + 1)));
                next += 2;
            }
        }
        let nstruct = next;
        let m = lp.constraints.len();
        let nslack = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();

        // normalized rows with non-negative rhs
        let mut normalized = Vec::with_capacity(m);
        for c in &lp.constraints {
            let flip = c.rhs.is_negative();
            let rel = match (c.relation, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            };
            normalized.push((c, rel, flip));
        }
        let nart = normalized.iter().filter(|(_, rel, _)| *rel != Relation::Le).count();
        let ncols = nstruct + nslack + nart;
        let art_start = nstruct + nslack;

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = nstruct;
        let mut art = art_start;
        for (c, rel, flip) in normalized {
            let mut row = vec![Rational::zero(); ncols + 1];
            for (v, a) in c.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let a = if flip { -a } else { a.clone() };
                let (p, n) = var_cols[v];
                if let Some(n) = n {
                    row[n] = -a.clone();
                }
                row[p] = a;
            }
            row[ncols] = if flip { -c.rhs.clone() } else { c.rhs.clone() };
            if c.relation != Relation::Eq {
                row[slack] = if rel == Relation::Le { Rational::one() } else { -Rational::one() };
                if rel == Relation::Le {
                    basis.push(slack);
                }
                slack += 1;
            }
            if rel != Relation::Le {
                row[art] = Rational::one();
                basis.push(art);
                art += 1;
            }
            rows.push(row);
        }

        // phase 1 objective: maximize -sum(artificials)
        let mut obj = vec![Rational::zero(); ncols + 1];
        for (r, &b) in basis.iter().enumerate() {
            if b >= art_start {
                for (k, x) in rows[r].iter().enumerate() {
                    if !x.is_zero() {
                        obj[k] += x;
                    }
                }
            }
        }
        for o in obj.iter_mut().take(ncols).skip(art_start) {
            *o = Rational::zero();
        }
        Tableau { rows, obj, basis, ncols, art_start, var_cols }
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let piv = self.rows[r][col].clone();
        if !piv.is_one() {
            let inv = piv.recip();
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let nz: Vec<usize> = (0..=self.ncols).filter(|&k| !self.rows[r][k].is_zero()).collect();
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for &k in &nz {
                let d = &f * &prow[k];
                row[k] -= d;
            }
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for &k in &nz {
                let d = &f * &prow[k];
                self.obj[k] -= d;
            }
        }
        self.basis[r] = col;
    }

    /// Simplex on the current objective row: largest reduced cost first,
    /// switching to Bland's rule for the rest of the phase once a run of
    /// degenerate pivots suggests cycling. Returns false if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        let mut degenerate_run = 0;
        let mut bland = false;
        loop {
            let entering = if bland {
                (0..allowed).find(|&j| self.obj[j].is_positive())
            } else {
                (0..allowed).filter(|&j| self.obj[j].is_positive()).fold(None, |best: Option<usize>, j| match best {
                    Some(b) if self.obj[b] >= self.obj[j] => Some(b),
                    _ => Some(j),
                })
            };
            let Some(col) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / &row[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return false,
                Some((r, ratio)) => {
                    if ratio.is_zero() {
                        degenerate_run += 1;
                        if degenerate_run > DEGENERATE_LIMIT {
                            bland = true;
                        }
                    } else {
                        degenerate_run = 0;
                    }
                    self.pivot(r, col);
                }
            }
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        // phase 1
        if self.basis.iter().any(|&b| b >= self.art_start) {
            let bounded = self.optimize(self.ncols);
            debug_assert!(bounded, "phase 1 is bounded");
            if self.obj[self.ncols].is_positive() {
                // value = -obj[rhs] < 0
                return LpOutcome::Infeasible;
            }
            // drive artificials out of the basis, dropping redundant rows
            let mut r = 0;
            while r < self.rows.len() {
                if self.basis[r] >= self.art_start {
                    match (0..self.art_start).find(|&j| !self.rows[r][j].is_zero()) {
                        Some(j) => {
                            self.pivot(r, j);
                            r += 1;
                        }
                        None => {
                            self.rows.swap_remove(r);
                            self.basis.swap_remove(r);
                        }
                    }
                } else {
                    r += 1;
                }
            }
        }

        // phase 2 objective
        let mut cost = vec![Rational::zero(); self.ncols + 1];
        for (v, c) in lp.objective.iter().enumerate() {
            let (p, n) = self.var_cols[v];
            cost[p] = c.clone();
            if let Some(n) = n {
                cost[n] = -c.clone();
            }
        }
        let mut obj = cost.clone();
        for (r, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (k, x) in self.rows[r].iter().enumerate() {
                if !x.is_zero() {
                    obj[k] -= &cost[b] * x;
                }
            }
        }
        self.obj = obj;
        if !self.optimize(self.art_start) {
            return LpOutcome::Unbounded;
        }

        let mut values = vec![Rational::zero(); self.ncols];
        for (r, &b) in self.basis.iter().enumerate() {
            values[b] = self.rows[r][self.ncols].clone();
        }
        let point: Vec<Rational> = self
            .var_cols
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => &values[p] - &values[n],
                None => values[p].clone(),
            })
            .collect();
        let value = point
            .iter()
            .zip(&lp.objective)
            .fold(Rational::zero(), |acc, (x, c)| acc + x * c);
        LpOutcome::Optimal { point, value }
    }
}

// Incremental reduced row echelon form. `width` columns take part in pivot
// selection; any further columns are carried along.
struct Echelon {
    width: usize,
    rows: Vec<(usize, Vec<Rational>)>, // (pivot column, row)
}

impl Echelon {
    fn new(width: usize) -> Self {
        Echelon { width, rows: Vec::new() }
    }

    // Reduces `row` and keeps it when it has a pivot; returns the reduced
    // row when it does not.
    fn insert(&mut self, row: &[Rational]) -> Option<Vec<Rational>> {
        let mut v = row.to_vec();
        for (pc, basis_row) in &self.rows {
            if v[*pc].is_zero() {
                continue;
            }
            let f = v[*pc].clone();
            for (x, b) in v.iter_mut().zip(basis_row) {
                if !b.is_zero() {
                    *x -= &f * b;
                }
            }
        }
        let Some(pc) = v[..self.width].iter().position(|x| !x.is_zero()) else {
            return Some(v);
        };
        let inv = v[pc].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        // keep earlier rows reduced in this column too
        for (_, b) in self.rows.iter_mut() {
            if !b[pc].is_zero() {
                let f = b[pc].clone();
                for (x, y) in b.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push((pc, v));
        None
    }
}

/// Indices of a maximal linearly independent subset of the rows, chosen
/// greedily in order.
pub fn independent_rows(matrix: &[Vec<Rational>]) -> Vec<usize> {
    let Some(width) = matrix.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut ech = Echelon::new(width);
    (0..matrix.len()).filter(|&i| ech.insert(&matrix[i]).is_none()).collect()
}

/// Rank of a rational matrix.
pub fn rank(matrix: &[Vec<Rational>]) -> usize {
    independent_rows(matrix).len()
}

/// A basis of `{x : M x = 0}` for an `m x ncols` matrix.
pub fn nullspace_basis(matrix: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut ech = Echelon::new(ncols);
    for row in matrix {
        ech.insert(row);
    }
    let pivots: Vec<usize> = ech.rows.iter().map(|(pc, _)| *pc).collect();
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut x = vec![Rational::zero(); ncols];
            x[f] = Rational::one();
            for (pc, row) in &ech.rows {
                x[*pc] = -row[f].clone();
            }
            x
        })
        .collect()
}

/// Some solution of `M x = b`, or `None` if there is none.
pub fn solve_linear(matrix: &[Vec<Rational>], b: &[Rational], ncols: usize) -> Option<Vec<Rational>> {
    assert_eq!(matrix.len(), b.len());
    let mut ech = Echelon::new(ncols);
    for (row, rhs) in matrix.iter().zip(b) {
        let mut aug = row.clone();
        aug.push(rhs.clone());
        if let Some(rest) = ech.insert(&aug) {
            if !rest[ncols].is_zero() {
                return None;
            }
        }
    }
    let mut x = vec![Rational::zero(); ncols];
    for (pc, row) in &ech.rows {
        x[*pc] = row[ncols].clone();
    }
    Some(x)
}
