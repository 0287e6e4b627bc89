//! Dense two-phase tableau simplex with Bland's anti-cycling rule.

use crate::scalar::Scalar;

use super::SolverError;

/// `coeffs · x ≤ rhs`.
#[derive(Debug, Clone)]
pub struct LinearConstraint<S> {
    pub coeffs: Vec<S>,
    pub rhs: S,
}

/// A maximization problem over inequality constraints and per-variable
/// bounds. The default bound is `x ≥ 0`; `(None, None)` makes a variable
/// free.
#[derive(Debug, Clone)]
pub struct LinearProgram<S: Scalar> {
    pub num_vars: usize,
    pub objective: Vec<S>,
    pub constraints: Vec<LinearConstraint<S>>,
    pub bounds: Vec<(Option<S>, Option<S>)>,
}

impl<S: Scalar> LinearProgram<S> {
    /// Problem with all variables non-negative.
    pub fn new(objective: Vec<S>, constraints: Vec<LinearConstraint<S>>) -> Self {
        let n = objective.len();
        LinearProgram {
            num_vars: n,
            objective,
            constraints,
            bounds: vec![(Some(S::zero()), None); n],
        }
    }

    fn validate(&self) -> Result<(), SolverError> {
        if self.objective.len() != self.num_vars {
            return Err(SolverError::MalformedLp(format!(
                "objective has {} coefficients for {} variables",
                self.objective.len(),
                self.num_vars
            )));
        }
        if self.bounds.len() != self.num_vars {
            return Err(SolverError::MalformedLp(format!(
                "bounds list has length {} for {} variables",
                self.bounds.len(),
                self.num_vars
            )));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.num_vars {
                return Err(SolverError::MalformedLp(format!(
                    "constraint {} has {} coefficients for {} variables",
                    i,
                    c.coeffs.len(),
                    self.num_vars
                )));
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|v| !v.is_finite()) {
                return Err(SolverError::MalformedLp(format!(
                    "constraint {i} has non-finite entries"
                )));
            }
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(SolverError::MalformedLp("non-finite objective".into()));
        }
        for (j, (lo, hi)) in self.bounds.iter().enumerate() {
            if let (Some(l), Some(u)) = (lo, hi) {
                if l > u {
                    return Err(SolverError::MalformedLp(format!(
                        "variable {j} has empty bound interval"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct LpSolution<S> {
    pub status: LpStatus,
    /// Objective value at the optimum (zero unless `status` is `Optimal`).
    pub objective: S,
    /// Variable assignment in the original coordinates (empty unless optimal).
    pub x: Vec<S>,
}

/// How an original variable maps to non-negative standard-form columns.
#[derive(Debug, Clone, Copy)]
enum VarMap<S> {
    /// `x = y + shift`.
    Shifted { col: usize, shift: S },
    /// `x = shift - y`.
    Reflected { col: usize, shift: S },
    /// `x = y_pos - y_neg`.
    Split { pos: usize, neg: usize },
}

/// Solve a linear program; returns the status, objective (for `Optimal`)
/// and an attaining assignment.
pub fn solve_lp<S: Scalar>(lp: &LinearProgram<S>) -> Result<LpSolution<S>, SolverError> {
    lp.validate()?;

    // Standard form: maximize c·y subject to A y ≤ b, y ≥ 0.
    let mut maps: Vec<VarMap<S>> = Vec::with_capacity(lp.num_vars);
    let mut ncols = 0usize;
    let mut extra_rows: Vec<(usize, S)> = Vec::new(); // (col, upper) for boxed vars
    for (lo, hi) in &lp.bounds {
        match (lo, hi) {
            (Some(l), None) => {
                maps.push(VarMap::Shifted { col: ncols, shift: *l });
                ncols += 1;
            }
            (Some(l), Some(u)) => {
                maps.push(VarMap::Shifted { col: ncols, shift: *l });
                extra_rows.push((ncols, *u - *l));
                ncols += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap::Reflected { col: ncols, shift: *u });
                ncols += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split {
                    pos: ncols,
                    neg: ncols + 1,
                });
                ncols += 2;
            }
        }
    }

    let mut rows: Vec<(Vec<S>, S)> = Vec::with_capacity(lp.constraints.len() + extra_rows.len());
    for c in &lp.constraints {
        let mut row = vec![S::zero(); ncols];
        let mut rhs = c.rhs;
        for (j, &a) in c.coeffs.iter().enumerate() {
            match maps[j] {
                VarMap::Shifted { col, shift } => {
                    row[col] = row[col] + a;
                    rhs = rhs - a * shift;
                }
                VarMap::Reflected { col, shift } => {
                    row[col] = row[col] - a;
                    rhs = rhs - a * shift;
                }
                VarMap::Split { pos, neg } => {
                    row[pos] = row[pos] + a;
                    row[neg] = row[neg] - a;
                }
            }
        }
        rows.push((row, rhs));
    }
    for (col, ub) in &extra_rows {
        let mut row = vec![S::zero(); ncols];
        row[*col] = S::one();
        rows.push((row, *ub));
    }

    let mut obj = vec![S::zero(); ncols];
    for (j, &c) in lp.objective.iter().enumerate() {
        match maps[j] {
            VarMap::Shifted { col, .. } => obj[col] = obj[col] + c,
            VarMap::Reflected { col, .. } => obj[col] = obj[col] - c,
            VarMap::Split { pos, neg } => {
                obj[pos] = obj[pos] + c;
                obj[neg] = obj[neg] - c;
            }
        }
    }

    let (status, y) = simplex_standard(ncols, &obj, &rows)?;
    if status != LpStatus::Optimal {
        return Ok(LpSolution {
            status,
            objective: S::zero(),
            x: Vec::new(),
        });
    }
    let mut x = vec![S::zero(); lp.num_vars];
    for (j, m) in maps.iter().enumerate() {
        x[j] = match *m {
            VarMap::Shifted { col, shift } => y[col] + shift,
            VarMap::Reflected { col, shift } => shift - y[col],
            VarMap::Split { pos, neg } => y[pos] - y[neg],
        };
    }
    let objective = lp
        .objective
        .iter()
        .zip(&x)
        .fold(S::zero(), |acc, (&c, &v)| acc + c * v);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective,
        x,
    })
}

/// Maximize `c·y` over `{A y ≤ b, y ≥ 0}` with a two-phase dense tableau.
fn simplex_standard<S: Scalar>(
    ncols: usize,
    c: &[S],
    rows: &[(Vec<S>, S)],
) -> Result<(LpStatus, Vec<S>), SolverError> {
    let m = rows.len();
    let tol = S::solver_tol();

    if m == 0 {
        // Only the non-negativity cone: either c ≤ 0 (optimum at 0) or
        // unbounded along any coordinate with positive cost.
        if c.iter().any(|&v| v > tol) {
            return Ok((LpStatus::Unbounded, Vec::new()));
        }
        return Ok((LpStatus::Optimal, vec![S::zero(); ncols]));
    }

    let needs_artificial: Vec<bool> = rows.iter().map(|(_, b)| *b < S::zero()).collect();
    let n_art: usize = needs_artificial.iter().filter(|&&x| x).count();
    let total = ncols + m + n_art; // structural + slack + artificial

    // Tableau: m constraint rows followed by the objective row.
    let mut t = vec![vec![S::zero(); total + 1]; m + 1];
    let mut basis = vec![0usize; m];
    let mut art_index = 0usize;
    for (i, (row, b)) in rows.iter().enumerate() {
        let flip = needs_artificial[i];
        let sign = if flip { -S::one() } else { S::one() };
        for (j, &a) in row.iter().enumerate() {
            t[i][j] = sign * a;
        }
        t[i][ncols + i] = sign; // slack
        t[i][total] = sign * *b;
        if flip {
            let col = ncols + m + art_index;
            t[i][col] = S::one();
            basis[i] = col;
            art_index += 1;
        } else {
            basis[i] = ncols + i;
        }
    }

    if n_art > 0 {
        // Phase 1: maximize -Σ artificials. The bottom row holds z - c for
        // that objective: -Σ over artificial-basic rows for structural and
        // slack columns, zero for the artificial columns themselves.
        for j in 0..=total {
            let mut v = S::zero();
            for (i, _) in rows.iter().enumerate() {
                if needs_artificial[i] {
                    v = v + t[i][j];
                }
            }
            t[m][j] = -v;
        }
        for col in ncols + m..total {
            t[m][col] = S::zero();
        }
        run_simplex(&mut t, &mut basis, total, ncols + m + n_art, tol)?;
        if t[m][total].abs() > tol {
            return Ok((LpStatus::Infeasible, Vec::new()));
        }
        // Drive any artificial variable still basic (at level zero) out of
        // the basis; a row with no usable pivot is redundant and dropped.
        let mut i = 0;
        while i < basis.len() {
            if basis[i] >= ncols + m {
                let pivot_col = (0..ncols + m).find(|&j| t[i][j].abs() > tol);
                match pivot_col {
                    Some(j) => pivot(&mut t, &mut basis, i, j, total),
                    None => {
                        t.remove(i);
                        basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    // Phase 2: install the real objective (as its negation in the bottom
    // row, so optimality is "no negative entries") and price out the basis.
    let m2 = basis.len();
    let obj_row = t.len() - 1;
    for j in 0..=total {
        t[obj_row][j] = S::zero();
    }
    for j in 0..ncols {
        t[obj_row][j] = -c[j];
    }
    for col in ncols + m..total {
        // Artificial columns must never re-enter.
        for row in t.iter_mut() {
            row[col] = S::zero();
        }
    }
    for i in 0..m2 {
        let b = basis[i];
        let coeff = t[obj_row][b];
        if coeff.abs() > S::zero() {
            for j in 0..=total {
                let delta = coeff * t[i][j];
                t[obj_row][j] = t[obj_row][j] - delta;
            }
        }
    }
    let status = run_simplex(&mut t, &mut basis, total, ncols + m, tol)?;
    if status == LpStatus::Unbounded {
        return Ok((LpStatus::Unbounded, Vec::new()));
    }

    let mut y = vec![S::zero(); ncols];
    for (i, &b) in basis.iter().enumerate() {
        if b < ncols {
            y[b] = t[i][total];
        }
    }
    Ok((LpStatus::Optimal, y))
}

/// Bland pivoting loop. Columns `>= col_limit` are ignored as entering
/// candidates. The objective row is the last row of the tableau, stored
/// negated so a negative entry means improvable.
fn run_simplex<S: Scalar>(
    t: &mut Vec<Vec<S>>,
    basis: &mut [usize],
    rhs_col: usize,
    col_limit: usize,
    tol: S,
) -> Result<LpStatus, SolverError> {
    let max_iters = 200_000usize;
    for _ in 0..max_iters {
        let obj_row = t.len() - 1;
        // Bland: entering variable is the smallest-index improvable column.
        let entering = (0..col_limit).find(|&j| t[obj_row][j] < -tol);
        let Some(e) = entering else {
            return Ok(LpStatus::Optimal);
        };
        // Ratio test; ties broken by smallest basic variable index (Bland).
        let mut best = S::infinity();
        for i in 0..obj_row {
            let a = t[i][e];
            if a > tol {
                let ratio = t[i][rhs_col] / a;
                if ratio < best {
                    best = ratio;
                }
            }
        }
        if !best.is_finite() {
            return Ok(LpStatus::Unbounded);
        }
        let mut leave: Option<usize> = None;
        for i in 0..obj_row {
            let a = t[i][e];
            if a > tol && t[i][rhs_col] / a <= best {
                match leave {
                    Some(l) if basis[i] >= basis[l] => {}
                    _ => leave = Some(i),
                }
            }
        }
        let l = leave.expect("finite min ratio has a witness row");
        pivot(t, basis, l, e, rhs_col);
    }
    Err(SolverError::Numeric(
        "simplex iteration limit exceeded".into(),
    ))
}

fn pivot<S: Scalar>(t: &mut [Vec<S>], basis: &mut [usize], row: usize, col: usize, rhs_col: usize) {
    let p = t[row][col];
    for j in 0..=rhs_col {
        t[row][j] = t[row][j] / p;
    }
    t[row][col] = S::one();
    for i in 0..t.len() {
        if i == row {
            continue;
        }
        let f = t[i][col];
        if f.abs() > S::zero() {
            for j in 0..=rhs_col {
                let delta = f * t[row][j];
                t[i][j] = t[i][j] - delta;
            }
            t[i][col] = S::zero();
        }
    }
    basis[row] = col;
}
