//! Dense two-phase tableau simplex for small equality-constrained LPs.
//!
//! Only used for exact small-scale `l_1` minimization, so the tableau is
//! kept dense and pivoting uses Bland's rule to rule out cycling.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-10;
const FEAS_EPS: f64 = 1e-8;
const MAX_PIVOTS: usize = 20_000;

pub(crate) struct LpSolution {
    pub objective: f64,
    pub x: Vec<f64>,
}

/// Minimize `c^T x` subject to `A x = b`, `x >= 0`.
///
/// Returns `Ok(None)` when the constraints are infeasible.
pub(crate) fn solve_min_cost_equality(
    a: &[Vec<f64>],
    b: &[f64],
    c: &[f64],
) -> Result<Option<LpSolution>> {
    let m = a.len();
    if m == 0 {
        return Ok(Some(LpSolution {
            objective: 0.0,
            x: vec![0.0; c.len()],
        }));
    }
    let n = a[0].len();
    assert_eq!(b.len(), m);
    assert_eq!(c.len(), n);

    // Tableau: m constraint rows over n structural + m artificial columns,
    // plus rhs. Rows are sign-flipped so rhs >= 0.
    let total = n + m;
    let mut t = vec![vec![0.0f64; total + 1]; m];
    for (i, row) in a.iter().enumerate() {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for (j, &v) in row.iter().enumerate() {
            t[i][j] = flip * v;
        }
        t[i][n + i] = 1.0;
        t[i][total] = flip * b[i];
    }
    let mut basis: Vec<usize> = (n..total).collect();

    // Phase 1: minimize the artificial sum.
    let mut cost = vec![0.0f64; total + 1];
    for j in n..total {
        cost[j] = 1.0;
    }
    reduce_cost_row(&mut cost, &t, &basis);
    run_simplex(&mut t, &mut cost, &mut basis, total)?;
    if -cost[total] > FEAS_EPS {
        return Ok(None);
    }
    // Pivot remaining artificials out of the basis where a structural
    // column allows it; rows that cannot pivot are redundant constraints.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t[i][j].abs() > PIVOT_EPS) {
                pivot(&mut t, &mut cost, &mut basis, i, j);
            }
        }
    }

    // Phase 2: original objective over structural columns only.
    let mut cost = vec![0.0f64; total + 1];
    cost[..n].copy_from_slice(c);
    reduce_cost_row(&mut cost, &t, &basis);
    run_simplex_restricted(&mut t, &mut cost, &mut basis, n)?;

    let mut x = vec![0.0; n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[i][total];
        }
    }
    Ok(Some(LpSolution {
        objective: -cost[total],
        x,
    }))
}

fn reduce_cost_row(cost: &mut [f64], t: &[Vec<f64>], basis: &[usize]) {
    for (i, &j) in basis.iter().enumerate() {
        let factor = cost[j];
        if factor != 0.0 {
            for (ck, tk) in cost.iter_mut().zip(&t[i]) {
                *ck -= factor * tk;
            }
        }
    }
}

fn run_simplex(
    t: &mut [Vec<f64>],
    cost: &mut [f64],
    basis: &mut [usize],
    ncols: usize,
) -> Result<()> {
    run_simplex_restricted(t, cost, basis, ncols)
}

/// Bland's rule over the first `ncols` columns.
fn run_simplex_restricted(
    t: &mut [Vec<f64>],
    cost: &mut [f64],
    basis: &mut [usize],
    ncols: usize,
) -> Result<()> {
    let rhs = t[0].len() - 1;
    for _ in 0..MAX_PIVOTS {
        let Some(enter) = (0..ncols).find(|&j| cost[j] < -PIVOT_EPS) else {
            return Ok(());
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for (i, row) in t.iter().enumerate() {
            if row[enter] > PIVOT_EPS {
                let ratio = row[rhs] / row[enter];
                let better = ratio < best - PIVOT_EPS
                    || (ratio < best + PIVOT_EPS
                        && leave.is_some_and(|l| basis[i] < basis[l]));
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            // Unbounded cannot happen for the l1 objective; treat as a bug.
            return Err(Error::DegenerateGram("unbounded LP in l1 solve".into()));
        };
        pivot(t, cost, basis, leave, enter);
    }
    Err(Error::BudgetExceeded("simplex pivot limit".into()))
}

fn pivot(t: &mut [Vec<f64>], cost: &mut [f64], basis: &mut [usize], row: usize, col: usize) {
    let p = t[row][col];
    for v in t[row].iter_mut() {
        *v /= p;
    }
    for i in 0..t.len() {
        if i != row {
            let factor = t[i][col];
            if factor != 0.0 {
                for k in 0..t[i].len() {
                    t[i][k] -= factor * t[row][k];
                }
            }
        }
    }
    let factor = cost[col];
    if factor != 0.0 {
        for k in 0..cost.len() {
            cost[k] -= factor * t[row][k];
        }
    }
    basis[row] = col;
}
