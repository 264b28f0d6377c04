//! Exact rational simplex for `max c.x` subject to `A x <= b`, `x >= 0`,
//! `b >= 0`. The slack basis is feasible from the start, so there is no
//! first phase.
//!
//! Entering columns follow the largest reduced cost. After a long run of
//! degenerate pivots the smallest-index rule takes over until the objective
//! moves again: it cannot cycle, and every return to the largest-cost rule
//! happens at a strictly better objective, so no basis repeats.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{invalid, Error, Result};

const DEGENERATE_SWITCH: usize = 50;

#[derive(Debug, Clone)]
pub struct LpProblem {
    /// Sparse rows: `(column, coefficient)`.
    pub a: Vec<Vec<(usize, BigRational)>>,
    pub b: Vec<BigRational>,
    pub c: Vec<BigRational>,
    /// Known upper bound on the optimum; reaching it ends the search early.
    pub upper_hint: Option<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpResult {
    pub objective: BigRational,
    pub x: Vec<BigRational>,
    pub pivots: usize,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    /// Reduced costs; the last entry holds minus the objective value.
    cost: Vec<BigRational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &BigRational {
        &self.rows[r][self.width]
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        let nz: Vec<usize> = (0..=self.width).filter(|&j| !self.rows[r][j].is_zero()).collect();
        for &j in &nz {
            let v = &self.rows[r][j] / &p;
            self.rows[r][j] = v;
        }
        let prow: Vec<(usize, BigRational)> = nz.iter().map(|&j| (j, self.rows[r][j].clone())).collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            let row = &mut self.rows[i];
            for (j, v) in &prow {
                row[*j] -= &f * v;
            }
        }
        if !self.cost[col].is_zero() {
            let f = self.cost[col].clone();
            for (j, v) in &prow {
                self.cost[*j] -= &f * v;
            }
        }
        self.basis[r] = col;
    }
}

pub fn maximize(problem: &LpProblem) -> Result<LpResult> {
    let m = problem.a.len();
    let nvar = problem.c.len();
    if problem.b.len() != m {
        return invalid("row count and right-hand side length differ");
    }
    if problem.b.iter().any(Signed::is_negative) {
        return invalid("right-hand side must be nonnegative");
    }
    let width = nvar + m;
    let zero = BigRational::zero();
    let mut rows = vec![vec![zero.clone(); width + 1]; m];
    for (r, row) in problem.a.iter().enumerate() {
        for (j, v) in row {
            if *j >= nvar {
                return invalid(format!("column {j} out of range"));
            }
            rows[r][*j] += v;
        }
        rows[r][nvar + r] = BigRational::from_integer(BigInt::from(1));
        rows[r][width] = problem.b[r].clone();
    }
    let mut cost = vec![zero.clone(); width + 1];
    cost[..nvar].clone_from_slice(&problem.c);
    let mut t = Tableau { rows, cost, basis: (nvar..nvar + m).collect(), width };

    let mut pivots = 0usize;
    let mut degenerate_run = 0usize;
    let mut bland = false;
    loop {
        let value = -&t.cost[width];
        if problem.upper_hint.as_ref().is_some_and(|h| value >= *h) {
            break;
        }
        let entering = if bland {
            (0..width).find(|&j| t.cost[j].is_positive())
        } else {
            (0..width).filter(|&j| t.cost[j].is_positive()).max_by(|&a, &b| t.cost[a].cmp(&t.cost[b]).then(b.cmp(&a)))
        };
        let Some(col) = entering else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..m {
            let a = &t.rows[r][col];
            if a.is_positive() {
                let ratio = t.rhs(r) / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && t.basis[r] < t.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((r, ratio)) = leave else {
            return Err(Error::Invariant("linear program is unbounded".into()));
        };
        if ratio.is_zero() {
            degenerate_run += 1;
            if degenerate_run >= DEGENERATE_SWITCH {
                bland = true;
            }
        } else {
            degenerate_run = 0;
            bland = false;
        }
        t.pivot(r, col);
        pivots += 1;
    }
    let mut x = vec![zero; nvar];
    for (r, &var) in t.basis.iter().enumerate() {
        if var < nvar {
            x[var] = t.rhs(r).clone();
        }
    }
    let objective = -&t.cost[width];
    Ok(LpResult { objective, x, pivots })
}
