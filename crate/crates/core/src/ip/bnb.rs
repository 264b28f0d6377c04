//! Linear relaxation and exact branch-and-bound for the structured programs.
//!
//! All constraint coefficients are nonnegative, so a lower bound `x_j >= L`
//! is handled by shifting the right-hand side (a negative entry means the node
//! is empty) and an upper bound becomes one extra row.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::greedy::greedy_fill;
use super::simplex::{maximize, LpProblem};
use super::{IpInstance, IpSolution};
use crate::error::{Error, Result};

pub const DEFAULT_EXACT_LIMIT: usize = 2000;
pub const DEFAULT_LP_LIMIT: usize = 20000;
/// Total simplex pivots one `exact_solve` may spend across all nodes.
pub const EXACT_PIVOT_BUDGET: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpOutcome {
    pub objective: BigRational,
    pub x: Vec<BigRational>,
    /// Floor of every variable; always feasible for the integer program.
    pub floor: IpSolution,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactOutcome {
    pub solution: IpSolution,
    /// False when the node or pivot budget ran out before the search finished.
    pub optimal: bool,
    pub nodes: usize,
    pub pivots: usize,
}

fn rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// LP over `x = lower + y`, `y >= 0`, with optional upper bounds on `x`.
/// Returns `None` when the bounds are inconsistent.
fn node_lp(
    inst: &IpInstance,
    lower: &[BigInt],
    upper: &[Option<BigInt>],
) -> Result<Option<(BigRational, Vec<BigRational>, usize)>> {
    let (a, b) = inst.constraints();
    let nvar = inst.phi.len();
    let mut rows: Vec<Vec<(usize, BigRational)>> = Vec::with_capacity(a.len());
    let mut rhs = Vec::with_capacity(b.len());
    for (row, cap) in a.iter().zip(&b) {
        let used: BigInt = row.iter().map(|&(j, coef)| &lower[j] * BigInt::from(coef)).sum();
        let left = cap - used;
        if left.is_negative() {
            return Ok(None);
        }
        rows.push(row.iter().map(|&(j, coef)| (j, BigRational::from_integer(coef.into()))).collect());
        rhs.push(rat(&left));
    }
    for j in 0..nvar {
        if let Some(hi) = &upper[j] {
            let room = hi - &lower[j];
            if room.is_negative() {
                return Ok(None);
            }
            rows.push(vec![(j, BigRational::from_integer(1.into()))]);
            rhs.push(rat(&room));
        }
    }
    let base: BigInt = lower.iter().sum::<BigInt>() * 2;
    let two = BigRational::from_integer(2.into());
    let problem = LpProblem { a: rows, b: rhs, c: vec![two; nvar], upper_hint: Some(rat(&(&inst.q - &base))) };
    let res = maximize(&problem)?;
    let x = res.x.iter().zip(lower).map(|(y, l)| y + rat(l)).collect();
    Ok(Some((res.objective + rat(&base), x, res.pivots)))
}

/// Exact optimum of the linear relaxation.
pub fn lp_relax(inst: &IpInstance, limit: usize) -> Result<LpOutcome> {
    if inst.phi.len() > limit {
        return Err(Error::SizeLimit(format!("|phi| = {} exceeds the LP limit {limit}", inst.phi.len())));
    }
    if inst.is_trivial() {
        return Ok(LpOutcome { objective: BigRational::zero(), x: Vec::new(), floor: inst.zero_solution(), pivots: 0 });
    }
    let (a, b) = inst.constraints();
    let problem = LpProblem {
        a: a.iter().map(|row| row.iter().map(|&(j, c)| (j, BigRational::from_integer(c.into()))).collect()).collect(),
        b: b.iter().map(rat).collect(),
        c: vec![BigRational::from_integer(2.into()); inst.phi.len()],
        upper_hint: Some(rat(&inst.q)),
    };
    let res = maximize(&problem)?;
    let floor = inst.solution(res.x.iter().map(|v| v.floor().to_integer()).collect())?;
    if !floor.feasible() {
        return Err(Error::Invariant("floor of the LP optimum is infeasible".into()));
    }
    Ok(LpOutcome { objective: res.objective, x: res.x, floor, pivots: res.pivots })
}

struct Node {
    lower: Vec<BigInt>,
    upper: Vec<Option<BigInt>>,
}

/// Depth-first branch-and-bound on the first fractional variable, bounding
/// each node by twice the floor of its LP variable sum. Stops early, without
/// an optimality proof, once the node or pivot budget is spent.
pub fn exact_solve(inst: &IpInstance, budget: usize, limit: usize) -> Result<ExactOutcome> {
    let nvar = inst.phi.len();
    if nvar > limit {
        return Err(Error::SizeLimit(format!("|phi| = {nvar} exceeds the exact limit {limit}")));
    }
    if inst.is_trivial() {
        return Ok(ExactOutcome { solution: inst.zero_solution(), optimal: true, nodes: 0, pivots: 0 });
    }
    let mut best = greedy_fill(inst, vec![BigInt::zero(); nvar])?;
    if inst.variant == super::Variant::SecA {
        let g = super::greedy::greedy_secA(inst)?;
        if g.objective > best.objective {
            best = g;
        }
    }
    let mut stack = vec![Node { lower: vec![BigInt::zero(); nvar], upper: vec![None; nvar] }];
    let mut nodes = 0usize;
    let mut pivots = 0usize;
    while let Some(node) = stack.pop() {
        if best.objective == inst.q {
            return Ok(ExactOutcome { solution: best, optimal: true, nodes, pivots });
        }
        if nodes >= budget || pivots >= EXACT_PIVOT_BUDGET {
            return Ok(ExactOutcome { solution: best, optimal: false, nodes, pivots });
        }
        nodes += 1;
        let Some((value, x, used)) = node_lp(inst, &node.lower, &node.upper)? else { continue };
        pivots += used;
        let bound = (value / BigRational::from_integer(2.into())).floor().to_integer() * 2;
        if bound <= best.objective {
            continue;
        }
        let floored: Vec<BigInt> = x.iter().map(|v| v.floor().to_integer()).collect();
        let candidate = greedy_fill(inst, floored)?;
        if candidate.objective > best.objective {
            best = candidate;
        }
        let Some(j) = x.iter().position(|v| !v.is_integer()) else { continue };
        let down = x[j].floor().to_integer();
        let mut lo = Node { lower: node.lower.clone(), upper: node.upper.clone() };
        lo.upper[j] = Some(down.clone());
        let mut hi = node;
        hi.lower[j] = down + 1;
        stack.push(lo);
        stack.push(hi);
    }
    Ok(ExactOutcome { solution: best, optimal: true, nodes, pivots })
}
