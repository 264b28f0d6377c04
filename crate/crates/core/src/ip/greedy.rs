//! Constructive solutions: the slack-driven greedy for the first program,
//! the explicit assignment for the second, and a generic greedy fill.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{IpInstance, IpSolution, Variant};
use crate::error::{invalid, Error, Result};

/// `2*binom(u,2) + 2(d-u+1)/(k-1)`, the most the greedy may fall short of `Q`.
pub fn lemma7_gap(inst: &IpInstance) -> BigRational {
    let u = inst.u.max(0);
    let d = inst.d as i64;
    let pairs = BigInt::from(u * (u - 1));
    BigRational::from_integer(pairs) + BigRational::new(BigInt::from(2 * (d - u + 1)), BigInt::from(inst.ctx.k - 1))
}

/// The improvement steps below, then [`greedy_fill`] on whatever slack their
/// stopping rule leaves.
#[allow(non_snake_case)]
pub fn greedy_secA(inst: &IpInstance) -> Result<IpSolution> {
    let steps = greedy_secA_steps(inst)?;
    greedy_fill(inst, steps.x)
}

/// Iterative improvement on the slacks: pick the largest off-diagonal `y`
/// with slack at least `y` (or the diagonal), the largest row `z` with enough
/// slack, and raise a run of variables ending at row `z`. Identical steps are
/// applied in one batch.
#[allow(non_snake_case)]
pub fn greedy_secA_steps(inst: &IpInstance) -> Result<IpSolution> {
    if inst.variant != Variant::SecA {
        return invalid("greedy_secA needs a secA instance");
    }
    if inst.is_trivial() {
        return Ok(inst.zero_solution());
    }
    let u = inst.u as u64;
    let d = inst.d;
    let km1 = BigInt::from(inst.ctx.k - 1);
    let need0 = BigInt::from(d - u + 1);
    // smallest beta_0 with beta_0 (k-1) >= d - u + 1
    let t0 = need0.div_ceil(&km1);
    let mut beta: Vec<BigInt> = std::iter::once(inst.diag_cap.clone()).chain(inst.off_caps.iter().cloned()).collect();
    let mut alpha = inst.row_caps.clone();
    let a = |l: u64| (l - u - 1) as usize;
    let mut x = vec![BigInt::zero(); inst.phi.len()];
    let slot = |i: u64, j: u64| inst.index_of(i, j).ok_or_else(|| Error::Invariant(format!("({i},{j}) outside phi")));

    loop {
        let y = (1..=u).rev().find(|&y| beta[y as usize] >= BigInt::from(y));
        let y = match y {
            Some(y) => y,
            None if &beta[0] * &km1 >= need0 => 0,
            None => break,
        };
        let delta = if y >= 1 { 1 } else { 2 };
        let z = (u + 1..=d)
            .rev()
            .find(|&z| alpha[a(z)] >= BigInt::from(delta))
            .ok_or_else(|| Error::Invariant(format!("no row with slack {delta} for y = {y}")))?;
        if y >= 1 {
            if z < u + 2 * y {
                return Err(Error::Invariant(format!("row z = {z} below u + 2y = {}", u + 2 * y)));
            }
            let t = (&beta[y as usize] / BigInt::from(y)).min(alpha[a(z)].clone());
            for l in z + 1 - 2 * y..=z {
                if alpha[a(l)] < t {
                    return Err(Error::Invariant(format!("row {l} has slack {} < {t}", alpha[a(l)])));
                }
            }
            for i in 0..y {
                let (lo, hi) = (z - y - i, z - i);
                x[slot(lo, hi)?] += &t;
                alpha[a(lo)] -= &t;
                alpha[a(hi)] -= &t;
            }
            beta[y as usize] -= &t * BigInt::from(y);
        } else {
            let t: BigInt = (&beta[0] - &t0 + BigInt::from(1)).min(&alpha[a(z)] / BigInt::from(2));
            x[slot(z, z)?] += &t;
            beta[0] -= &t;
            alpha[a(z)] -= &t * 2;
        }
    }
    let sol = inst.solution(x)?;
    if !sol.feasible() {
        return Err(Error::Invariant("greedy produced an infeasible solution".into()));
    }
    let floor = BigRational::from_integer(inst.q.clone()) - lemma7_gap(inst);
    if BigRational::from_integer(sol.objective.clone()) < floor {
        return Err(Error::Invariant(format!("greedy objective {} below {floor}", sol.objective)));
    }
    Ok(sol)
}

/// Raises variables one at a time, in `phi` order, as far as the slacks allow.
pub fn greedy_fill(inst: &IpInstance, start: Vec<BigInt>) -> Result<IpSolution> {
    let mut sol = inst.solution(start)?;
    if !sol.feasible() {
        return invalid("starting point is infeasible");
    }
    let u = inst.u.max(0) as u64;
    for (v, &(i, j)) in inst.phi.iter().enumerate() {
        let s = &sol.slacks;
        let room = if i == j {
            s.diag.clone().min(s.row[(i - u - 1) as usize].div_floor(&BigInt::from(2)))
        } else {
            s.off[(j - i - 1) as usize]
                .clone()
                .min(s.row[(i - u - 1) as usize].clone())
                .min(s.row[(j - u - 1) as usize].clone())
        };
        if room.is_positive() {
            let mut x = sol.x;
            x[v] += room;
            sol = inst.solution(x)?;
        }
    }
    Ok(sol)
}

/// The explicit assignment together with the constraints it violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormReport {
    pub assignment: Vec<((u64, u64), BigInt)>,
    /// Human-readable names of violated constraints with their slack.
    pub violations: Vec<(String, BigInt)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedForm {
    Feasible(IpSolution),
    Infeasible(ClosedFormReport),
}

/// Anti-diagonal assignment for the second program: runs of off-diagonal
/// variables take the full `e_l`, and one diagonal variable takes
/// `floor(e_0/2)`.
#[allow(non_snake_case)]
pub fn closedform_secB(inst: &IpInstance) -> Result<ClosedForm> {
    if inst.variant != Variant::SecB || inst.u < 0 {
        return invalid("closed form needs a secB instance with u >= 0");
    }
    let u = inst.u;
    let e = &inst.e;
    let mut assignment = Vec::new();
    for i in 0..=(u - 1).div_euclid(2) {
        assignment.push((((u + 1 + i) as u64, (2 * u + 1 - i) as u64), e[(u - 2 * i) as usize].clone()));
    }
    for i in 0..=(u - 2).div_euclid(2) {
        assignment.push((((u + 1 + i) as u64, (2 * u - i) as u64), e[(u - 2 * i - 1) as usize].clone()));
    }
    let diag = (3 * u / 2 + 1) as u64;
    assignment.push(((diag, diag), e[0].div_floor(&BigInt::from(2))));

    let mut violations = Vec::new();
    let mut x = vec![BigInt::zero(); inst.phi.len()];
    for ((i, j), v) in &assignment {
        match inst.index_of(*i, *j) {
            Some(slot) => x[slot] += v,
            None => violations.push((format!("x_{{{i},{j}}} outside phi (d = {})", inst.d), v.clone())),
        }
    }
    let sol = inst.solution(x)?;
    let s = &sol.slacks;
    if s.diag.is_negative() {
        violations.push(("alpha_0".into(), s.diag.clone()));
    }
    for (idx, v) in s.off.iter().enumerate() {
        if v.is_negative() {
            violations.push((format!("alpha_{}", idx + 1), v.clone()));
        }
    }
    for (idx, v) in s.row.iter().enumerate() {
        if v.is_negative() {
            violations.push((format!("beta_{}", u + 1 + idx as i64), v.clone()));
        }
    }
    if violations.is_empty() {
        if sol.objective != inst.q {
            return Err(Error::Invariant(format!("closed form objective {} differs from Q = {}", sol.objective, inst.q)));
        }
        Ok(ClosedForm::Feasible(sol))
    } else {
        Ok(ClosedForm::Infeasible(ClosedFormReport { assignment, violations }))
    }
}
