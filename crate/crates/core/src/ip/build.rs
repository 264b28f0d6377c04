//! Partition systems from feasible solutions.
//!
//! Every unit of `x[i][j]` gives two colours (one per orientation), each made
//! of three sets described by their `X1` counts. The remaining `k - 3` parts
//! are pairs of complementary leftover sets. The flow realization then picks
//! concrete disjoint parts.

use std::collections::HashMap;

use num_traits::{Signed, ToPrimitive};

use super::{IpInstance, IpSolution, Variant};
use crate::detach::{detach, DetachProblem, Layout};
use crate::error::{invalid, Error, Result};
use crate::system::{PartitionSystem, MAX_PARTITIONS};
use crate::verify::Certificate;

struct Profiles {
    list: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl Profiles {
    fn id(&mut self, p: Vec<u32>) -> usize {
        if let Some(&i) = self.index.get(&p) {
            return i;
        }
        self.list.push(p.clone());
        self.index.insert(p, self.list.len() - 1);
        self.list.len() - 1
    }
}

/// `c`-set with `i` elements in `X1`.
fn small(c: u64, i: u64) -> Vec<u32> {
    vec![i as u32, (c - i) as u32]
}

/// `(c+1)`-set with `i` elements in `X1`.
fn big(c: u64, i: u64) -> Vec<u32> {
    vec![i as u32, (c + 1 - i) as u32]
}

/// Two groups of `n/2` and the profiles of both families.
pub fn ip_certificate(inst: &IpInstance) -> Certificate {
    let c = inst.ctx.c;
    let (d, u) = (inst.d as i64, inst.u);
    let h = (inst.ctx.n / 2) as usize;
    let group_of = std::iter::repeat(0).take(h).chain(std::iter::repeat(1).take(h)).collect();
    let range = |lo: i64, hi: i64| (lo.max(0)..=hi).map(|i| i as u64);
    let families = match inst.variant {
        Variant::SecA => range(0, d - u - 1)
            .chain(range(d + u + 2, 2 * d + 1))
            .map(|i| small(c, i))
            .chain(range(d + 1 - u, d + 1 + u).map(|i| big(c, i)))
            .collect(),
        Variant::SecB => range(d - u, d + u)
            .map(|i| small(c, i))
            .chain(range(0, d - u - 1).chain(range(d + u + 2, 2 * d + 1)).map(|i| big(c, i)))
            .collect(),
    };
    Certificate { group_of, families }
}

/// Builds `objective` partitions from a feasible solution.
pub fn build_system(inst: &IpInstance, sol: &IpSolution, seed: u64) -> Result<PartitionSystem> {
    let n = inst.ctx.n;
    let k = inst.ctx.k;
    if !sol.feasible() || sol.x.len() != inst.phi.len() {
        return invalid("solution is not feasible for this instance");
    }
    let total = sol.objective.to_u64().filter(|&p| p <= MAX_PARTITIONS).ok_or_else(|| {
        Error::SizeLimit(format!("{} partitions exceed the build limit {MAX_PARTITIONS}", sol.objective))
    })?;
    if total == 0 {
        return Ok(PartitionSystem::empty(n as usize, k as usize));
    }
    let c = inst.ctx.c;
    let d = inst.d;
    let u = inst.u as u64;
    let mut profiles = Profiles { list: Vec::new(), index: HashMap::new() };
    let mut classes: Vec<Vec<usize>> = Vec::with_capacity(total as usize);
    for (&(i, j), v) in inst.phi.iter().zip(&sol.x) {
        let count = v.to_usize().expect("bounded by the total");
        let (first, second) = match inst.variant {
            Variant::SecA => (
                [small(c, d - i), small(c, d + 1 + j), big(c, d + 1 + i - j)],
                [small(c, d - j), small(c, d + 1 + i), big(c, d + 1 + j - i)],
            ),
            Variant::SecB => (
                [big(c, d - i), big(c, d + 1 + j), small(c, d + i - j)],
                [big(c, d - j), big(c, d + 1 + i), small(c, d + j - i)],
            ),
        };
        let first: Vec<usize> = first.into_iter().map(|p| profiles.id(p)).collect();
        let second: Vec<usize> = second.into_iter().map(|p| profiles.id(p)).collect();
        classes.extend(std::iter::repeat(first).take(count));
        classes.extend(std::iter::repeat(second).take(count));
    }

    // Complementary leftover pairs: row slack l gives that many pairs.
    let pads_per_class = ((k - 3) / 2) as usize;
    if pads_per_class > 0 {
        let mut leftover: Vec<(u64, u64)> = Vec::new();
        let mut needed = total * pads_per_class as u64;
        for l in (u + 1..=d).rev() {
            if needed == 0 {
                break;
            }
            let slack = &sol.slacks.row[(l - u - 1) as usize];
            let take = slack.to_u64().unwrap_or(u64::MAX).min(needed);
            if take > 0 {
                leftover.push((l, take));
                needed -= take;
            }
        }
        if needed > 0 {
            return Err(Error::Invariant(format!("{needed} padding pairs short")));
        }
        let mut cursor = leftover.into_iter().flat_map(|(l, take)| std::iter::repeat(l).take(take as usize));
        for class in classes.iter_mut() {
            for _ in 0..pads_per_class {
                let l = cursor.next().expect("counted above");
                let (a, b) = match inst.variant {
                    Variant::SecA => (small(c, d - l), small(c, d + 1 + l)),
                    Variant::SecB => (big(c, d - l), big(c, d + 1 + l)),
                };
                class.push(profiles.id(a));
                class.push(profiles.id(b));
            }
        }
    }

    let layout = Layout::uniform(2, (n / 2) as usize);
    let problem = DetachProblem { layout: layout.clone(), profiles: profiles.list, classes };
    let partitions = detach(&problem)?;
    let sys = PartitionSystem::new(n as usize, k as usize, partitions);
    Ok(sys.relabel(&layout.shuffle_map(seed)).canonical())
}

#[allow(non_snake_case)]
pub fn build_system_secA(inst: &IpInstance, sol: &IpSolution, seed: u64) -> Result<PartitionSystem> {
    if inst.variant != Variant::SecA {
        return invalid("expected a secA instance");
    }
    build_system(inst, sol, seed)
}

#[allow(non_snake_case)]
pub fn build_system_secB(inst: &IpInstance, sol: &IpSolution, seed: u64) -> Result<PartitionSystem> {
    if inst.variant != Variant::SecB {
        return invalid("expected a secB instance");
    }
    if sol.x.iter().any(Signed::is_negative) {
        return invalid("negative variable");
    }
    build_system(inst, sol, seed)
}
