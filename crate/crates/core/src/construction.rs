//! Explicit almost-uniform Sperner partition systems.
//!
//! The main construction splits the ground set into `m` groups of size `h` and
//! uses two families of parts: transversal `c`-sets meeting the groups of one
//! resolution block once each, and `(c+1)`-subsets of a single group. A
//! balanced matrix decides how many `(c+1)`-sets each block contributes to a
//! colour; [`crate::detach`] then turns every colour into a concrete partition.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::combinatorics::{binom_int, decompose, ParamCtx};
use crate::detach::{detach, DetachProblem, Layout};
use crate::error::{invalid, Error, Result};
use crate::resolution::{resolve, Resolution};
use crate::system::{PartitionSystem, MAX_PARTITIONS};
use crate::verify::Certificate;

/// `s1 x s2` matrix whose rows hold `a` entries `x + 1` and `s2 - a` entries
/// `x`, with column sums differing by at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedMatrix {
    pub x: u64,
    pub a: usize,
    pub rows: Vec<Vec<u64>>,
}

impl BalancedMatrix {
    pub fn column_sums(&self) -> Vec<u64> {
        let cols = self.rows.first().map_or(0, Vec::len);
        (0..cols).map(|j| self.rows.iter().map(|r| r[j]).sum()).collect()
    }
}

/// Row-by-row greedy: each row puts its `x + 1` entries on the columns with
/// the smallest running sums (lowest index first among ties).
pub fn balanced_matrix(s1: usize, s2: usize, x: u64, a: usize) -> Result<BalancedMatrix> {
    if a > s2 {
        return invalid(format!("a = {a} exceeds the column count {s2}"));
    }
    let mut sums = vec![0u64; s2];
    let mut rows = Vec::with_capacity(s1);
    for _ in 0..s1 {
        let mut order: Vec<usize> = (0..s2).collect();
        order.sort_by_key(|&j| (sums[j], j));
        let mut row = vec![x; s2];
        for &j in order.iter().take(a) {
            row[j] = x + 1;
        }
        for j in 0..s2 {
            sums[j] += row[j];
        }
        rows.push(row);
    }
    Ok(BalancedMatrix { x, a, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    A,
    B,
}

impl std::str::FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(Case::A),
            "b" | "B" => Ok(Case::B),
            _ => invalid(format!("case must be `a` or `b`, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionPlan {
    pub ctx: ParamCtx,
    pub m: u64,
    pub h: u64,
    pub case: Case,
    pub p1: BigInt,
    pub p2: BigInt,
    pub p1p: BigInt,
    pub p2p: BigInt,
    /// Colours per resolution class.
    pub p: u64,
}

impl ConstructionPlan {
    /// Number of partitions the construction yields, `p * binom(m-1, c-1)`.
    pub fn size(&self) -> BigInt {
        BigInt::from(self.p) * binom_int(self.m - 1, self.ctx.c as i64 - 1)
    }

    /// `floor(r/m)`, the common entry of the balanced matrix.
    pub fn x(&self) -> u64 {
        self.ctx.r / self.m
    }

    /// Number of entries `x + 1` per balanced-matrix row.
    pub fn a(&self) -> u64 {
        (self.ctx.r - self.m * self.x()) / self.ctx.c
    }
}

/// Group-construction parameters for `n = m*h`.
pub fn plan_lemma4(n: u64, k: u64, m: u64, h: u64, case: Case) -> Result<ConstructionPlan> {
    let ctx = decompose(n, k)?;
    let ParamCtx { c, r, .. } = ctx;
    if c < 2 || k < 3 {
        return invalid(format!("needs c >= 2 and k >= 3, got c = {c}, k = {k}"));
    }
    if r == 0 {
        return invalid("r = 0: use the uniform construction");
    }
    if m.checked_mul(h) != Some(n) {
        return invalid(format!("m*h = {}*{} differs from n = {n}", m, h));
    }
    if m % c != 0 {
        return invalid(format!("m = {m} is not a multiple of c = {c}"));
    }
    if (r - m * (r / m)) % c != 0 {
        return Err(Error::Invariant(format!("r - m*floor(r/m) not divisible by c for r = {r}, m = {m}")));
    }
    let (mb, hb, cb) = (BigInt::from(m), BigInt::from(h), BigInt::from(c));
    let kr = BigInt::from(k - r);
    let rb = BigInt::from(r);
    let hc = num_traits::pow(hb.clone(), c as usize);
    let b_h = binom_int(h, c as i64 + 1);
    let b_m = binom_int(m - 1, c as i64 - 1);
    let p1 = (&mb * (&hc - &cb - BigInt::from(1))).div_floor(&(&cb * &kr));
    let p2 = (&mb * b_h.div_floor(&b_m)).div_floor(&rb);
    let p1p = (&mb * &hc).div_floor(&(&cb * &kr));
    let p2p = (&mb * &b_h).div_floor(&(&rb * &b_m));
    let p = match case {
        Case::A => p1.clone().min(p2.clone()),
        Case::B => p1p.clone().min(p2p.clone()),
    };
    let p = if p < BigInt::zero() { BigInt::zero() } else { p };
    if case == Case::B && !(&p * &rb).is_multiple_of(&mb) {
        return invalid(format!("case (b) needs p*r = {}*{r} divisible by m = {m}", p));
    }
    let p = p.to_u64().ok_or_else(|| Error::SizeLimit(format!("p = {p} does not fit in 64 bits")))?;
    let plan = ConstructionPlan { ctx, m, h, case, p1, p2, p1p, p2p, p };
    if p > 0 && plan.a() > 0 && (c + 1) * (plan.x() + 1) > h {
        return invalid(format!("a block would need {} elements of a group of size {h}", (c + 1) * (plan.x() + 1)));
    }
    Ok(plan)
}

/// Ground-set grouping and allowed profiles of the main construction.
pub fn lemma4_certificate(plan: &ConstructionPlan) -> Result<Certificate> {
    let (m, h, c) = (plan.m as usize, plan.h as usize, plan.ctx.c as usize);
    let layout = Layout::uniform(m, h);
    let res = resolve(m, c)?;
    let mut families: Vec<Vec<u32>> = Vec::new();
    for class in &res.classes {
        for block in class {
            let mut profile = vec![0u32; m];
            for &g in block {
                profile[g as usize] = 1;
            }
            families.push(profile);
        }
    }
    for w in 0..m {
        let mut profile = vec![0u32; m];
        profile[w] = c as u32 + 1;
        families.push(profile);
    }
    Ok(Certificate { group_of: layout.group_of().into_iter().map(|g| g as u32).collect(), families })
}

/// Builds the `p * binom(m-1, c-1)` partitions of a plan. The seed only picks a
/// random relabelling inside each group.
pub fn construct_lemma4(plan: &ConstructionPlan, res: &Resolution, seed: u64) -> Result<PartitionSystem> {
    let ParamCtx { n, k, c, r } = plan.ctx;
    let (m, h, p) = (plan.m as usize, plan.h as usize, plan.p as usize);
    let c = c as usize;
    if res.m != m || res.c != c {
        return invalid(format!("resolution is for (m, c) = ({}, {}), plan needs ({m}, {c})", res.m, res.c));
    }
    if plan.size() > BigInt::from(MAX_PARTITIONS) {
        return Err(Error::SizeLimit(format!("{} partitions exceed the build limit {MAX_PARTITIONS}", plan.size())));
    }
    let blocks = m / c;
    let classes_per_colour = res.classes.len();
    if p == 0 {
        return Ok(PartitionSystem::empty(n as usize, k as usize));
    }
    let t = balanced_matrix(p, blocks, plan.x(), plan.a() as usize)?;
    for (z, row) in t.rows.iter().enumerate() {
        if row.iter().sum::<u64>() * c as u64 != r {
            return Err(Error::Invariant(format!("balanced matrix row {z} does not sum to r/c")));
        }
    }
    let sums = t.column_sums();
    let (lo, hi) = ((p as u64 * r) / m as u64, (p as u64 * r).div_ceil(m as u64));
    if sums.iter().any(|&s| s < lo || s > hi) {
        return Err(Error::Invariant(format!("column sums {sums:?} outside [{lo}, {hi}]")));
    }

    // Profiles: one transversal per (class, block), then one (c+1)-set per group.
    let mut profiles = Vec::with_capacity(classes_per_colour * blocks + m);
    for class in &res.classes {
        for block in class {
            let mut profile = vec![0u32; m];
            for &g in block {
                profile[g as usize] = 1;
            }
            profiles.push(profile);
        }
    }
    let b_index = profiles.len();
    for w in 0..m {
        let mut profile = vec![0u32; m];
        profile[w] = c as u32 + 1;
        profiles.push(profile);
    }

    let mut transversal_used = vec![0u64; classes_per_colour * blocks];
    let mut big_used = vec![vec![0u64; classes_per_colour]; m];
    let mut classes = Vec::with_capacity(p * classes_per_colour);
    for row in &t.rows {
        for (l, class) in res.classes.iter().enumerate() {
            let mut parts = Vec::with_capacity(k as usize);
            for (i, block) in class.iter().enumerate() {
                let tz = row[i] as usize;
                let singles = h.checked_sub((c + 1) * tz).ok_or_else(|| {
                    Error::InvalidParams(format!("t = {tz} needs more than h = {h} elements"))
                })?;
                parts.extend(std::iter::repeat(l * blocks + i).take(singles));
                transversal_used[l * blocks + i] += singles as u64;
                for &w in block {
                    parts.extend(std::iter::repeat(b_index + w as usize).take(tz));
                    big_used[w as usize][l] += tz as u64;
                }
            }
            if parts.len() != k as usize {
                return Err(Error::Invariant(format!("colour has {} parts instead of {k}", parts.len())));
            }
            classes.push(parts);
        }
    }

    let hc = num_traits::pow(BigInt::from(h), c);
    if let Some(u) = transversal_used.iter().find(|&&u| BigInt::from(u) > hc) {
        return Err(Error::Invariant(format!("a transversal family is used {u} times, above h^c")));
    }
    let b_h = binom_int(h as u64, c as i64 + 1);
    let b_m = binom_int(m as u64 - 1, c as i64 - 1);
    for (w, per_class) in big_used.iter().enumerate() {
        for (l, &u) in per_class.iter().enumerate() {
            if BigInt::from(u) * &b_m > b_h {
                return Err(Error::Invariant(format!(
                    "group {w} gives {u} (c+1)-sets to class {l}, above binom(h,c+1)/binom(m-1,c-1)"
                )));
            }
        }
    }

    let layout = Layout::uniform(m, h);
    let problem = DetachProblem { layout: layout.clone(), profiles, classes };
    let partitions = detach(&problem)?;
    let sys = PartitionSystem::new(n as usize, k as usize, partitions);
    Ok(sys.relabel(&layout.shuffle_map(seed)).canonical())
}

/// All `binom(n-1, c-1)` parallel classes of the complete `c`-uniform
/// hypergraph on `n = c*k` points.
pub fn construct_uniform(n: u64, k: u64) -> Result<PartitionSystem> {
    let ctx = decompose(n, k)?;
    if ctx.r != 0 {
        return invalid(format!("uniform construction needs k | n, got n = {n}, k = {k}"));
    }
    let size = binom_int(n - 1, ctx.c as i64 - 1);
    if size > BigInt::from(MAX_PARTITIONS) {
        return Err(Error::SizeLimit(format!("{size} partitions exceed the build limit {MAX_PARTITIONS}")));
    }
    let res = resolve(n as usize, ctx.c as usize)?;
    Ok(PartitionSystem::new(n as usize, k as usize, res.classes).canonical())
}

/// Certificate for [`construct_uniform`]: one group, parts of size `c`.
pub fn uniform_certificate(n: u64, k: u64) -> Result<Certificate> {
    let ctx = decompose(n, k)?;
    Ok(Certificate { group_of: vec![0; n as usize], families: vec![vec![ctx.c as u32]] })
}

/// Grows the ground set by one element placed in a smallest part of every
/// partition.
pub fn extend_system(sys: &PartitionSystem) -> PartitionSystem {
    sys.extend()
}
