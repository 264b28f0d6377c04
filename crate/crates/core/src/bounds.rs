//! Upper and lower bounds on `SP(n, k)` and the two table scans.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::combinatorics::{binom_int, decompose, l_func, l_func_ceil, l_func_le, mms, ParamCtx};
use crate::construction::{plan_lemma4, Case};
use crate::error::{invalid, Error, Result};

/// Relative band around the boundary inside which the float evaluation of the
/// upper-bound inequality is not trusted.
const GUARD: f64 = 1e-6;

/// Pieces of the inequality for a candidate size `s`: `A = ceil((n - r(c+1))s/n)`
/// and `B = floor(r(c+1)s/n)`.
fn split(ctx: &ParamCtx, s: &BigInt) -> (BigInt, BigInt) {
    let n = BigInt::from(ctx.n);
    let big = BigInt::from(ctx.r * (ctx.c + 1));
    let b = (&big * s).div_floor(&n);
    let a = s - &b;
    (a, b)
}

/// Left-hand side `A + L_c(B)` in floating point (for diagnostics and the
/// monotonicity check).
pub fn theorem5_lhs(ctx: &ParamCtx, s: &BigInt) -> Result<f64> {
    let (a, b) = split(ctx, s);
    Ok(a.to_f64().unwrap_or(f64::INFINITY) + l_func(ctx.c as u32, b.to_f64().unwrap_or(f64::INFINITY))?)
}

/// Whether `s` partitions are allowed by the upper-bound inequality.
fn admissible(ctx: &ParamCtx, s: &BigInt, rhs: &BigInt, exact_calls: &mut usize) -> Result<bool> {
    let (a, b) = split(ctx, s);
    let slack = rhs - &a;
    if slack.is_negative() {
        return Ok(false);
    }
    let c = ctx.c as u32;
    if let (Some(bf), Some(sf)) = (b.to_f64(), slack.to_f64()) {
        if bf < 1e15 && sf < 1e15 {
            let l = l_func(c, bf)?;
            if (l - sf).abs() > GUARD * sf.max(1.0) {
                return Ok(l <= sf);
            }
        }
    }
    *exact_calls += 1;
    let b = b.to_biguint().expect("B is nonnegative");
    Ok(l_func_le(c, &b, &slack))
}

/// Largest `s` satisfying the upper-bound inequality, for `n >= 2k + 2`,
/// `k >= 4`.
pub fn theorem5_upper(ctx: &ParamCtx) -> Result<BigInt> {
    let ParamCtx { n, k, c, .. } = *ctx;
    if n < 2 * k + 2 || k < 4 {
        return Err(Error::NotApplicable(format!("needs n >= 2k+2 and k >= 4, got n = {n}, k = {k}")));
    }
    let rhs = binom_int(n - 1, c as i64 - 1);
    let mut exact_calls = 0;
    let mut probes: Vec<BigInt> = Vec::new();
    let mut lo = BigInt::zero();
    let mut hi = BigInt::one();
    while admissible(ctx, &hi, &rhs, &mut exact_calls)? {
        probes.push(hi.clone());
        lo = hi.clone();
        hi *= 2;
    }
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        probes.push(mid.clone());
        if admissible(ctx, &mid, &rhs, &mut exact_calls)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let next = &lo + 1;
    if !admissible(ctx, &lo, &rhs, &mut exact_calls)? || admissible(ctx, &next, &rhs, &mut exact_calls)? {
        return Err(Error::Invariant(format!("search boundary {lo} is not a threshold")));
    }
    probes.push(next);
    probes.sort();
    let mut last = f64::NEG_INFINITY;
    for s in &probes {
        let v = theorem5_lhs(ctx, s)?;
        if v < last - 1e-9 * last.abs().max(1.0) {
            return Err(Error::Invariant(format!("left-hand side decreases at s = {s}")));
        }
        last = v;
    }
    Ok(lo)
}

/// Explicit bound `2k + 4r - t - 1` with `t = ceil(L_2(3r))`, valid when
/// `9r^2 <= 2k`.
pub fn lemma5_upper(k: u64, r: u64) -> Result<u64> {
    if k < 4 || r == 0 || 9 * r * r > 2 * k {
        return Err(Error::NotApplicable(format!("needs k >= 4 and 1 <= r <= sqrt(2k)/3, got k = {k}, r = {r}")));
    }
    Ok(2 * k + 4 * r - lemma5_t(r) - 1)
}

/// `ceil(L_2(3r))`.
pub fn lemma5_t(r: u64) -> u64 {
    l_func_ceil(2, &BigUint::from(3 * r)).to_u64().expect("small")
}

/// `SP(3k-2, k)` lies in `{lo, lo + 1}` with `lo = binom((3k-2)/2, 2)`.
pub fn theorem6_range(k: u64) -> Result<(u64, u64)> {
    if k < 4 || k % 2 != 0 {
        return invalid(format!("needs even k >= 4, got {k}"));
    }
    let half = (3 * k - 2) / 2;
    let lo = half * (half - 1) / 2;
    Ok((lo, lo + 1))
}

/// Where a lower bound comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LowerWitness {
    /// A single partition.
    Trivial,
    /// Complete resolution on `ck` points, extended by `extra` elements.
    Uniform { extra: u64 },
    /// The group construction on `n - extra` points, then extended.
    Lemma4 { m: u64, h: u64, case: Case, extra: u64 },
}

impl std::fmt::Display for LowerWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LowerWitness::Trivial => write!(f, "single partition"),
            LowerWitness::Uniform { extra: 0 } => write!(f, "uniform resolution"),
            LowerWitness::Uniform { extra } => write!(f, "uniform resolution extended by {extra}"),
            LowerWitness::Lemma4 { m, h, case, extra } => {
                let case = if *case == Case::A { "a" } else { "b" };
                write!(f, "group construction m={m},h={h},case={case}")?;
                if *extra > 0 {
                    write!(f, " extended by {extra}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub ctx: ParamCtx,
    pub mms: BigRational,
    pub theorem5_upper: Option<BigInt>,
    pub lemma5_upper: Option<u64>,
    pub t_value: Option<u64>,
    pub theorem6: Option<(u64, u64)>,
    pub best_lower: BigInt,
    pub witness: LowerWitness,
}

impl BoundsReport {
    /// Smallest upper bound known here.
    pub fn best_upper(&self) -> BigInt {
        let mut best = self.mms.floor().to_integer();
        if let Some(t) = &self.theorem5_upper {
            best = best.min(t.clone());
        }
        if let Some(l) = self.lemma5_upper {
            best = best.min(BigInt::from(l));
        }
        if let Some((_, hi)) = self.theorem6 {
            best = best.min(BigInt::from(hi));
        }
        best
    }

    pub fn is_exact(&self) -> bool {
        self.best_lower == self.best_upper()
    }
}

/// Best group-construction size on exactly `n` points.
pub fn best_lemma4(n: u64, k: u64) -> Option<(BigInt, u64, u64, Case)> {
    let ctx = decompose(n, k).ok()?;
    let mut best: Option<(BigInt, u64, u64, Case)> = None;
    for m in (ctx.c..=n).step_by(ctx.c.max(1) as usize) {
        if n % m != 0 {
            continue;
        }
        for case in [Case::B, Case::A] {
            if let Ok(plan) = plan_lemma4(n, k, m, n / m, case) {
                let size = plan.size();
                if best.as_ref().is_none_or(|b| size > b.0) {
                    best = Some((size, m, n / m, case));
                }
            }
        }
    }
    best
}

pub fn bounds_report(n: u64, k: u64) -> Result<BoundsReport> {
    let ctx = decompose(n, k)?;
    let mms = mms(&ctx)?;
    let theorem5_upper = match theorem5_upper(&ctx) {
        Ok(v) => Some(v),
        Err(Error::NotApplicable(_)) => None,
        Err(e) => return Err(e),
    };
    let (lemma5_upper, t_value) = if ctx.c == 2 {
        match lemma5_upper(k, ctx.r) {
            Ok(v) => (Some(v), Some(lemma5_t(ctx.r))),
            Err(_) => (None, None),
        }
    } else {
        (None, None)
    };
    let theorem6 = if k >= 4 && k % 2 == 0 && n == 3 * k - 2 { theorem6_range(k).ok() } else { None };

    let mut best_lower = BigInt::one();
    let mut witness = LowerWitness::Trivial;
    if ctx.c >= 1 {
        let uniform = binom_int(ctx.c * k - 1, ctx.c as i64 - 1);
        if uniform > best_lower {
            best_lower = uniform;
            witness = LowerWitness::Uniform { extra: ctx.r };
        }
    }
    for base in ctx.c * k + 1..=n {
        if let Some((size, m, h, case)) = best_lemma4(base, k) {
            if size > best_lower {
                best_lower = size;
                witness = LowerWitness::Lemma4 { m, h, case, extra: n - base };
            }
        }
    }
    Ok(BoundsReport { ctx, mms, theorem5_upper, lemma5_upper, t_value, theorem6, best_lower, witness })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table1Row {
    pub n: u64,
    pub k: u64,
    pub m: u64,
    pub h: u64,
    pub sp: BigInt,
    /// Every `(m, h)` reaching the bound; `(m, h)` above is the first.
    pub witnesses: Vec<(u64, u64)>,
}

/// Case (b) constructions on exactly `n` points whose size meets the upper
/// bound.
fn exact_witnesses(n: u64, k: u64, c_filter: impl Fn(u64) -> bool) -> Option<Table1Row> {
    let ctx = decompose(n, k).ok()?;
    if ctx.r == 0 || !c_filter(ctx.c) || n < 2 * k + 2 || k < 4 {
        return None;
    }
    let upper = theorem5_upper(&ctx).ok()?;
    let mut witnesses = Vec::new();
    for m in (ctx.c..n).step_by(ctx.c as usize) {
        if m < 2 || n % m != 0 {
            continue;
        }
        if let Ok(plan) = plan_lemma4(n, k, m, n / m, Case::B) {
            if plan.size() == upper {
                witnesses.push((m, n / m));
            }
        }
    }
    let &(m, h) = witnesses.first()?;
    Some(Table1Row { n, k, m, h, sp: upper, witnesses })
}

/// Parameter sets with `c = 2`, `n <= n_max` where the case (b) construction
/// meets the upper bound, sorted by `(n, k)`.
pub fn scan_table1(n_max: u64) -> Vec<Table1Row> {
    scan_exact(n_max, |c| c == 2)
}

/// Same search for an arbitrary set of part sizes `c`.
pub fn scan_exact(n_max: u64, c_filter: impl Fn(u64) -> bool + Sync) -> Vec<Table1Row> {
    let pairs: Vec<(u64, u64)> =
        (4..=n_max).flat_map(|n| (4..=n).filter(move |&k| n >= 2 * k + 2).map(move |k| (n, k))).collect();
    pairs.into_par_iter().filter_map(|(n, k)| exact_witnesses(n, k, &c_filter)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table2Row {
    pub r: u64,
    pub k_threshold: u64,
    /// The bound is `2k + offset`.
    pub offset: u64,
    /// `ceil(9r^2/2)`, from which on the explicit bound is guaranteed.
    pub guaranteed_from: u64,
    /// Values of `k` below the threshold where the bound happens to hold.
    pub isolated: Vec<u64>,
}

/// Smallest `k` such that the upper bound certifies `SP(2k'+r, k') <= 2k' +
/// 4r - t - 1` for every `k'` from `k` up to `ceil(9r^2/2)`.
pub fn scan_table2(r: u64) -> Result<Table2Row> {
    if !(3..=10).contains(&r) {
        return invalid(format!("r must lie in 3..=10, got {r}"));
    }
    let offset = 4 * r - lemma5_t(r) - 1;
    let top = (9 * r * r).div_ceil(2);
    let lo = 4.max(r + 1);
    let holds: Vec<bool> = (lo..top)
        .into_par_iter()
        .map(|k| {
            let ctx = decompose(2 * k + r, k).expect("valid");
            theorem5_upper(&ctx).map(|u| u <= BigInt::from(2 * k + offset))
        })
        .collect::<Result<_>>()?;
    let mut threshold = top;
    for (i, &ok) in holds.iter().enumerate().rev() {
        if !ok {
            break;
        }
        threshold = lo + i as u64;
    }
    let isolated = (lo..threshold).filter(|&k| holds[(k - lo) as usize]).collect();
    Ok(Table2Row { r, k_threshold: threshold, offset, guaranteed_from: top, isolated })
}

pub fn table1_csv(rows: &[Table1Row]) -> String {
    let mut out = String::from("n,k,m,h,sp\n");
    for row in rows {
        writeln!(out, "{},{},{},{},{}", row.n, row.k, row.m, row.h, row.sp).unwrap();
    }
    out
}

pub fn table2_csv(rows: &[Table2Row]) -> String {
    let mut out = String::from("r,k_threshold,bound\n");
    for row in rows {
        writeln!(out, "{},{},2k+{}", row.r, row.k_threshold, row.offset).unwrap();
    }
    out
}
