//! Ground-truth checks for partition systems.
//!
//! Two independent routes decide the Sperner property: [`check_sperner`]
//! compares sorted parts pairwise, [`check_detecting_array`] compares row
//! bitsets of a detecting array. [`check_certificate`] avoids pairwise work
//! entirely by checking part profiles against declared families.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::combinatorics::ParamCtx;
use crate::error::{Error, Result};
use crate::system::{Part, PartitionSystem};

/// Default cap on the number of parts for [`check_sperner`].
pub const SPERNER_PART_LIMIT: usize = 20_000;
const MAX_LISTED: usize = 50;

/// Outcome of a batch of checks; passes iff no violation was recorded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<String>,
    pub violations: Vec<String>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn ran(&mut self, check: &str) {
        self.checks.push(check.to_string());
    }

    pub(crate) fn violation(&mut self, msg: String) {
        self.violations.push(msg);
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
        self.violations.extend(other.violations);
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            writeln!(out, "check: {c}").unwrap();
        }
        for v in &self.violations {
            writeln!(out, "violation: {v}").unwrap();
        }
        writeln!(out, "{}", if self.pass() { "PASS" } else { "FAIL" }).unwrap();
        out
    }
}

/// Each partition has `k` nonempty parts covering `{0..n-1}` exactly once.
pub fn check_partition_system(sys: &PartitionSystem) -> VerificationReport {
    let mut report = VerificationReport::new();
    report.ran("partition validity");
    let mut owner = vec![usize::MAX; sys.n];
    for (j, partition) in sys.partitions.iter().enumerate() {
        if partition.len() != sys.k {
            report.violation(format!("partition {j} has {} parts instead of {}", partition.len(), sys.k));
        }
        owner.iter_mut().for_each(|o| *o = usize::MAX);
        for (i, part) in partition.iter().enumerate() {
            if part.is_empty() {
                report.violation(format!("partition {j} part {i} is empty"));
            }
            for &e in part {
                let Some(slot) = owner.get_mut(e as usize) else {
                    report.violation(format!("partition {j} part {i} has element {e} >= n = {}", sys.n));
                    continue;
                };
                if *slot != usize::MAX {
                    report.violation(format!(
                        "partition {j}: element {e} lies in parts {} and {i}",
                        *slot
                    ));
                } else {
                    *slot = i;
                }
            }
        }
        let missing: Vec<usize> = (0..sys.n).filter(|&e| owner[e] == usize::MAX).collect();
        if !missing.is_empty() {
            report.violation(format!("partition {j} misses elements {missing:?}"));
        }
    }
    report
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

/// Exhaustive pairwise subset test across parts of distinct partitions.
pub fn check_sperner(sys: &PartitionSystem) -> Result<VerificationReport> {
    check_sperner_with_limit(sys, SPERNER_PART_LIMIT)
}

pub fn check_sperner_with_limit(sys: &PartitionSystem, limit: usize) -> Result<VerificationReport> {
    let total = sys.part_count();
    if total > limit {
        return Err(Error::SizeLimit(format!(
            "{total} parts exceed the pairwise limit {limit}; use certificate checks"
        )));
    }
    let mut parts: Vec<(usize, usize, Part)> = Vec::with_capacity(total);
    for (j, partition) in sys.partitions.iter().enumerate() {
        for (i, part) in partition.iter().enumerate() {
            let mut p = part.clone();
            p.sort_unstable();
            parts.push((j, i, p));
        }
    }
    let found: Vec<String> = (0..parts.len())
        .into_par_iter()
        .flat_map_iter(|a| {
            let (ja, ia, pa) = &parts[a];
            let parts = &parts;
            (0..parts.len()).filter_map(move |b| {
                let (jb, ib, pb) = &parts[b];
                if ja == jb || pa.len() > pb.len() || !is_subset(pa, pb) {
                    return None;
                }
                if pa.len() == pb.len() {
                    // Report equal parts once.
                    if a > b {
                        return None;
                    }
                    return Some(format!(
                        "partition {ja} part {ia} equals partition {jb} part {ib}"
                    ));
                }
                Some(format!("partition {ja} part {ia} is a subset of partition {jb} part {ib}"))
            })
        })
        .collect();
    let mut report = VerificationReport::new();
    report.ran("pairwise Sperner");
    let count = found.len();
    for v in found.into_iter().take(MAX_LISTED) {
        report.violation(v);
    }
    if count > MAX_LISTED {
        report.violation(format!("... {} further subset relations", count - MAX_LISTED));
    }
    Ok(report)
}

/// Every partition has `k - r` parts of size `c` and `r` of size `c + 1`.
pub fn check_almost_uniform(sys: &PartitionSystem, ctx: &ParamCtx) -> VerificationReport {
    let mut report = VerificationReport::new();
    report.ran("almost uniform part sizes");
    let (c, r) = (ctx.c as usize, ctx.r as usize);
    for (j, partition) in sys.partitions.iter().enumerate() {
        let small = partition.iter().filter(|p| p.len() == c).count();
        let large = partition.iter().filter(|p| p.len() == c + 1).count();
        if let Some((i, p)) =
            partition.iter().enumerate().find(|(_, p)| p.len() != c && p.len() != c + 1)
        {
            report.violation(format!("partition {j} part {i} has size {} (allowed {c}, {})", p.len(), c + 1));
        } else if large != r || small != ctx.k as usize - r {
            report.violation(format!(
                "partition {j} has {small} parts of size {c} and {large} of size {} (want {} and {r})",
                c + 1,
                ctx.k as usize - r
            ));
        }
    }
    report
}

/// Profile metadata sufficient to certify the Sperner property without
/// pairwise comparisons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// Group index of every element.
    pub group_of: Vec<u32>,
    /// Allowed part profiles (elements per group).
    pub families: Vec<Vec<u32>>,
}

/// Checks that every part has a declared profile, that no declared profile is
/// dominated componentwise by another (so no set of one family fits inside a
/// set of another), per-class cardinality and group degree sums, and that no
/// part occurs twice. Passing implies the Sperner property.
pub fn check_certificate(sys: &PartitionSystem, cert: &Certificate) -> VerificationReport {
    let mut report = check_partition_system(sys);
    let groups = cert.group_of.iter().map(|&g| g as usize + 1).max().unwrap_or(0);
    let mut group_size = vec![0usize; groups];
    for &g in &cert.group_of {
        group_size[g as usize] += 1;
    }
    if cert.group_of.len() != sys.n {
        report.violation(format!("group map covers {} elements, system has {}", cert.group_of.len(), sys.n));
        return report;
    }

    report.ran("declared families form a clutter");
    for (a, fa) in cert.families.iter().enumerate() {
        if fa.len() != groups {
            report.violation(format!("family {a} profile has {} entries for {groups} groups", fa.len()));
            return report;
        }
        for (b, fb) in cert.families.iter().enumerate() {
            if a != b && fa != fb && fa.iter().zip(fb).all(|(x, y)| x <= y) {
                report.violation(format!("family {fa:?} is dominated by family {fb:?}"));
            }
        }
    }

    report.ran("part families, class degrees, edge reuse");
    let family_index: HashMap<&[u32], usize> =
        cert.families.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
    let mut used: HashMap<Part, (usize, usize)> = HashMap::with_capacity(sys.part_count());
    let mut listed = 0usize;
    let mut note = |report: &mut VerificationReport, msg: String| {
        if listed < MAX_LISTED {
            report.violation(msg);
        } else if listed == MAX_LISTED {
            report.violation("... further certificate violations omitted".into());
        }
        listed += 1;
    };
    for (j, partition) in sys.partitions.iter().enumerate() {
        if partition.len() != sys.k {
            note(&mut report, format!("class {j} has {} parts instead of {}", partition.len(), sys.k));
        }
        let mut degree = vec![0usize; groups];
        for (i, part) in partition.iter().enumerate() {
            let mut profile = vec![0u32; groups];
            for &e in part {
                if let Some(&g) = cert.group_of.get(e as usize) {
                    profile[g as usize] += 1;
                    degree[g as usize] += 1;
                }
            }
            if !family_index.contains_key(profile.as_slice()) {
                note(&mut report, format!("partition {j} part {i} has undeclared profile {profile:?}"));
            }
            let mut key = part.clone();
            key.sort_unstable();
            if let Some(&(j0, i0)) = used.get(&key) {
                note(&mut report, format!("partition {j} part {i} reuses partition {j0} part {i0}"));
            } else {
                used.insert(key, (j, i));
            }
        }
        if degree != group_size {
            note(&mut report, format!("class {j} has group degrees {degree:?}, want {group_size:?}"));
        }
    }
    report
}

/// An `n x p` array over symbols `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectingArray {
    pub n: usize,
    pub k: usize,
    pub p: usize,
    /// `rows[i][j]` is the symbol of element `i` in column `j`.
    pub rows: Vec<Vec<u32>>,
}

/// Column `j` records, for each element, the 1-based index of its part in
/// partition `j` (canonical part order).
pub fn to_detecting_array(sys: &PartitionSystem) -> Result<DetectingArray> {
    let report = check_partition_system(sys);
    if !report.pass() {
        return Err(Error::InvalidParams(format!("not a partition system: {}", report.violations[0])));
    }
    let sys = sys.clone().canonical();
    let mut rows = vec![vec![0u32; sys.len()]; sys.n];
    for (j, partition) in sys.partitions.iter().enumerate() {
        for (i, part) in partition.iter().enumerate() {
            for &e in part {
                rows[e as usize][j] = i as u32 + 1;
            }
        }
    }
    Ok(DetectingArray { n: sys.n, k: sys.k, p: sys.len(), rows })
}

fn missing_symbols(arr: &DetectingArray) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    for j in 0..arr.p {
        let mut seen = vec![false; arr.k + 1];
        for row in &arr.rows {
            if let Some(s) = seen.get_mut(row[j] as usize) {
                *s = true;
            }
        }
        for s in 1..=arr.k {
            if !seen[s] {
                out.push((j, s as u32));
            }
        }
    }
    out
}

pub fn from_detecting_array(arr: &DetectingArray) -> Result<PartitionSystem> {
    if let Some(&(j, s)) = missing_symbols(arr).first() {
        return Err(Error::InvalidParams(format!("column {j} lacks symbol {s}")));
    }
    let mut partitions = Vec::with_capacity(arr.p);
    for j in 0..arr.p {
        let mut partition = vec![Vec::new(); arr.k];
        for (i, row) in arr.rows.iter().enumerate() {
            partition[row[j] as usize - 1].push(i as u32);
        }
        partitions.push(partition);
    }
    Ok(PartitionSystem::new(arr.n, arr.k, partitions).canonical())
}

/// Every symbol occurs in every column, and no `(column, symbol)` row set is
/// contained in another.
pub fn check_detecting_array(arr: &DetectingArray) -> VerificationReport {
    let mut report = VerificationReport::new();
    report.ran("every symbol in every column");
    for (j, s) in missing_symbols(arr) {
        report.violation(format!("column {j} lacks symbol {s}"));
    }
    report.ran("row sets pairwise incomparable");
    let words = arr.n.div_ceil(64);
    let mut sets: Vec<(usize, u32, Vec<u64>)> = Vec::with_capacity(arr.p * arr.k);
    for j in 0..arr.p {
        for s in 1..=arr.k as u32 {
            let mut bits = vec![0u64; words];
            for (i, row) in arr.rows.iter().enumerate() {
                if row[j] == s {
                    bits[i / 64] |= 1 << (i % 64);
                }
            }
            sets.push((j, s, bits));
        }
    }
    let mut count = 0usize;
    for (a, (ja, sa, ba)) in sets.iter().enumerate() {
        for (b, (jb, sb, bb)) in sets.iter().enumerate() {
            if a == b {
                continue;
            }
            let contained = ba.iter().zip(bb).all(|(x, y)| x & !y == 0);
            let equal = ba == bb;
            if contained && (!equal || a < b) {
                if count < MAX_LISTED {
                    report.violation(format!(
                        "rows of symbol {sa} in column {ja} lie within rows of symbol {sb} in column {jb}"
                    ));
                }
                count += 1;
            }
        }
    }
    if count > MAX_LISTED {
        report.violation(format!("... {} further containments", count - MAX_LISTED));
    }
    report
}

impl DetectingArray {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "DA {} {} {}", self.n, self.k, self.p).unwrap();
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "DA" {
            return Err(Error::Parse { line: 1, msg: "expected header `DA <n> <k> <p>`".into() });
        }
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse { line: 1, msg: format!("bad number `{s}` in header") })
        };
        let (n, k, p) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
        let mut rows = Vec::with_capacity(n);
        for (idx, line) in lines {
            let row = line
                .split_whitespace()
                .map(|t| match t.parse::<u32>() {
                    Ok(s) if s >= 1 && s as usize <= k => Ok(s),
                    _ => Err(Error::Parse { line: idx + 1, msg: format!("symbol `{t}` not in 1..={k}") }),
                })
                .collect::<Result<Vec<u32>>>()?;
            if row.len() != p {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("row has {} symbols, expected {p}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::Parse { line: 1, msg: format!("header promises {n} rows, found {}", rows.len()) });
        }
        Ok(Self { n, k, p, rows })
    }
}

/// Distinct parts across the whole system.
pub fn distinct_parts(sys: &PartitionSystem) -> usize {
    let mut set = HashSet::new();
    for partition in &sys.partitions {
        for part in partition {
            let mut p = part.clone();
            p.sort_unstable();
            set.insert(p);
        }
    }
    set.len()
}
