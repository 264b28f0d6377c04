//! Resolutions of the complete `c`-uniform hypergraph on `m` points into
//! parallel classes (Baranyai).
//!
//! Pairs use the round-robin schedule. Larger blocks go through the flow-based
//! realization in [`crate::detach`] with a single group: every class asks for
//! `m/c` blocks of size `c`, and there are exactly as many classes as needed to
//! use every `c`-subset once.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::ToPrimitive;

use crate::combinatorics::binom_exact;
use crate::detach::{detach, DetachProblem, Layout};
use crate::error::{invalid, Error, Result};
use crate::verify::VerificationReport;

/// Classes of `c`-subsets of `{0, .., m-1}`; block `i` of class `l` is
/// `classes[l][i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub m: usize,
    pub c: usize,
    pub classes: Vec<Vec<Vec<u32>>>,
    lookup: HashMap<Vec<u32>, (usize, usize)>,
}

impl Resolution {
    /// Wraps arbitrary classes, sorting each block and ordering blocks by
    /// minimum element. No validity is assumed.
    pub fn from_classes(m: usize, c: usize, mut classes: Vec<Vec<Vec<u32>>>) -> Self {
        let mut lookup = HashMap::new();
        for (l, class) in classes.iter_mut().enumerate() {
            for block in class.iter_mut() {
                block.sort_unstable();
            }
            class.sort();
            for (i, block) in class.iter().enumerate() {
                lookup.entry(block.clone()).or_insert((l, i));
            }
        }
        Self { m, c, classes, lookup }
    }

    /// Class and position of a block (elements in any order).
    pub fn position(&self, block: &[u32]) -> Option<(usize, usize)> {
        let mut key = block.to_vec();
        key.sort_unstable();
        self.lookup.get(&key).copied()
    }

    /// One class per line, blocks separated by ` | `, elements 1-indexed.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for class in &self.classes {
            let blocks: Vec<String> = class
                .iter()
                .map(|b| b.iter().map(|e| (e + 1).to_string()).collect::<Vec<_>>().join(" "))
                .collect();
            writeln!(out, "{}", blocks.join(" | ")).unwrap();
        }
        out
    }

    pub fn from_text(m: usize, c: usize, text: &str) -> Result<Self> {
        let mut classes = Vec::new();
        for (idx, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let mut class = Vec::new();
            for block in line.split('|') {
                let mut b = Vec::new();
                for tok in block.split_whitespace() {
                    let v: u32 = tok.parse().map_err(|_| Error::Parse {
                        line: idx + 1,
                        msg: format!("bad element `{tok}`"),
                    })?;
                    if v == 0 || v as usize > m {
                        return Err(Error::Parse {
                            line: idx + 1,
                            msg: format!("element {v} outside 1..={m}"),
                        });
                    }
                    b.push(v - 1);
                }
                class.push(b);
            }
            classes.push(class);
        }
        Ok(Self::from_classes(m, c, classes))
    }
}

/// Round-robin 1-factorization of `K_m`, `m` even.
fn round_robin(m: usize) -> Vec<Vec<Vec<u32>>> {
    let rounds = m - 1;
    let fixed = (m - 1) as u32;
    (0..rounds)
        .map(|l| {
            let mut class = vec![vec![l as u32, fixed]];
            for i in 1..m / 2 {
                let a = ((l + i) % rounds) as u32;
                let b = ((l + rounds - i) % rounds) as u32;
                class.push(vec![a.min(b), a.max(b)]);
            }
            class
        })
        .collect()
}

pub fn resolve(m: usize, c: usize) -> Result<Resolution> {
    if c == 0 || m < c || m % c != 0 {
        return invalid(format!("resolution needs c | m and m >= c >= 1, got m = {m}, c = {c}"));
    }
    let classes = if c == 2 {
        round_robin(m)
    } else {
        let count = binom_exact(m as u64 - 1, c as i64 - 1)
            .to_usize()
            .ok_or_else(|| Error::SizeLimit(format!("too many classes for m = {m}, c = {c}")))?;
        let problem = DetachProblem {
            layout: Layout::uniform(1, m),
            profiles: vec![vec![c as u32]],
            classes: vec![vec![0; m / c]; count],
        };
        detach(&problem)?
    };
    Ok(Resolution::from_classes(m, c, classes))
}

/// Reports blocks of the wrong size, classes that are not partitions, and
/// blocks that are missing or repeated.
pub fn verify_resolution(res: &Resolution) -> VerificationReport {
    let mut report = VerificationReport::new();
    let (m, c) = (res.m, res.c);
    report.ran("class partitions");
    for (l, class) in res.classes.iter().enumerate() {
        let mut hit = vec![0usize; m];
        for (i, block) in class.iter().enumerate() {
            if block.len() != c {
                report.violation(format!("class {l} block {i} has size {} instead of {c}", block.len()));
            }
            for &e in block {
                match hit.get_mut(e as usize) {
                    Some(h) => *h += 1,
                    None => report.violation(format!("class {l} block {i} has element {e} >= {m}")),
                }
            }
        }
        for (e, &h) in hit.iter().enumerate() {
            if h != 1 {
                report.violation(format!("class {l} covers element {} {h} times", e + 1));
            }
        }
    }
    report.ran("coverage of all c-subsets");
    let mut seen: HashMap<Vec<u32>, (usize, usize)> = HashMap::new();
    for (l, class) in res.classes.iter().enumerate() {
        for (i, block) in class.iter().enumerate() {
            let mut key = block.clone();
            key.sort_unstable();
            if let Some(&(l0, i0)) = seen.get(&key) {
                let shown: Vec<String> = key.iter().map(|e| (e + 1).to_string()).collect();
                report.violation(format!(
                    "block {{{}}} appears in class {l0} (position {i0}) and class {l} (position {i})",
                    shown.join(",")
                ));
            } else {
                seen.insert(key, (l, i));
            }
        }
    }
    let expected = binom_exact(m as u64, c as i64);
    if num_bigint::BigUint::from(seen.len()) != expected {
        report.violation(format!("{} distinct blocks instead of {expected}", seen.len()));
    }
    let classes = binom_exact(m as u64 - 1, c as i64 - 1);
    if num_bigint::BigUint::from(res.classes.len()) != classes {
        report.violation(format!("{} classes instead of {classes}", res.classes.len()));
    }
    report
}
