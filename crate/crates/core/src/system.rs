//! Explicit partition systems and their text format.
//!
//! ```text
//! SPS <n> <k> <p>
//! 0 1 | 2 3 | 4 5
//! ...
//! ```
//! One partition per line, elements 0-indexed and ascending within a block,
//! blocks ordered by minimum element.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Largest system the builders will materialize.
pub const MAX_PARTITIONS: u64 = 2_000_000;

pub type Part = Vec<u32>;
pub type Partition = Vec<Part>;

/// A list of partitions of `{0, .., n-1}`, each nominally into `k` parts.
///
/// Nothing here enforces validity; that is the verifier's job.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSystem {
    pub n: usize,
    pub k: usize,
    pub partitions: Vec<Partition>,
}

impl PartitionSystem {
    pub fn new(n: usize, k: usize, partitions: Vec<Partition>) -> Self {
        Self { n, k, partitions }
    }

    pub fn empty(n: usize, k: usize) -> Self {
        Self::new(n, k, Vec::new())
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    pub fn part_count(&self) -> usize {
        self.partitions.iter().map(Vec::len).sum()
    }

    /// Sorts elements within parts, parts by minimum element and partitions
    /// lexicographically.
    pub fn canonicalize(&mut self) {
        for partition in &mut self.partitions {
            for part in partition.iter_mut() {
                part.sort_unstable();
            }
            partition.sort_by(|a, b| a.first().cmp(&b.first()).then_with(|| a.cmp(b)));
        }
        self.partitions.sort();
    }

    pub fn canonical(mut self) -> Self {
        self.canonicalize();
        self
    }

    /// Adds element `n` to a smallest part of every partition (the first such
    /// part in canonical order).
    pub fn extend(&self) -> Self {
        let new = self.n as u32;
        let partitions = self
            .partitions
            .iter()
            .map(|partition| {
                let mut partition = partition.clone();
                for part in partition.iter_mut() {
                    part.sort_unstable();
                }
                partition.sort_by(|a, b| a.first().cmp(&b.first()));
                if let Some(min) = partition.iter().map(Vec::len).min() {
                    let target = partition.iter().position(|p| p.len() == min).unwrap();
                    partition[target].push(new);
                }
                partition
            })
            .collect();
        Self::new(self.n + 1, self.k, partitions)
    }

    /// Applies `map` to every element.
    pub fn relabel(&self, map: &[u32]) -> Self {
        let partitions = self
            .partitions
            .iter()
            .map(|pt| pt.iter().map(|part| part.iter().map(|&e| map[e as usize]).collect()).collect())
            .collect();
        Self::new(self.n, self.k, partitions)
    }

    pub fn to_sps(&self) -> String {
        let mut sys = self.clone();
        sys.canonicalize();
        let mut out = String::new();
        writeln!(out, "SPS {} {} {}", sys.n, sys.k, sys.len()).unwrap();
        for partition in &sys.partitions {
            let blocks: Vec<String> = partition
                .iter()
                .map(|part| part.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
                .collect();
            writeln!(out, "{}", blocks.join(" | ")).unwrap();
        }
        out
    }

    /// Parses the SPS format. Structural problems that the verifier can name
    /// (wrong part counts, overlaps) are kept; only unreadable text is an error.
    pub fn from_sps(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "SPS" {
            return Err(Error::Parse { line: 1, msg: "expected header `SPS <n> <k> <p>`".into() });
        }
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse { line: 1, msg: format!("bad number `{s}` in header") })
        };
        let (n, k, p) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
        let mut partitions = Vec::with_capacity(p);
        for (idx, line) in lines {
            let lineno = idx + 1;
            let mut partition = Vec::new();
            for block in line.split('|') {
                let part = block
                    .split_whitespace()
                    .map(|t| {
                        let v: u32 = t.parse().map_err(|_| Error::Parse {
                            line: lineno,
                            msg: format!("bad element `{t}`"),
                        })?;
                        if v as usize >= n {
                            return Err(Error::Parse {
                                line: lineno,
                                msg: format!("element {v} outside ground set of size {n}"),
                            });
                        }
                        Ok(v)
                    })
                    .collect::<Result<Vec<u32>>>()?;
                partition.push(part);
            }
            partitions.push(partition);
        }
        if partitions.len() != p {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header promises {p} partitions, found {}", partitions.len()),
            });
        }
        Ok(Self::new(n, k, partitions))
    }
}
