//! Realizing colour classes of set *types* as concrete disjoint parts.
//!
//! The ground set is split into consecutive groups. A profile lists how many
//! elements a part takes from each group; a class is a multiset of profiles
//! whose per-group totals equal the group sizes. [`detach`] turns every class
//! into a partition of the ground set with parts of the requested profiles such
//! that no concrete part occurs twice across all classes.
//!
//! Elements are handed out one at a time. Before element `v` of group `w` is
//! placed, every part is summarized by its *content* (profile plus elements
//! already received). Giving `v` to each part with room in `w` with probability
//! `need_w / rem_w` is a fractional assignment in which every class receives
//! `v` exactly once and the number of parts with each content stays within the
//! number of sets of that profile extending it. An integral flow with the same
//! bounds therefore exists and is found by max-flow; at the end each full
//! content is used at most once. Feasibility only requires that no profile is
//! used more often than it has sets.

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::combinatorics::binom_exact;
use crate::error::{invalid, Error, Result};
use crate::flow::FlowNet;
use crate::system::Partition;

/// Consecutive groups `offsets[g] .. offsets[g] + sizes[g]` of the ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
}

impl Layout {
    pub fn new(sizes: Vec<usize>) -> Self {
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &s in &sizes {
            offsets.push(acc);
            acc += s;
        }
        Self { sizes, offsets }
    }

    pub fn uniform(groups: usize, size: usize) -> Self {
        Self::new(vec![size; groups])
    }

    pub fn groups(&self) -> usize {
        self.sizes.len()
    }

    pub fn size(&self, g: usize) -> usize {
        self.sizes[g]
    }

    pub fn offset(&self, g: usize) -> usize {
        self.offsets[g]
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Group index of every element.
    pub fn group_of(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n());
        for (g, &s) in self.sizes.iter().enumerate() {
            out.extend(std::iter::repeat(g).take(s));
        }
        out
    }

    /// Number of sets with the given profile.
    pub fn universe(&self, profile: &[u32]) -> BigUint {
        let mut acc = BigUint::one();
        for (g, &t) in profile.iter().enumerate() {
            acc *= binom_exact(self.sizes[g] as u64, t as i64);
        }
        acc
    }

    /// A uniformly random permutation of each group, as an element map.
    /// Group-preserving permutations fix every profile, so they map a valid
    /// realization to another valid one.
    pub fn shuffle_map(&self, seed: u64) -> Vec<u32> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut map = Vec::with_capacity(self.n());
        for g in 0..self.groups() {
            let mut block: Vec<u32> =
                (self.offsets[g]..self.offsets[g] + self.sizes[g]).map(|e| e as u32).collect();
            block.shuffle(&mut rng);
            map.extend(block);
        }
        map
    }
}

/// Classes over a common list of profiles.
#[derive(Debug, Clone)]
pub struct DetachProblem {
    pub layout: Layout,
    pub profiles: Vec<Vec<u32>>,
    /// Each class lists profile indices, one per part.
    pub classes: Vec<Vec<usize>>,
}

impl DetachProblem {
    /// Checks per-class degree sums and per-profile usage against the universe.
    pub fn validate(&self) -> Result<()> {
        let groups = self.layout.groups();
        for (i, p) in self.profiles.iter().enumerate() {
            if p.len() != groups {
                return invalid(format!("profile {i} has {} entries for {groups} groups", p.len()));
            }
            if p.iter().all(|&t| t == 0) {
                return invalid(format!("profile {i} describes the empty set"));
            }
            for (g, &t) in p.iter().enumerate() {
                if t as usize > self.layout.size(g) {
                    return invalid(format!("profile {i} takes {t} elements from group {g}"));
                }
            }
        }
        let mut usage = vec![0u64; self.profiles.len()];
        for (ci, class) in self.classes.iter().enumerate() {
            let mut degree = vec![0usize; groups];
            for &pi in class {
                let profile = self.profiles.get(pi).ok_or_else(|| {
                    Error::InvalidParams(format!("class {ci} uses unknown profile {pi}"))
                })?;
                usage[pi] += 1;
                for (g, &t) in profile.iter().enumerate() {
                    degree[g] += t as usize;
                }
            }
            for g in 0..groups {
                if degree[g] != self.layout.size(g) {
                    return invalid(format!(
                        "class {ci} covers {} elements of group {g} of size {}",
                        degree[g],
                        self.layout.size(g)
                    ));
                }
            }
        }
        for (pi, &used) in usage.iter().enumerate() {
            let universe = self.layout.universe(&self.profiles[pi]);
            if BigUint::from(used) > universe {
                return invalid(format!(
                    "profile {:?} used {used} times but only {universe} sets exist",
                    self.profiles[pi]
                ));
            }
        }
        Ok(())
    }
}

fn sat_binom(x: usize, y: i64) -> u64 {
    let b = binom_exact(x as u64, y);
    u64::try_from(b).unwrap_or(u64::MAX)
}

/// Concrete realization; output classes keep the input order and parts keep
/// the order of the class's profile list.
pub fn detach(problem: &DetachProblem) -> Result<Vec<Partition>> {
    problem.validate()?;
    let layout = &problem.layout;
    let groups = layout.groups();
    let profiles = &problem.profiles;
    let stride = profiles.iter().map(|p| p.iter().sum::<u32>() as usize).max().unwrap_or(0);

    let mut class_start = Vec::with_capacity(problem.classes.len() + 1);
    let mut part_profile: Vec<u32> = Vec::new();
    class_start.push(0usize);
    for class in &problem.classes {
        part_profile.extend(class.iter().map(|&p| p as u32));
        class_start.push(part_profile.len());
    }
    let parts = part_profile.len();
    let mut content = vec![0u32; parts * stride];
    let mut len = vec![0u16; parts];

    // Product over later groups of binom(size_g, profile_g), saturating.
    let mut tail = vec![vec![1u64; profiles.len()]; groups + 1];
    for g in (0..groups).rev() {
        for (pi, p) in profiles.iter().enumerate() {
            tail[g][pi] = tail[g + 1][pi].saturating_mul(sat_binom(layout.size(g), p[g] as i64));
        }
    }

    let mut fill = vec![0u16; parts];
    let mut node_of = vec![u32::MAX; parts];
    for w in 0..groups {
        let active: Vec<usize> = (0..parts).filter(|&p| profiles[part_profile[p] as usize][w] > 0).collect();
        fill.iter_mut().for_each(|f| *f = 0);
        let size = layout.size(w);
        for step in 0..size {
            let v = (layout.offset(w) + step) as u32;
            let rem = size - step;

            // Content nodes for parts with room in w.
            let mut nodes: Vec<(u32, u16)> = Vec::new(); // (profile, fill)
            let mut node_count: Vec<u64> = Vec::new();
            {
                let mut index: FxHashMap<(u32, &[u32]), u32> = FxHashMap::default();
                for &p in &active {
                    let pi = part_profile[p];
                    if fill[p] as u32 >= profiles[pi as usize][w] {
                        node_of[p] = u32::MAX;
                        continue;
                    }
                    let key = (pi, &content[p * stride..p * stride + len[p] as usize]);
                    let id = *index.entry(key).or_insert_with(|| {
                        nodes.push((pi, fill[p]));
                        node_count.push(0);
                        (nodes.len() - 1) as u32
                    });
                    node_count[id as usize] += 1;
                    node_of[p] = id;
                }
            }

            // s = 0, t = 1, classes from 2, then content nodes.
            let classes = problem.classes.len();
            let base = 2 + classes;
            let mut net = FlowNet::new(base + nodes.len());
            let mut class_edges: Vec<(usize, u32, usize)> = Vec::new(); // (edge, node, part)
            let mut class_edge_start = Vec::with_capacity(classes + 1);
            let mut seen: Vec<u32> = vec![u32::MAX; nodes.len()];
            let mut slot: Vec<usize> = vec![0; nodes.len()];
            let mut caps: Vec<u64> = Vec::new();
            for c in 0..classes {
                net.add_edge(0, 2 + c, 1);
                class_edge_start.push(class_edges.len());
                let first = class_edges.len();
                for p in class_start[c]..class_start[c + 1] {
                    let node = node_of[p];
                    if node == u32::MAX || profiles[part_profile[p] as usize][w] == 0 {
                        continue;
                    }
                    if seen[node as usize] == c as u32 && slot[node as usize] >= first {
                        caps[slot[node as usize]] += 1;
                    } else {
                        seen[node as usize] = c as u32;
                        slot[node as usize] = class_edges.len();
                        class_edges.push((0, node, p));
                        caps.push(1);
                    }
                }
                for i in first..class_edges.len() {
                    let node = class_edges[i].1 as usize;
                    class_edges[i].0 = net.add_edge(2 + c, base + node, caps[i]);
                }
            }
            class_edge_start.push(class_edges.len());

            // Load bounds per node.
            let mut sink_edges = Vec::with_capacity(nodes.len());
            let mut lower_total = 0u64;
            let mut extra = Vec::with_capacity(nodes.len());
            for (id, &(pi, f)) in nodes.iter().enumerate() {
                let need = profiles[pi as usize][w] as i64 - f as i64;
                let later = tail[w + 1][pi as usize];
                let keep = later.saturating_mul(sat_binom(rem - 1, need));
                let demand = later.saturating_mul(sat_binom(rem - 1, need - 1));
                let rc = node_count[id];
                let lower = rc.saturating_sub(keep);
                let upper = rc.min(demand);
                if lower > upper {
                    return Err(Error::Invariant(format!(
                        "content bound collapse at element {v}: lower {lower} > upper {upper}"
                    )));
                }
                lower_total += lower;
                sink_edges.push(net.add_edge(base + id, 1, lower));
                extra.push(upper - lower);
            }
            let got = net.max_flow(0, 1);
            if got != lower_total {
                return Err(Error::Invariant(format!(
                    "lower bounds not met at element {v}: routed {got} of {lower_total}"
                )));
            }
            for (e, x) in sink_edges.iter().zip(&extra) {
                net.raise_cap(*e, *x);
            }
            let got = got + net.max_flow(0, 1);
            if got != classes as u64 {
                return Err(Error::Invariant(format!(
                    "only {got} of {classes} classes received element {v}"
                )));
            }

            for c in 0..classes {
                let chosen = (class_edge_start[c]..class_edge_start[c + 1])
                    .find(|&i| net.flow(class_edges[i].0) > 0)
                    .ok_or_else(|| Error::Invariant(format!("class {c} unassigned at {v}")))?;
                let node = class_edges[chosen].1;
                // Any part of the class with this content may take v.
                let p = (class_start[c]..class_start[c + 1])
                    .find(|&p| node_of[p] == node)
                    .expect("edge implies a part with this content");
                node_of[p] = u32::MAX;
                content[p * stride + len[p] as usize] = v;
                len[p] += 1;
                fill[p] += 1;
            }
        }
    }

    let mut out = Vec::with_capacity(problem.classes.len());
    for c in 0..problem.classes.len() {
        let partition = (class_start[c]..class_start[c + 1])
            .map(|p| content[p * stride..p * stride + len[p] as usize].to_vec())
            .collect();
        out.push(partition);
    }
    Ok(out)
}
