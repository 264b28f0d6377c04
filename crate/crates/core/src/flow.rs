//! Dinic max-flow with integer capacities.
//!
//! Flow already routed is kept between calls to [`FlowNet::max_flow`], so
//! capacities can be raised and the flow augmented further. Adjacency lists are
//! scanned in insertion order, which makes results deterministic.

#[derive(Debug, Clone, Copy)]
struct Edge {
    to: u32,
    cap: u64,
}

#[derive(Debug, Default)]
pub(crate) struct FlowNet {
    edges: Vec<Edge>,
    adj: Vec<Vec<u32>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNet {
    pub fn new(nodes: usize) -> Self {
        Self { edges: Vec::new(), adj: vec![Vec::new(); nodes], level: Vec::new(), iter: Vec::new() }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: u64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to: to as u32, cap });
        self.edges.push(Edge { to: from as u32, cap: 0 });
        self.adj[from].push(id as u32);
        self.adj[to].push(id as u32 + 1);
        id
    }

    /// Flow currently routed through a forward edge.
    pub fn flow(&self, edge: usize) -> u64 {
        self.edges[edge ^ 1].cap
    }

    pub fn raise_cap(&mut self, edge: usize, extra: u64) {
        self.edges[edge].cap += extra;
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.clear();
        self.level.resize(self.adj.len(), -1);
        let mut queue = std::collections::VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let edge = self.edges[e as usize];
                if edge.cap > 0 && self.level[edge.to as usize] < 0 {
                    self.level[edge.to as usize] = self.level[u] + 1;
                    queue.push_back(edge.to as usize);
                }
            }
        }
        self.level[t] >= 0
    }

    /// Blocking flow in the level graph, found with an explicit stack.
    fn blocking(&mut self, s: usize, t: usize) -> u64 {
        let mut total = 0u64;
        let mut path: Vec<u32> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let push = path.iter().map(|&e| self.edges[e as usize].cap).min().unwrap_or(0);
                for &e in &path {
                    self.edges[e as usize].cap -= push;
                    self.edges[e as usize ^ 1].cap += push;
                }
                total += push;
                path.clear();
                u = s;
                continue;
            }
            let mut advanced = false;
            while self.iter[u] < self.adj[u].len() {
                let e = self.adj[u][self.iter[u]];
                let edge = self.edges[e as usize];
                if edge.cap > 0 && self.level[edge.to as usize] == self.level[u] + 1 {
                    path.push(e);
                    u = edge.to as usize;
                    advanced = true;
                    break;
                }
                self.iter[u] += 1;
            }
            if advanced {
                continue;
            }
            if u == s {
                return total;
            }
            self.level[u] = -1;
            let e = path.pop().unwrap();
            u = self.edges[e as usize ^ 1].to as usize;
            self.iter[u] += 1;
        }
    }

    /// Augments until no path remains; returns the amount added by this call.
    pub fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let mut added = 0;
        while self.bfs(s, t) {
            self.iter.clear();
            self.iter.resize(self.adj.len(), 0);
            added += self.blocking(s, t);
        }
        added
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_network() {
        // CLRS example with max flow 23.
        let mut net = FlowNet::new(6);
        for (u, v, c) in [
            (0, 1, 16),
            (0, 2, 13),
            (1, 3, 12),
            (2, 1, 4),
            (2, 4, 14),
            (3, 2, 9),
            (3, 5, 20),
            (4, 3, 7),
            (4, 5, 4),
        ] {
            net.add_edge(u, v, c);
        }
        assert_eq!(net.max_flow(0, 5), 23);
        assert_eq!(net.max_flow(0, 5), 0);
    }

    #[test]
    fn raising_capacity_continues_flow() {
        let mut net = FlowNet::new(3);
        let a = net.add_edge(0, 1, 2);
        net.add_edge(1, 2, 5);
        assert_eq!(net.max_flow(0, 2), 2);
        net.raise_cap(a, 10);
        assert_eq!(net.max_flow(0, 2), 3);
        assert_eq!(net.flow(a), 5);
    }

    #[test]
    fn bipartite_matching() {
        // 3x3 bipartite graph with a perfect matching that greedy order misses.
        let mut net = FlowNet::new(8);
        for l in 0..3 {
            net.add_edge(0, 1 + l, 1);
            net.add_edge(4 + l, 7, 1);
        }
        for (l, r) in [(0, 0), (0, 1), (1, 0), (2, 1), (2, 2)] {
            net.add_edge(1 + l, 4 + r, 1);
        }
        assert_eq!(net.max_flow(0, 7), 3);
    }
}
