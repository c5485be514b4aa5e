use std::collections::VecDeque;

use super::FlowNetwork;

struct Edge {
    to: usize,
    cap: i64,
}

/// Dinic max-flow on the residual graph used only for the saturation check.
struct MaxFlow {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl MaxFlow {
    fn new(n: usize) -> Self {
        Self {
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: i64) {
        self.adj[from].push(self.edges.len());
        self.edges.push(Edge { to, cap });
        self.adj[to].push(self.edges.len());
        self.edges.push(Edge { to: from, cap: 0 });
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                let edge = &self.edges[e];
                if edge.cap > 0 && self.level[edge.to] < 0 {
                    self.level[edge.to] = self.level[v] + 1;
                    queue.push_back(edge.to);
                }
            }
        }
    }

    // Iterative blocking-flow search; returns the amount pushed on one path.
    fn augment(&mut self, s: usize, t: usize, limit: i64) -> i64 {
        let mut path: Vec<usize> = Vec::new();
        let mut v = s;
        loop {
            if v == t {
                let pushed = path.iter().map(|&e| self.edges[e].cap).fold(limit, i64::min);
                for &e in &path {
                    self.edges[e].cap -= pushed;
                    self.edges[e ^ 1].cap += pushed;
                }
                return pushed;
            }
            let mut advanced = false;
            while self.iter[v] < self.adj[v].len() {
                let e = self.adj[v][self.iter[v]];
                let edge = &self.edges[e];
                if edge.cap > 0 && self.level[edge.to] == self.level[v] + 1 {
                    path.push(e);
                    v = edge.to;
                    advanced = true;
                    break;
                }
                self.iter[v] += 1;
            }
            if !advanced {
                // dead end: retreat and retire the edge that led here
                self.level[v] = -1;
                match path.pop() {
                    Some(e) => {
                        v = self.edges[e ^ 1].to;
                        self.iter[v] += 1;
                    }
                    None => return 0,
                }
            }
        }
    }

    fn run(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return total;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.augment(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
    }
}

/// True iff every supply can be routed to the demands within arc capacities.
///
/// Assumes `network.validate()` passed.
pub fn is_feasible(network: &FlowNetwork) -> bool {
    let n = network.node_count();
    let supply = network.total_supply();
    if supply == 0 {
        return true;
    }
    let (s, t) = (n, n + 1);
    let mut mf = MaxFlow::new(n + 2);
    for (v, &b) in network.balances().iter().enumerate() {
        if b > 0 {
            mf.add_edge(s, v, b);
        } else if b < 0 {
            mf.add_edge(v, t, -b);
        }
    }
    for arc in network.arcs() {
        let cap = arc.upper.resolve(supply).min(supply);
        if cap > 0 && arc.from != arc.to {
            mf.add_edge(arc.from.0, arc.to.0, cap);
        }
    }
    mf.run(s, t) == supply
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::Capacity;

    #[test]
    fn detects_missing_path() {
        let mut net = FlowNetwork::new();
        net.add_node(1);
        net.add_node(-1);
        assert!(!is_feasible(&net));
    }

    #[test]
    fn respects_finite_capacity() {
        let mut net = FlowNetwork::new();
        let u = net.add_node(3);
        let v = net.add_node(-3);
        net.add_arc(u, v, 0, Capacity::Finite(2));
        assert!(!is_feasible(&net));
        net.add_arc(u, v, 5, Capacity::Finite(1));
        assert!(is_feasible(&net));
    }

    #[test]
    fn hall_violation_in_bipartite() {
        // two supplies can only reach one shared demand of size 1
        let mut net = FlowNetwork::new();
        let a = net.add_node(1);
        let b = net.add_node(1);
        let x = net.add_node(-1);
        let y = net.add_node(-1);
        net.add_arc(a, x, 0, Capacity::Unbounded);
        net.add_arc(b, x, 0, Capacity::Unbounded);
        assert!(!is_feasible(&net));
        net.add_arc(b, y, 0, Capacity::Unbounded);
        assert!(is_feasible(&net));
    }
}
