//! Cost-scaling push-relabel (successive approximation) for min-cost flow.
//!
//! Costs are multiplied by `n + 1` so that reaching 1-optimality in scaled
//! units means `1/(n+1)`-optimality in the original costs, which for integer
//! costs is exact optimality. Epsilon halves every phase.

use std::collections::VecDeque;

use super::feasibility::is_feasible;
use super::network::flow_cost;
use super::{FlowError, FlowNetwork, FlowSolution, Status};

const ALPHA: i128 = 2;

/// Solves `network` to optimality, or reports it infeasible.
///
/// Runs are deterministic: adjacency is scanned in ascending arc order and the
/// active set is a FIFO seeded in ascending node order.
pub fn solve_mcf(network: &FlowNetwork) -> Result<FlowSolution, FlowError> {
    network.validate()?;
    if let Some(arc) = network.arcs().iter().position(|a| a.lower != 0) {
        return Err(FlowError::NonZeroLowerBound { arc });
    }
    check_cost_range(network)?;
    if !is_feasible(network) {
        return Ok(FlowSolution::infeasible());
    }
    let mut solver = CostScaling::new(network);
    if !solver.run() {
        return Ok(FlowSolution::infeasible());
    }
    let flows = solver.flows();
    let total_cost = flow_cost(network, &flows);
    Ok(FlowSolution {
        flows,
        total_cost,
        status: Status::Optimal,
    })
}

fn check_cost_range(network: &FlowNetwork) -> Result<(), FlowError> {
    let max_cost = network.max_abs_cost() as i128;
    let nodes = network.node_count();
    let mult = nodes as i128 + 1;
    // prices move by at most 3·n·eps per phase and eps sums to < 2·eps0
    let prices_fit = max_cost
        .checked_mul(mult)
        .and_then(|c| c.checked_mul(8 * mult))
        .is_some();
    let objective_fits = max_cost
        .checked_mul(network.total_supply().max(1) as i128)
        .and_then(|c| c.checked_mul(network.arc_count().max(1) as i128))
        .is_some();
    if prices_fit && objective_fits {
        Ok(())
    } else {
        Err(FlowError::CostRange {
            max_cost: max_cost as i64,
            nodes,
        })
    }
}

struct CostScaling {
    n: usize,
    /// CSR offsets into `out`, length n + 1.
    start: Vec<usize>,
    /// Residual edge ids grouped by tail node, ascending edge id.
    out: Vec<u32>,
    head: Vec<u32>,
    cost: Vec<i128>,
    rcap: Vec<i64>,
    excess: Vec<i64>,
    price: Vec<i128>,
    current: Vec<usize>,
    queued: Vec<bool>,
}

impl CostScaling {
    fn new(network: &FlowNetwork) -> Self {
        let n = network.node_count();
        let m = network.arc_count();
        let supply = network.total_supply();
        let mult = n as i128 + 1;

        let mut head = Vec::with_capacity(2 * m);
        let mut cost = Vec::with_capacity(2 * m);
        let mut rcap = Vec::with_capacity(2 * m);
        let mut degree = vec![0usize; n + 1];
        for arc in network.arcs() {
            let scaled = arc.cost as i128 * mult;
            head.push(arc.to.0 as u32);
            cost.push(scaled);
            rcap.push(arc.upper.resolve(supply).min(supply.max(0)));
            head.push(arc.from.0 as u32);
            cost.push(-scaled);
            rcap.push(0);
            degree[arc.from.0] += 1;
            degree[arc.to.0] += 1;
        }
        let mut start = vec![0usize; n + 1];
        for v in 0..n {
            start[v + 1] = start[v] + degree[v];
        }
        let mut fill = start.clone();
        let mut out = vec![0u32; 2 * m];
        for (i, arc) in network.arcs().iter().enumerate() {
            out[fill[arc.from.0]] = (2 * i) as u32;
            fill[arc.from.0] += 1;
            out[fill[arc.to.0]] = (2 * i + 1) as u32;
            fill[arc.to.0] += 1;
        }

        Self {
            n,
            current: start[..n].to_vec(),
            start,
            out,
            head,
            cost,
            rcap,
            excess: network.balances().to_vec(),
            price: vec![0; n],
            queued: vec![false; n],
        }
    }

    fn run(&mut self) -> bool {
        let max_cost = self.cost.iter().map(|c| c.abs()).max().unwrap_or(0);
        let mut eps = max_cost;
        loop {
            eps = (eps / ALPHA).max(1);
            if !self.refine(eps) {
                return false;
            }
            if eps == 1 {
                return true;
            }
        }
    }

    #[inline]
    fn push(&mut self, e: usize, v: usize, w: usize, delta: i64) {
        self.rcap[e] -= delta;
        self.rcap[e ^ 1] += delta;
        self.excess[v] -= delta;
        self.excess[w] += delta;
    }

    fn refine(&mut self, eps: i128) -> bool {
        // saturate every residual edge with negative reduced cost
        for v in 0..self.n {
            for k in self.start[v]..self.start[v + 1] {
                let e = self.out[k] as usize;
                let cap = self.rcap[e];
                if cap > 0 {
                    let w = self.head[e] as usize;
                    if self.cost[e] + self.price[v] - self.price[w] < 0 {
                        self.push(e, v, w, cap);
                    }
                }
            }
        }

        let mut queue = VecDeque::new();
        for v in 0..self.n {
            self.current[v] = self.start[v];
            self.queued[v] = self.excess[v] > 0;
            if self.queued[v] {
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            self.queued[v] = false;
            if !self.discharge(v, eps, &mut queue) {
                return false;
            }
        }
        true
    }

    fn discharge(&mut self, v: usize, eps: i128, queue: &mut VecDeque<usize>) -> bool {
        let end = self.start[v + 1];
        while self.excess[v] > 0 {
            while self.current[v] < end {
                let e = self.out[self.current[v]] as usize;
                let cap = self.rcap[e];
                if cap > 0 {
                    let w = self.head[e] as usize;
                    if self.cost[e] + self.price[v] - self.price[w] < 0 {
                        let delta = cap.min(self.excess[v]);
                        let before = self.excess[w];
                        self.push(e, v, w, delta);
                        if before <= 0 && self.excess[w] > 0 && !self.queued[w] {
                            self.queued[w] = true;
                            queue.push_back(w);
                        }
                        if self.excess[v] == 0 {
                            return true;
                        }
                    }
                }
                self.current[v] += 1;
            }
            if !self.relabel(v, eps) {
                return false;
            }
        }
        true
    }

    fn relabel(&mut self, v: usize, eps: i128) -> bool {
        let mut best: Option<i128> = None;
        for k in self.start[v]..self.start[v + 1] {
            let e = self.out[k] as usize;
            if self.rcap[e] > 0 {
                let cand = self.price[self.head[e] as usize] - self.cost[e];
                best = Some(best.map_or(cand, |b| b.max(cand)));
            }
        }
        match best {
            Some(b) => {
                self.price[v] = b - eps;
                self.current[v] = self.start[v];
                true
            }
            // excess with no residual exit: cannot happen on a feasible network
            None => false,
        }
    }

    fn flows(&self) -> Vec<i64> {
        (0..self.rcap.len() / 2).map(|i| self.rcap[2 * i + 1]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::Capacity;

    fn two_by_two() -> FlowNetwork {
        let mut net = FlowNetwork::new();
        let u1 = net.add_node(2);
        let u2 = net.add_node(3);
        let v1 = net.add_node(-4);
        let v2 = net.add_node(-1);
        net.add_arc(u1, v1, 1, Capacity::Unbounded);
        net.add_arc(u1, v2, 3, Capacity::Unbounded);
        net.add_arc(u2, v1, 2, Capacity::Unbounded);
        net.add_arc(u2, v2, 1, Capacity::Unbounded);
        net
    }

    #[test]
    fn two_by_two_optimum() {
        let sol = solve_mcf(&two_by_two()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert_eq!(sol.flows, vec![2, 0, 2, 1]);
        assert_eq!(sol.total_cost, 7);
    }

    #[test]
    fn single_pair() {
        let mut net = FlowNetwork::new();
        let u = net.add_node(5);
        let v = net.add_node(-5);
        net.add_arc(u, v, 3, Capacity::Unbounded);
        let sol = solve_mcf(&net).unwrap();
        assert_eq!(sol.flows, vec![5]);
        assert_eq!(sol.total_cost, 15);
    }

    #[test]
    fn no_arcs_is_infeasible() {
        let mut net = FlowNetwork::new();
        net.add_node(1);
        net.add_node(-1);
        let sol = solve_mcf(&net).unwrap();
        assert_eq!(sol.status, Status::Infeasible);
        assert!(sol.flows.is_empty());
    }

    #[test]
    fn empty_network_is_trivially_optimal() {
        let sol = solve_mcf(&FlowNetwork::new()).unwrap();
        assert!(sol.is_optimal());
        assert_eq!(sol.total_cost, 0);
    }

    #[test]
    fn transshipment_and_negative_costs() {
        // s -> a -> t costs 4 + (-3); s -> t direct cost 2
        let mut net = FlowNetwork::new();
        let s = net.add_node(3);
        let a = net.add_node(0);
        let t = net.add_node(-3);
        net.add_arc(s, a, 4, Capacity::Finite(2));
        net.add_arc(a, t, -3, Capacity::Unbounded);
        net.add_arc(s, t, 2, Capacity::Unbounded);
        let sol = solve_mcf(&net).unwrap();
        assert_eq!(sol.flows, vec![2, 2, 1]);
        assert_eq!(sol.total_cost, 4);
    }

    #[test]
    fn rejects_lower_bounds() {
        let mut net = FlowNetwork::new();
        let u = net.add_node(1);
        let v = net.add_node(-1);
        net.push_arc(crate::flow::FlowArc {
            from: u,
            to: v,
            cost: 0,
            lower: 1,
            upper: Capacity::Finite(1),
        });
        assert_eq!(solve_mcf(&net), Err(FlowError::NonZeroLowerBound { arc: 0 }));
    }

    #[test]
    fn rejects_unbalanced() {
        let mut net = FlowNetwork::new();
        net.add_node(1);
        assert!(matches!(solve_mcf(&net), Err(FlowError::Unbalanced { .. })));
    }
}
