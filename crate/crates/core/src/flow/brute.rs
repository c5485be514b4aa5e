//! Exhaustive oracle for small transportation instances.
//!
//! Walks the arcs grouped by supply node and tries every integer amount on
//! each arc, memoising on (arc position, remaining demand vector). The memo
//! only merges identical subproblems, so the search still covers every
//! integer allocation.

use std::collections::HashMap;

use super::network::flow_cost;
use super::{FlowError, FlowNetwork, FlowSolution, Status};

pub const DEFAULT_ORACLE_CAP: i64 = 64;
/// Maximum supply or demand nodes the oracle accepts.
pub const ORACLE_MAX_SIDE: usize = 8;

pub fn brute_force_mcf(network: &FlowNetwork) -> Result<FlowSolution, FlowError> {
    brute_force_mcf_with_cap(network, DEFAULT_ORACLE_CAP)
}

struct Step {
    arc: usize,
    slot: usize,
    cost: i64,
    cap: i64,
    /// Last arc of its supply node: the remainder must go here.
    closes_supply: bool,
}

struct Search<'a> {
    steps: &'a [Step],
    /// Supply still to ship from nodes strictly after step k's node.
    later_supply: Vec<i64>,
    memo: HashMap<(u16, u64), Option<i64>>,
}

fn pack(r: &[i64]) -> u64 {
    r.iter().fold(0u64, |acc, &x| (acc << 8) | x as u64)
}

impl Search<'_> {
    fn best(&mut self, k: usize, remaining: &mut [i64]) -> Option<i64> {
        if k == self.steps.len() {
            return remaining.iter().all(|&r| r == 0).then_some(0);
        }
        let key = (k as u16, pack(remaining));
        if let Some(v) = self.memo.get(&key) {
            return *v;
        }
        let result = self.explore(k, remaining).map(|(cost, _)| cost);
        self.memo.insert(key, result);
        result
    }

    // Returns (cost, amount) of the best choice at step k; smallest amount wins ties.
    fn explore(&mut self, k: usize, remaining: &mut [i64]) -> Option<(i64, i64)> {
        let step = &self.steps[k];
        let (slot, cost, cap, closes) = (step.slot, step.cost, step.cap, step.closes_supply);
        let supply_left = remaining.iter().sum::<i64>() - self.later_supply[k];
        if supply_left < 0 {
            return None;
        }
        let hi = supply_left.min(remaining[slot]).min(cap);
        let lo = if closes { supply_left } else { 0 };
        let mut best: Option<(i64, i64)> = None;
        for x in lo..=hi {
            remaining[slot] -= x;
            let tail = self.best(k + 1, remaining);
            remaining[slot] += x;
            if let Some(t) = tail {
                let total = t + cost * x;
                if best.is_none_or(|(b, _)| total < b) {
                    best = Some((total, x));
                }
            }
        }
        best
    }
}

/// Exhaustive min-cost search; `cap` bounds total supply (at most 255).
pub fn brute_force_mcf_with_cap(network: &FlowNetwork, cap: i64) -> Result<FlowSolution, FlowError> {
    network.validate()?;
    let cap = cap.min(255);
    let balances = network.balances();
    let total = network.total_supply();
    if total > cap {
        return Err(FlowError::OracleCapExceeded {
            reason: format!("total supply {total} > cap {cap}"),
        });
    }

    let supplies: Vec<usize> = (0..balances.len()).filter(|&v| balances[v] > 0).collect();
    let demands: Vec<usize> = (0..balances.len()).filter(|&v| balances[v] < 0).collect();
    if supplies.len() > ORACLE_MAX_SIDE || demands.len() > ORACLE_MAX_SIDE {
        return Err(FlowError::OracleCapExceeded {
            reason: format!(
                "{} supply / {} demand nodes, max {ORACLE_MAX_SIDE} per side",
                supplies.len(),
                demands.len()
            ),
        });
    }
    let mut slot_of = vec![usize::MAX; balances.len()];
    for (i, &d) in demands.iter().enumerate() {
        slot_of[d] = i;
    }
    for (i, arc) in network.arcs().iter().enumerate() {
        if arc.lower != 0 {
            return Err(FlowError::NonZeroLowerBound { arc: i });
        }
        if balances[arc.from.0] <= 0 || balances[arc.to.0] >= 0 {
            return Err(FlowError::OracleShape {
                reason: format!("arc {i} does not run from a supply node to a demand node"),
            });
        }
    }

    let mut steps = Vec::new();
    let mut later_supply = Vec::new();
    let mut supply_after = total;
    for &u in &supplies {
        supply_after -= balances[u];
        let arcs: Vec<usize> = (0..network.arc_count())
            .filter(|&i| network.arc(i).from.0 == u)
            .collect();
        if arcs.is_empty() {
            return Ok(FlowSolution::infeasible());
        }
        for (j, &i) in arcs.iter().enumerate() {
            let arc = network.arc(i);
            steps.push(Step {
                arc: i,
                slot: slot_of[arc.to.0],
                cost: arc.cost,
                cap: arc.upper.resolve(total),
                closes_supply: j + 1 == arcs.len(),
            });
            later_supply.push(supply_after);
        }
    }
    if steps.is_empty() && total > 0 {
        return Ok(FlowSolution::infeasible());
    }

    let mut search = Search {
        steps: &steps,
        later_supply,
        memo: HashMap::new(),
    };
    let mut remaining: Vec<i64> = demands.iter().map(|&d| -balances[d]).collect();
    if search.best(0, &mut remaining).is_none() {
        return Ok(FlowSolution::infeasible());
    }

    let mut flows = vec![0i64; network.arc_count()];
    for k in 0..steps.len() {
        let (_, x) = search
            .explore(k, &mut remaining)
            .expect("memoised optimum is reachable");
        flows[steps[k].arc] = x;
        remaining[steps[k].slot] -= x;
    }
    Ok(FlowSolution {
        total_cost: flow_cost(network, &flows),
        flows,
        status: Status::Optimal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::Capacity;

    #[test]
    fn two_by_two() {
        let mut net = FlowNetwork::new();
        let u1 = net.add_node(2);
        let u2 = net.add_node(3);
        let v1 = net.add_node(-4);
        let v2 = net.add_node(-1);
        for (a, b, c) in [(u1, v1, 1), (u1, v2, 3), (u2, v1, 2), (u2, v2, 1)] {
            net.add_arc(a, b, c, Capacity::Unbounded);
        }
        let sol = brute_force_mcf(&net).unwrap();
        assert_eq!(sol.total_cost, 7);
        assert_eq!(sol.flows, vec![2, 0, 2, 1]);
    }

    #[test]
    fn symmetric_split() {
        let mut net = FlowNetwork::new();
        let u = net.add_node(2);
        let v1 = net.add_node(-1);
        let v2 = net.add_node(-1);
        net.add_arc(u, v1, 5, Capacity::Unbounded);
        net.add_arc(u, v2, 5, Capacity::Unbounded);
        let sol = brute_force_mcf(&net).unwrap();
        assert_eq!(sol.total_cost, 10);
        assert_eq!(sol.flows.iter().sum::<i64>(), 2);
    }

    #[test]
    fn no_arcs_infeasible() {
        let mut net = FlowNetwork::new();
        net.add_node(1);
        net.add_node(-1);
        assert_eq!(brute_force_mcf(&net).unwrap().status, Status::Infeasible);
    }

    #[test]
    fn unreachable_demand_infeasible() {
        let mut net = FlowNetwork::new();
        let u = net.add_node(2);
        let v1 = net.add_node(-1);
        net.add_node(-1);
        net.add_arc(u, v1, 1, Capacity::Unbounded);
        assert_eq!(brute_force_mcf(&net).unwrap().status, Status::Infeasible);
    }

    #[test]
    fn cap_exceeded() {
        let mut net = FlowNetwork::new();
        let u = net.add_node(65);
        let v = net.add_node(-65);
        net.add_arc(u, v, 1, Capacity::Unbounded);
        assert!(matches!(
            brute_force_mcf(&net),
            Err(FlowError::OracleCapExceeded { .. })
        ));
        assert!(brute_force_mcf_with_cap(&net, 100).unwrap().is_optimal());
    }

    #[test]
    fn rejects_transshipment() {
        let mut net = FlowNetwork::new();
        let u = net.add_node(1);
        let t = net.add_node(0);
        let v = net.add_node(-1);
        net.add_arc(u, t, 0, Capacity::Unbounded);
        net.add_arc(t, v, 0, Capacity::Unbounded);
        assert!(matches!(brute_force_mcf(&net), Err(FlowError::OracleShape { .. })));
    }
}
