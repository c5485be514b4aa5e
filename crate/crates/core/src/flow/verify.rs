use super::network::flow_cost;
use super::{FlowNetwork, FlowSolution, NodeId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeViolation {
    pub node: NodeId,
    pub expected: i64,
    pub net_outflow: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcViolation {
    pub arc: usize,
    pub flow: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub node_violations: Vec<NodeViolation>,
    pub arc_violations: Vec<ArcViolation>,
    /// Set when the solution carries a different number of flows than arcs.
    pub length_mismatch: Option<(usize, usize)>,
    pub recomputed_cost: i128,
    pub reported_cost: i128,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.node_violations.is_empty()
            && self.arc_violations.is_empty()
            && self.length_mismatch.is_none()
            && self.recomputed_cost == self.reported_cost
    }
}

/// Checks mass balance, arc bounds and the reported objective of `solution`.
///
/// Missing flow entries count as zero; the mismatch is still reported.
pub fn verify_solution(network: &FlowNetwork, solution: &FlowSolution) -> VerificationReport {
    let m = network.arc_count();
    let length_mismatch = (solution.flows.len() != m).then_some((solution.flows.len(), m));
    let flows: Vec<i64> = (0..m).map(|i| solution.flow(i)).collect();

    let mut net_out = vec![0i64; network.node_count()];
    let mut arc_violations = Vec::new();
    for (i, (arc, &f)) in network.arcs().iter().zip(&flows).enumerate() {
        net_out[arc.from.0] += f;
        net_out[arc.to.0] -= f;
        if f < arc.lower || !arc.upper.admits(f) {
            arc_violations.push(ArcViolation { arc: i, flow: f });
        }
    }
    let node_violations = network
        .balances()
        .iter()
        .zip(&net_out)
        .enumerate()
        .filter(|(_, (b, out))| b != out)
        .map(|(v, (&expected, &net_outflow))| NodeViolation {
            node: NodeId(v),
            expected,
            net_outflow,
        })
        .collect();

    VerificationReport {
        node_violations,
        arc_violations,
        length_mismatch,
        recomputed_cost: flow_cost(network, &flows),
        reported_cost: solution.total_cost,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{solve_mcf, Capacity, Status};

    fn two_by_two() -> FlowNetwork {
        let mut net = FlowNetwork::new();
        let u1 = net.add_node(2);
        let u2 = net.add_node(3);
        let v1 = net.add_node(-4);
        let v2 = net.add_node(-1);
        for (a, b, c) in [(u1, v1, 1), (u1, v2, 3), (u2, v1, 2), (u2, v2, 1)] {
            net.add_arc(a, b, c, Capacity::Unbounded);
        }
        net
    }

    #[test]
    fn optimal_two_by_two_passes() {
        let net = two_by_two();
        let sol = solve_mcf(&net).unwrap();
        let report = verify_solution(&net, &sol);
        assert!(report.passed(), "{report:?}");
        assert!(report.node_violations.is_empty());
    }

    #[test]
    fn partial_flow_flags_u1() {
        let net = two_by_two();
        let sol = FlowSolution {
            flows: vec![1, 0, 0, 0],
            total_cost: 1,
            status: Status::Optimal,
        };
        let report = verify_solution(&net, &sol);
        assert!(!report.passed());
        let u1 = report.node_violations.iter().find(|v| v.node == NodeId(0)).unwrap();
        assert_eq!((u1.expected, u1.net_outflow), (2, 1));
    }

    #[test]
    fn empty_is_vacuous() {
        let sol = FlowSolution {
            flows: vec![],
            total_cost: 0,
            status: Status::Optimal,
        };
        assert!(verify_solution(&FlowNetwork::new(), &sol).passed());
    }

    #[test]
    fn wrong_cost_and_bound_violation() {
        let mut net = FlowNetwork::new();
        let u = net.add_node(2);
        let v = net.add_node(-2);
        net.add_arc(u, v, 4, Capacity::Finite(1));
        let sol = FlowSolution {
            flows: vec![2],
            total_cost: 7,
            status: Status::Optimal,
        };
        let report = verify_solution(&net, &sol);
        assert_eq!(report.arc_violations, vec![ArcViolation { arc: 0, flow: 2 }]);
        assert_eq!(report.recomputed_cost, 8);
        assert!(!report.passed());
    }
}
