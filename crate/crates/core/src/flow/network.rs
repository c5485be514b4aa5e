use std::fmt;

use super::FlowError;

/// Index of a node inside a [`FlowNetwork`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// Upper bound of an arc.
///
/// `Unbounded` is resolved by the solver to the network's total supply, which
/// no feasible flow can exceed on a single arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Capacity {
    Finite(i64),
    Unbounded,
}

impl Capacity {
    pub fn resolve(self, total_supply: i64) -> i64 {
        match self {
            Capacity::Finite(c) => c,
            Capacity::Unbounded => total_supply,
        }
    }

    pub fn admits(self, flow: i64) -> bool {
        match self {
            Capacity::Finite(c) => flow <= c,
            Capacity::Unbounded => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlowArc {
    pub from: NodeId,
    pub to: NodeId,
    /// Cost per unit of flow.
    pub cost: i64,
    pub lower: i64,
    pub upper: Capacity,
}

/// A min-cost-flow instance over integer units.
///
/// Node balances follow the supply convention: positive is supply, negative is
/// demand, zero is transshipment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FlowNetwork {
    balances: Vec<i64>,
    arcs: Vec<FlowArc>,
}

impl FlowNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(nodes: usize, arcs: usize) -> Self {
        Self {
            balances: Vec::with_capacity(nodes),
            arcs: Vec::with_capacity(arcs),
        }
    }

    pub fn add_node(&mut self, balance: i64) -> NodeId {
        self.balances.push(balance);
        NodeId(self.balances.len() - 1)
    }

    /// Adds an arc with lower bound 0 and returns its index.
    pub fn add_arc(&mut self, from: NodeId, to: NodeId, cost: i64, upper: Capacity) -> usize {
        self.arcs.push(FlowArc {
            from,
            to,
            cost,
            lower: 0,
            upper,
        });
        self.arcs.len() - 1
    }

    pub fn push_arc(&mut self, arc: FlowArc) -> usize {
        self.arcs.push(arc);
        self.arcs.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.balances.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn balance(&self, node: NodeId) -> i64 {
        self.balances[node.0]
    }

    pub fn set_balance(&mut self, node: NodeId, balance: i64) {
        self.balances[node.0] = balance;
    }

    pub fn balances(&self) -> &[i64] {
        &self.balances
    }

    pub fn arcs(&self) -> &[FlowArc] {
        &self.arcs
    }

    pub fn arc(&self, index: usize) -> &FlowArc {
        &self.arcs[index]
    }

    pub fn total_supply(&self) -> i64 {
        self.balances.iter().filter(|b| **b > 0).sum()
    }

    /// Largest absolute arc cost (0 for an arcless network).
    pub fn max_abs_cost(&self) -> i64 {
        self.arcs
            .iter()
            .map(|a| a.cost.unsigned_abs().min(i64::MAX as u64) as i64)
            .max()
            .unwrap_or(0)
    }

    /// Checks the structural invariants every solver relies on.
    pub fn validate(&self) -> Result<(), FlowError> {
        let n = self.balances.len();
        let mut sum: i128 = 0;
        for b in &self.balances {
            sum += *b as i128;
        }
        if sum != 0 {
            return Err(FlowError::Unbalanced { sum });
        }
        for (index, arc) in self.arcs.iter().enumerate() {
            if arc.from.0 >= n || arc.to.0 >= n {
                return Err(FlowError::UnknownNode { arc: index });
            }
            if arc.lower < 0 || !arc.upper.admits(arc.lower) {
                return Err(FlowError::InvalidBounds { arc: index });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
}

/// Per-arc flows (indexed like [`FlowNetwork::arcs`]) plus the objective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowSolution {
    pub flows: Vec<i64>,
    pub total_cost: i128,
    pub status: Status,
}

impl FlowSolution {
    pub fn infeasible() -> Self {
        Self {
            flows: Vec::new(),
            total_cost: 0,
            status: Status::Infeasible,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }

    pub fn flow(&self, arc: usize) -> i64 {
        self.flows.get(arc).copied().unwrap_or(0)
    }
}

/// Σ cost·flow over all arcs.
pub fn flow_cost(network: &FlowNetwork, flows: &[i64]) -> i128 {
    network
        .arcs()
        .iter()
        .zip(flows)
        .map(|(a, f)| a.cost as i128 * *f as i128)
        .sum()
}
