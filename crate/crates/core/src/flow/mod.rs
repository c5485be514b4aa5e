//! Exact integer min-cost flow: a cost-scaling push-relabel solver, a
//! solution verifier, and an exhaustive oracle for small transportation
//! instances.

mod brute;
mod cost_scaling;
mod dimacs;
mod feasibility;
mod network;
mod verify;

pub use brute::{brute_force_mcf, brute_force_mcf_with_cap, DEFAULT_ORACLE_CAP, ORACLE_MAX_SIDE};
pub use cost_scaling::solve_mcf;
pub use dimacs::{parse_dimacs, to_dimacs};
pub use feasibility::is_feasible;
pub use network::{flow_cost, Capacity, FlowArc, FlowNetwork, FlowSolution, NodeId, Status};
pub use verify::{verify_solution, ArcViolation, NodeViolation, VerificationReport};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("node balances sum to {sum}, expected 0")]
    Unbalanced { sum: i128 },
    #[error("arc {arc} references a node outside the network")]
    UnknownNode { arc: usize },
    #[error("arc {arc} has invalid bounds (need 0 <= lower <= upper)")]
    InvalidBounds { arc: usize },
    #[error("arc {arc} has a positive lower bound, which is not supported")]
    NonZeroLowerBound { arc: usize },
    #[error("cost range too wide: max |cost| {max_cost} over {nodes} nodes overflows the solver's integer range")]
    CostRange { max_cost: i64, nodes: usize },
    #[error("oracle cap exceeded: {reason}")]
    OracleCapExceeded { reason: String },
    #[error("oracle only handles bipartite supply-to-demand networks: {reason}")]
    OracleShape { reason: String },
    #[error("DIMACS parse error at line {line}: {message}")]
    Dimacs { line: usize, message: String },
}
