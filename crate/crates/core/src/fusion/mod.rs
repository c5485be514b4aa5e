//! Single-graph and iterative partitioned fusion.

mod assignment;
mod balance;
mod iterative;
mod partition;
mod residual;
mod single;
mod solve;

pub use assignment::{
    generate_assigned_pairs, mass_balance, AssignedPair, AssignmentSet, MassBalance, Side, UnitDiscrepancy,
};
pub use balance::{add_balancing_node, balance_cluster};
pub use iterative::{fuse_iterative, IterativeOptions};
pub use partition::{partition, Cluster, Partition, RelaxationSchedule};
pub use residual::{apply_no_split, update_residuals, Residuals};
pub use single::{category_blocks, fuse_single, BlockImbalance};

use serde::Serialize;
use thiserror::Error;

use crate::flow::FlowError;
use crate::graph::{CostMode, GraphError};

#[derive(Debug, Error)]
pub enum FusionError {
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("infeasible: {context}{}", describe_blocks(.blocks))]
    Infeasible {
        context: String,
        blocks: Vec<BlockImbalance>,
    },
    #[error("solution failed verification in {context}: {detail}")]
    Verification { context: String, detail: String },
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("panels carry different unit totals: left {left}, right {right}")]
    UnitsMismatch { left: i64, right: i64 },
    #[error("unknown categorical feature `{0}`")]
    UnknownFeature(String),
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("worker pool: {0}")]
    Pool(String),
}

fn describe_blocks(blocks: &[BlockImbalance]) -> String {
    blocks
        .iter()
        .map(|b| {
            format!(
                "\n  block [{}]: left {} units, right {} units",
                b.key.join(","),
                b.left_units,
                b.right_units
            )
        })
        .collect()
}

/// Counts for one stage of a fusion run. Single-graph fusion reports one
/// unpartitioned stage.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageTrace {
    pub stage: usize,
    pub features: Vec<String>,
    pub mode: CostMode,
    pub clusters: usize,
    pub deferred_left: usize,
    pub deferred_right: usize,
    /// Panelists whose weight was exhausted during this stage.
    pub matched_left: usize,
    pub matched_right: usize,
    /// Panelists still holding weight after this stage.
    pub residual_left: usize,
    pub residual_right: usize,
    pub residual_units: i64,
    pub arcs: usize,
    pub dummies: usize,
    pub fallbacks: usize,
    /// Left panelists whose split assignments were discarded.
    pub discarded_splits: usize,
    pub cost: i128,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FusionOutcome {
    pub assignments: AssignmentSet,
    /// Sum of arc cost × units over all kept flows.
    pub total_cost: i128,
    pub trace: Vec<StageTrace>,
}
