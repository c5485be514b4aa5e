use super::assignment::{pair_flows, PairFlow};
use super::balance::add_balancing_node;
use super::FusionError;
use crate::flow::{solve_mcf, verify_solution};
use crate::graph::{build_from_members, ArcCoster, BipartiteGraph};
use crate::panel::Panelist;

/// Result of solving one (possibly balanced) member graph.
#[derive(Debug, Clone)]
pub(crate) struct Solved {
    /// Positions are relative to the member lists.
    pub flows: Vec<PairFlow>,
    pub cost: i128,
    pub w_d: i64,
    pub arcs: usize,
    pub fell_back: bool,
}

fn build(
    left: &[&Panelist],
    right: &[&Panelist],
    coster: &ArcCoster,
    prune_k: Option<usize>,
    unit_scale: i64,
) -> (BipartiteGraph, i64) {
    let mut g = build_from_members(left, right, coster, prune_k, unit_scale);
    let w_d = add_balancing_node(&mut g);
    (g, w_d)
}

/// Builds, balances, solves and verifies; an infeasible pruned graph is
/// rebuilt unpruned and solved again.
pub(crate) fn solve_members(
    left: &[&Panelist],
    right: &[&Panelist],
    coster: &ArcCoster,
    prune_k: Option<usize>,
    unit_scale: i64,
    context: &dyn Fn() -> String,
) -> Result<Solved, FusionError> {
    let (mut graph, mut w_d) = build(left, right, coster, prune_k, unit_scale);
    let mut solution = solve_mcf(&graph.network)?;
    let mut fell_back = false;
    if !solution.is_optimal() && graph.pruned {
        log::debug!("{}: pruned graph infeasible, re-solving unpruned", context());
        (graph, w_d) = build(left, right, coster, None, unit_scale);
        solution = solve_mcf(&graph.network)?;
        fell_back = true;
    }
    if !solution.is_optimal() {
        return Err(FusionError::Infeasible {
            context: context(),
            blocks: Vec::new(),
        });
    }
    let report = verify_solution(&graph.network, &solution);
    if !report.passed() {
        return Err(FusionError::Verification {
            context: context(),
            detail: format!("{report:?}"),
        });
    }
    Ok(Solved {
        flows: pair_flows(&graph.network, &solution, &graph.maps),
        cost: solution.total_cost,
        w_d,
        arcs: graph.network.arc_count(),
        fell_back,
    })
}
