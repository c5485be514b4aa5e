use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use super::assignment::{mass_balance, AssignmentSet};
use super::solve::solve_members;
use super::{FusionError, FusionOutcome, StageTrace};
use crate::graph::{ArcCoster, CostMode, CostModel, GraphError, PruneConfig};
use crate::panel::{Panel, Panelist};

/// Units per full categorical profile on each side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockImbalance {
    pub key: Vec<String>,
    pub left_units: i64,
    pub right_units: i64,
}

/// Unit totals per full categorical profile, ordered by profile.
pub fn category_blocks(left: &Panel, right: &Panel) -> Vec<BlockImbalance> {
    let mut blocks: BTreeMap<&[String], (i64, i64)> = BTreeMap::new();
    for p in &left.panelists {
        blocks.entry(&p.categorical[..]).or_default().0 += p.units;
    }
    for p in &right.panelists {
        blocks.entry(&p.categorical[..]).or_default().1 += p.units;
    }
    blocks
        .into_iter()
        .map(|(key, (l, r))| BlockImbalance {
            key: key.to_vec(),
            left_units: l,
            right_units: r,
        })
        .collect()
}

/// Checks the shared preconditions of both fusion entry points and returns
/// the unit scale.
pub(crate) fn check_inputs(left: &Panel, right: &Panel) -> Result<i64, FusionError> {
    let unit_scale = match (left.unit_scale, right.unit_scale) {
        (Some(a), Some(b)) if a == b => a,
        (Some(_), Some(_)) => return Err(GraphError::UnitScaleMismatch.into()),
        _ => return Err(GraphError::NotQuantized.into()),
    };
    if left.schema != right.schema {
        return Err(GraphError::SchemaMismatch {
            feature: "<column order>".into(),
        }
        .into());
    }
    let (lu, ru) = (left.total_units(), right.total_units());
    if lu != ru {
        return Err(FusionError::UnitsMismatch { left: lu, right: ru });
    }
    Ok(unit_scale)
}

pub(crate) fn check_mass_balance(set: &AssignmentSet, left: &Panel, right: &Panel) -> Result<(), FusionError> {
    let mb = mass_balance(set, left, right);
    if mb.is_exact() {
        Ok(())
    } else {
        Err(FusionError::Integrity(format!("mass balance violated: {mb:?}")))
    }
}

/// Fuses two quantized, normalized panels as one transportation problem.
///
/// Hard mode fails up front when some categorical profile carries different
/// unit totals on the two sides, listing those profiles.
pub fn fuse_single(
    left: &Panel,
    right: &Panel,
    model: &CostModel,
    pruning: &PruneConfig,
) -> Result<FusionOutcome, FusionError> {
    let start = Instant::now();
    let unit_scale = check_inputs(left, right)?;
    if model.mode == CostMode::Hard {
        let blocks: Vec<BlockImbalance> = category_blocks(left, right)
            .into_iter()
            .filter(|b| b.left_units != b.right_units)
            .collect();
        if !blocks.is_empty() {
            return Err(FusionError::Infeasible {
                context: "hard mode needs equal weight in every categorical profile".into(),
                blocks,
            });
        }
    }
    let coster = ArcCoster::new(*model, left.schema.categorical.len());
    let l: Vec<&Panelist> = left.panelists.iter().collect();
    let r: Vec<&Panelist> = right.panelists.iter().collect();
    let solved = solve_members(&l, &r, &coster, pruning.k_for(l.len(), r.len()), unit_scale, &|| {
        "single graph".to_string()
    })?;

    let mut units = BTreeMap::new();
    for f in &solved.flows {
        *units.entry((l[f.left].id.clone(), r[f.right].id.clone())).or_insert(0) += f.units;
    }
    let assignments = AssignmentSet::from_units(units, unit_scale);
    check_mass_balance(&assignments, left, right)?;

    let trace = StageTrace {
        stage: 0,
        features: Vec::new(),
        mode: model.mode,
        clusters: 1,
        deferred_left: 0,
        deferred_right: 0,
        matched_left: left.len(),
        matched_right: right.len(),
        residual_left: 0,
        residual_right: 0,
        residual_units: 0,
        arcs: solved.arcs,
        dummies: usize::from(solved.w_d != 0),
        fallbacks: usize::from(solved.fell_back),
        discarded_splits: 0,
        cost: solved.cost,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok(FusionOutcome {
        assignments,
        total_cost: solved.cost,
        trace: vec![trace],
    })
}
