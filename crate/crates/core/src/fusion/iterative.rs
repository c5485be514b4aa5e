use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use rayon::prelude::*;

use super::assignment::{AssignedPair, AssignmentSet};
use super::partition::{partition, RelaxationSchedule};
use super::residual::update_residuals;
use super::single::{check_inputs, check_mass_balance};
use super::solve::{solve_members, Solved};
use super::{FusionError, FusionOutcome, StageTrace};
use crate::graph::{ArcCoster, CostMode, CostModel, PruneConfig, DEFAULT_COST_SCALE};
use crate::panel::Panel;
use crate::panel::{Panelist, DEFAULT_PENALTY_FACTOR};

#[derive(Debug, Clone, PartialEq)]
pub struct IterativeOptions {
    pub cost_scale: i64,
    pub penalty: i64,
    /// Mode per stage; partitioned stages default to hard. The final stage
    /// always runs soft.
    pub stage_modes: Option<Vec<CostMode>>,
    pub pruning: PruneConfig,
    pub no_split: bool,
    pub workers: usize,
}

impl Default for IterativeOptions {
    fn default() -> Self {
        Self {
            cost_scale: DEFAULT_COST_SCALE,
            penalty: DEFAULT_PENALTY_FACTOR * DEFAULT_COST_SCALE,
            stage_modes: None,
            pruning: PruneConfig::default(),
            no_split: false,
            workers: 1,
        }
    }
}

impl IterativeOptions {
    fn stage_mode(&self, stage: usize, stages: usize) -> CostMode {
        if stage + 1 == stages {
            return CostMode::Soft;
        }
        self.stage_modes
            .as_ref()
            .and_then(|m| m.get(stage).copied())
            .unwrap_or(CostMode::Hard)
    }
}

/// Iterative relaxed partitioned fusion.
///
/// Each stage groups the residual panelists by the stage's categorical
/// features, solves every cluster (with a balancing node when its totals
/// differ) on the worker pool, keeps the resulting pairs and carries
/// unassigned weight into the next, looser stage. In hard stages the
/// partition features exclude mismatches and the remaining categoricals are
/// penalized. The final stage is unpartitioned, soft and always allows splits,
/// so every unit ends up assigned.
pub fn fuse_iterative(
    left: &Panel,
    right: &Panel,
    schedule: &RelaxationSchedule,
    opts: &IterativeOptions,
) -> Result<FusionOutcome, FusionError> {
    let unit_scale = check_inputs(left, right)?;
    let feature_sets = schedule.resolve(&left.schema)?;
    if feature_sets.last().is_none_or(|s| !s.is_empty()) {
        return Err(FusionError::Schedule(
            "the final stage must be the empty feature set".into(),
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| FusionError::Pool(e.to_string()))?;
    let ncat = left.schema.categorical.len();

    let mut res_left = left.clone();
    let mut res_right = right.clone();
    let mut units: BTreeMap<(String, String), i64> = BTreeMap::new();
    let mut total_cost: i128 = 0;
    let mut trace = Vec::new();

    for (s, features) in feature_sets.iter().enumerate() {
        if res_left.is_empty() && res_right.is_empty() {
            break;
        }
        let start = Instant::now();
        let final_stage = s + 1 == feature_sets.len();
        let mode = opts.stage_mode(s, feature_sets.len());
        let model = CostModel {
            mode,
            penalty: opts.penalty,
            cost_scale: opts.cost_scale,
        };
        let coster = match mode {
            CostMode::Hard => ArcCoster::hard_on(model, ncat, features),
            CostMode::Soft => ArcCoster::new(model, ncat),
        };

        let part = partition(&res_left, &res_right, features);
        let (rl, rr) = (&res_left, &res_right);
        let solved: Vec<Result<Solved, FusionError>> = pool.install(|| {
            part.clusters
                .par_iter()
                .map(|c| {
                    let l: Vec<&Panelist> = c.left.iter().map(|&i| &rl.panelists[i]).collect();
                    let r: Vec<&Panelist> = c.right.iter().map(|&j| &rr.panelists[j]).collect();
                    let k = opts.pruning.k_for(l.len(), r.len());
                    solve_members(&l, &r, &coster, k, unit_scale, &|| {
                        format!("stage {s} cluster [{}]", c.key.join(","))
                    })
                })
                .collect()
        });

        // (left pos, right pos, units, cost) in cluster order
        let mut flows = Vec::new();
        let (mut dummies, mut fallbacks, mut arcs) = (0, 0, 0);
        for (cluster, result) in part.clusters.iter().zip(solved) {
            let result = result?;
            dummies += usize::from(result.w_d != 0);
            fallbacks += usize::from(result.fell_back);
            arcs += result.arcs;
            for f in result.flows {
                flows.push((cluster.left[f.left], cluster.right[f.right], f.units, f.cost));
            }
        }

        let mut discarded_splits = 0;
        if opts.no_split && !final_stage {
            let mut partners: HashMap<usize, usize> = HashMap::new();
            for &(l, ..) in &flows {
                *partners.entry(l).or_default() += 1;
            }
            discarded_splits = partners.values().filter(|&&n| n > 1).count();
            flows.retain(|(l, ..)| partners[l] == 1);
        }

        let stage_cost: i128 = flows.iter().map(|&(_, _, u, c)| u as i128 * c as i128).sum();
        let kept = AssignmentSet {
            pairs: flows
                .iter()
                .map(|&(l, r, u, _)| AssignedPair {
                    left_id: res_left.panelists[l].id.clone(),
                    right_id: res_right.panelists[r].id.clone(),
                    weight: u as f64 / unit_scale as f64,
                    units: u,
                })
                .collect(),
        };
        let residuals = update_residuals(&kept, &res_left, &res_right, false)?;
        for p in kept.pairs {
            *units.entry((p.left_id, p.right_id)).or_insert(0) += p.units;
        }

        let entry = StageTrace {
            stage: s,
            features: features.iter().map(|&f| left.schema.categorical[f].clone()).collect(),
            mode,
            clusters: part.clusters.len(),
            deferred_left: part.deferred_left.len(),
            deferred_right: part.deferred_right.len(),
            matched_left: res_left.len() - residuals.left.len(),
            matched_right: res_right.len() - residuals.right.len(),
            residual_left: residuals.left.len(),
            residual_right: residuals.right.len(),
            residual_units: residuals.left.total_units(),
            arcs,
            dummies,
            fallbacks,
            discarded_splits,
            cost: stage_cost,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        };
        log::info!(
            "stage {s} [{}]: {} clusters, matched {}/{}, residual {}/{}, cost {}",
            entry.features.join(","),
            entry.clusters,
            entry.matched_left,
            entry.matched_right,
            entry.residual_left,
            entry.residual_right,
            entry.cost
        );
        trace.push(entry);
        total_cost += stage_cost;
        res_left = residuals.left;
        res_right = residuals.right;
    }

    if !res_left.is_empty() || !res_right.is_empty() {
        return Err(FusionError::Integrity(format!(
            "{} left and {} right panelists unassigned after the final stage",
            res_left.len(),
            res_right.len()
        )));
    }
    let assignments = AssignmentSet::from_units(units, unit_scale);
    check_mass_balance(&assignments, left, right)?;
    Ok(FusionOutcome {
        assignments,
        total_cost,
        trace,
    })
}
