//! End-to-end fusion from raw panels: normalization, quantization and the
//! chosen engine.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fusion::{fuse_iterative, fuse_single, FusionError, FusionOutcome, IterativeOptions, RelaxationSchedule};
use crate::graph::{estimate_arc_count, normalize_features, FeatureSchema, GraphError};
use crate::panel::{quantize_weights, FusionConfig, Panel, PanelError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FusionMode {
    Single,
    Iterative,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Panel(#[from] PanelError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(
        "single-graph fusion would need about {estimated} arcs (cap {cap}); use iterative mode or raise single_arc_cap"
    )]
    ArcCap { estimated: u64, cap: u64 },
}

impl PipelineError {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, PipelineError::Fusion(FusionError::Infeasible { .. }))
    }
}

/// Panels ready for fusion: right columns aligned to the left, reals
/// normalized, weights quantized.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub left: Panel,
    pub right: Panel,
    pub schema: FeatureSchema,
}

pub fn prepare(left: &Panel, right: &Panel, config: &FusionConfig) -> Result<Prepared, PipelineError> {
    config.validate()?;
    let (left, right, schema) = normalize_features(left, right)?;
    let (left, right) = quantize_weights(&left, &right, config.unit_scale, config.universe_tolerance)?;
    Ok(Prepared { left, right, schema })
}

/// The configured schedule, or one that drops a categorical per stage.
pub fn schedule_for(config: &FusionConfig, left: &Panel) -> Result<RelaxationSchedule, PipelineError> {
    Ok(match &config.schedule {
        Some(stages) => RelaxationSchedule::new(stages.clone())?,
        None => RelaxationSchedule::progressive(&left.schema.categorical),
    })
}

pub fn iterative_options(config: &FusionConfig) -> IterativeOptions {
    IterativeOptions {
        cost_scale: config.cost_scale,
        penalty: config.penalty(),
        stage_modes: config.mode_per_stage.clone(),
        pruning: config.pruning,
        no_split: config.no_split,
        workers: config.workers,
    }
}

/// Runs single-graph fusion on prepared panels, refusing graphs above the
/// configured arc cap.
pub fn run_single(prepared: &Prepared, config: &FusionConfig) -> Result<FusionOutcome, PipelineError> {
    let estimated = estimate_arc_count(&prepared.left, &prepared.right, config.single_mode);
    if estimated > config.single_arc_cap {
        return Err(PipelineError::ArcCap {
            estimated,
            cap: config.single_arc_cap,
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| FusionError::Pool(e.to_string()))?;
    let model = config.cost_model(config.single_mode);
    Ok(pool.install(|| fuse_single(&prepared.left, &prepared.right, &model, &config.pruning))?)
}

pub fn run_iterative(prepared: &Prepared, config: &FusionConfig) -> Result<FusionOutcome, PipelineError> {
    let schedule = schedule_for(config, &prepared.left)?;
    Ok(fuse_iterative(
        &prepared.left,
        &prepared.right,
        &schedule,
        &iterative_options(config),
    )?)
}

pub fn run(
    left: &Panel,
    right: &Panel,
    config: &FusionConfig,
    mode: FusionMode,
) -> Result<(Prepared, FusionOutcome), PipelineError> {
    let prepared = prepare(left, right, config)?;
    let outcome = match mode {
        FusionMode::Single => run_single(&prepared, config)?,
        FusionMode::Iterative => run_iterative(&prepared, config)?,
    };
    Ok((prepared, outcome))
}
