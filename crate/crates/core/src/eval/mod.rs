//! Run metrics, the self-fusion experiment and synthetic panels.

mod report;
mod self_fusion;
mod synth;

pub use report::{assignment_cost, fusion_report, trace_csv, trace_table, FusionReport};
pub use self_fusion::{self_fusion_quality, SelfFusionReport};
pub use synth::{inject_duplicates, synth_panels, CategoricalSpec, RealSpec, SynthSpec};

use thiserror::Error;

use crate::panel::PanelError;
use crate::pipeline::PipelineError;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("invalid synthetic spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Panel(#[from] PanelError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}
