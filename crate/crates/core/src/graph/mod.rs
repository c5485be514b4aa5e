//! Turning two panels into a transportation network.

mod build;
mod distance;
mod normalize;
mod prune;

pub use build::{build_bipartite, build_from_members, estimate_arc_count, BipartiteGraph, Endpoint, IdMaps};
pub use distance::{distance, ArcCoster, CostMode, CostModel, Features, DEFAULT_COST_SCALE};
pub use normalize::{normalize_features, FeatureSchema, RealRange};
pub use prune::{default_prune_k, prune_edges, CandidateArc, PruneConfig};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("feature `{feature}` is not present in both panels")]
    SchemaMismatch { feature: String },
    #[error("panels must be quantized before building a network")]
    NotQuantized,
    #[error("panels were quantized with different unit scales")]
    UnitScaleMismatch,
}
