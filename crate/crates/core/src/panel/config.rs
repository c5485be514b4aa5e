use std::path::Path;

use serde::{Deserialize, Serialize};

use super::quantize::{DEFAULT_UNIT_SCALE, DEFAULT_UNIVERSE_TOLERANCE};
use super::PanelError;
use crate::graph::{CostMode, CostModel, PruneConfig, DEFAULT_COST_SCALE};

/// Default soft penalty per mismatched categorical, in multiples of
/// `cost_scale` (one full normalized squared distance unit).
pub const DEFAULT_PENALTY_FACTOR: i64 = 1000;

/// Estimated arc count above which single-graph fusion is refused.
pub const DEFAULT_SINGLE_ARC_CAP: u64 = 1_000_000_000;

/// Engine settings, read from a JSON document. Every key is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FusionConfig {
    pub unit_scale: i64,
    pub cost_scale: i64,
    /// Integer cost per mismatched categorical; `None` means
    /// `DEFAULT_PENALTY_FACTOR · cost_scale`.
    pub penalty: Option<i64>,
    /// Cost mode per schedule stage. Defaults to hard for partitioned
    /// stages; the final stage always runs soft.
    pub mode_per_stage: Option<Vec<CostMode>>,
    /// Mode of single-graph fusion.
    pub single_mode: CostMode,
    /// Categorical names to partition on per stage, ending with `[]`.
    /// `None` drops one categorical per stage from the full set.
    pub schedule: Option<Vec<Vec<String>>>,
    pub pruning: PruneConfig,
    pub no_split: bool,
    pub workers: usize,
    pub seed: u64,
    pub single_arc_cap: u64,
    pub universe_tolerance: f64,
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self {
            unit_scale: DEFAULT_UNIT_SCALE,
            cost_scale: DEFAULT_COST_SCALE,
            penalty: None,
            mode_per_stage: None,
            single_mode: CostMode::Soft,
            schedule: None,
            pruning: PruneConfig::default(),
            no_split: false,
            workers: 1,
            seed: 0,
            single_arc_cap: DEFAULT_SINGLE_ARC_CAP,
            universe_tolerance: DEFAULT_UNIVERSE_TOLERANCE,
        }
    }
}

impl FusionConfig {
    pub fn from_json(text: &str) -> Result<Self, PanelError> {
        let config: Self = serde_json::from_str(text).map_err(|e| PanelError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PanelError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| PanelError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), PanelError> {
        let fail = |m: String| Err(PanelError::Config(m));
        if self.unit_scale < 1 {
            return fail(format!("unit_scale must be >= 1, got {}", self.unit_scale));
        }
        if self.cost_scale < 1 {
            return fail(format!("cost_scale must be >= 1, got {}", self.cost_scale));
        }
        if let Some(p) = self.penalty {
            if p < 0 {
                return fail(format!("penalty must be >= 0, got {p}"));
            }
        }
        if self.pruning.k == Some(0) {
            return fail("pruning.k must be >= 1".into());
        }
        if self.workers < 1 {
            return fail("workers must be >= 1".into());
        }
        if !(self.universe_tolerance >= 0.0) {
            return fail("universe_tolerance must be >= 0".into());
        }
        if let Some(schedule) = &self.schedule {
            if schedule.last().is_none_or(|s| !s.is_empty()) {
                return fail("schedule must end with an empty stage `[]`".into());
            }
            if let Some(modes) = &self.mode_per_stage {
                if modes.len() != schedule.len() {
                    return fail(format!(
                        "mode_per_stage has {} entries for {} stages",
                        modes.len(),
                        schedule.len()
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn penalty(&self) -> i64 {
        self.penalty
            .unwrap_or_else(|| DEFAULT_PENALTY_FACTOR.saturating_mul(self.cost_scale))
    }

    pub fn cost_model(&self, mode: CostMode) -> CostModel {
        CostModel {
            mode,
            penalty: self.penalty(),
            cost_scale: self.cost_scale,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_from_empty_document() {
        let c = FusionConfig::from_json("{}").unwrap();
        assert_eq!(c, FusionConfig::default());
        assert_eq!(c.penalty(), 1000 * DEFAULT_COST_SCALE);
        assert!(c.pruning.enabled);
    }

    #[test]
    fn full_document() {
        let c = FusionConfig::from_json(
            r#"{"unit_scale": 10, "cost_scale": 100, "penalty": 1000,
                "mode_per_stage": ["hard", "soft"], "schedule": [["g"], []],
                "pruning": {"enabled": false, "k": 4}, "no_split": true,
                "workers": 8, "seed": 7}"#,
        )
        .unwrap();
        assert_eq!(c.cost_model(CostMode::Soft), CostModel::soft(1000, 100));
        assert_eq!(c.schedule.unwrap()[0], vec!["g".to_string()]);
        assert_eq!(
            c.pruning,
            PruneConfig {
                enabled: false,
                k: Some(4)
            }
        );
        assert_eq!(c.workers, 8);
    }

    #[test]
    fn rejects_bad_values() {
        for doc in [
            r#"{"schedule": [["g"]]}"#,
            r#"{"schedule": [["g"], []], "mode_per_stage": ["hard"]}"#,
            r#"{"workers": 0}"#,
            r#"{"unit_scale": 0}"#,
            r#"{"pruning": {"k": 0}}"#,
            r#"{"bogus": 1}"#,
        ] {
            assert!(
                matches!(FusionConfig::from_json(doc), Err(PanelError::Config(_))),
                "{doc}"
            );
        }
    }

    #[test]
    fn round_trips() {
        let c = FusionConfig {
            schedule: Some(vec![vec!["a".into()], vec![]]),
            ..Default::default()
        };
        assert_eq!(FusionConfig::from_json(&c.to_json()).unwrap(), c);
    }
}
