use std::collections::HashMap;

use serde::Serialize;

use super::EvalError;
use crate::fusion::FusionOutcome;
use crate::panel::{FusionConfig, Panel};
use crate::pipeline::{prepare, run_iterative};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfFusionReport {
    pub panelists: usize,
    pub total_units: i64,
    pub self_units: i64,
    /// Percent of flow matched back to the same panelist.
    pub self_flow_pct: f64,
    pub fully_self: usize,
    /// Percent of panelists whose whole weight went to themselves.
    pub fully_self_pct: f64,
    pub total_cost: i128,
}

impl SelfFusionReport {
    pub fn from_outcome(panel: &Panel, outcome: &FusionOutcome) -> Self {
        let mut self_by_id: HashMap<&str, i64> = HashMap::new();
        let mut total_units = 0;
        for p in &outcome.assignments.pairs {
            total_units += p.units;
            if p.left_id == p.right_id {
                *self_by_id.entry(p.left_id.as_str()).or_default() += p.units;
            }
        }
        let self_units: i64 = self_by_id.values().sum();
        let fully_self = panel
            .panelists
            .iter()
            .filter(|p| self_by_id.get(p.id.as_str()) == Some(&p.units))
            .count();
        let share = |a: f64, b: f64| if b > 0.0 { 100.0 * a / b } else { 0.0 };
        Self {
            panelists: panel.len(),
            total_units,
            self_units,
            self_flow_pct: share(self_units as f64, total_units as f64),
            fully_self,
            fully_self_pct: share(fully_self as f64, panel.len() as f64),
            total_cost: outcome.total_cost,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let rows = [
            ("Panelists", self.panelists.to_string()),
            (
                "Flow self-assigned",
                format!(
                    "{} of {} units ({:.2}%)",
                    self.self_units, self.total_units, self.self_flow_pct
                ),
            ),
            (
                "Panelists fully self-matched",
                format!("{} ({:.2}%)", self.fully_self, self.fully_self_pct),
            ),
            ("Cost", self.total_cost.to_string()),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
    }
}

/// Fuses a panel with a copy of itself through the iterative engine and
/// measures how much weight returns to its own panelist.
pub fn self_fusion_quality(panel: &Panel, config: &FusionConfig) -> Result<SelfFusionReport, EvalError> {
    let prepared = prepare(panel, panel, config)?;
    let outcome = run_iterative(&prepared, config)?;
    Ok(SelfFusionReport::from_outcome(&prepared.left, &outcome))
}
