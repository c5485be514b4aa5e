use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::EvalError;
use crate::fusion::{AssignmentSet, FusionOutcome, StageTrace};
use crate::graph::{distance, CostModel, Features};
use crate::panel::{Panel, Panelist};

/// Share of a total in basis points; the complement is `10_000 − bp` so the
/// two always add to exactly 100 %.
fn basis_points(part: i64, total: i64) -> i64 {
    if total == 0 {
        0
    } else {
        ((part as i128 * 10_000 + total as i128 / 2) / total as i128) as i64
    }
}

fn pct(bp: i64) -> f64 {
    bp as f64 / 100.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FusionReport {
    pub total_cost: Option<i128>,
    pub assignments: usize,
    pub within_count: usize,
    pub across_count: usize,
    pub within_count_pct: f64,
    pub across_count_pct: f64,
    pub total_units: i64,
    pub within_units: i64,
    pub across_units: i64,
    pub within_flow_pct: f64,
    pub across_flow_pct: f64,
    pub trace: Vec<StageTrace>,
    pub elapsed_ms: Option<f64>,
}

fn index(panel: &Panel) -> HashMap<&str, &Panelist> {
    panel.panelists.iter().map(|p| (p.id.as_str(), p)).collect()
}

fn lookup<'a>(idx: &HashMap<&str, &'a Panelist>, id: &str, side: &str) -> Result<&'a Panelist, EvalError> {
    idx.get(id)
        .copied()
        .ok_or_else(|| EvalError::Integrity(format!("assignment names unknown {side} panelist `{id}`")))
}

/// Same-profile shares of an assignment set. A pair is "within" when the
/// two panelists agree on every categorical feature.
pub fn fusion_report(assignments: &AssignmentSet, left: &Panel, right: &Panel) -> Result<FusionReport, EvalError> {
    let (li, ri) = (index(left), index(right));
    let (mut within_count, mut within_units, mut total_units) = (0usize, 0i64, 0i64);
    for pair in &assignments.pairs {
        let a = lookup(&li, &pair.left_id, "left")?;
        let b = lookup(&ri, &pair.right_id, "right")?;
        total_units += pair.units;
        if a.categorical == b.categorical {
            within_count += 1;
            within_units += pair.units;
        }
    }
    let n = assignments.len();
    let count_bp = basis_points(within_count as i64, n as i64);
    let flow_bp = basis_points(within_units, total_units);
    let nonempty = |bp: i64, total: i64| if total == 0 { 0.0 } else { pct(10_000 - bp) };
    Ok(FusionReport {
        total_cost: None,
        assignments: n,
        within_count,
        across_count: n - within_count,
        within_count_pct: pct(count_bp),
        across_count_pct: nonempty(count_bp, n as i64),
        total_units,
        within_units,
        across_units: total_units - within_units,
        within_flow_pct: pct(flow_bp),
        across_flow_pct: nonempty(flow_bp, total_units),
        trace: Vec::new(),
        elapsed_ms: None,
    })
}

impl FusionReport {
    /// Report for a finished run, including its cost and stage trace.
    pub fn from_outcome(outcome: &FusionOutcome, left: &Panel, right: &Panel) -> Result<Self, EvalError> {
        let mut report = fusion_report(&outcome.assignments, left, right)?;
        report.total_cost = Some(outcome.total_cost);
        report.trace = outcome.trace.clone();
        report.elapsed_ms = Some(outcome.trace.iter().map(|t| t.elapsed_ms).sum());
        Ok(report)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned plain-text summary, followed by the stage table when present.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let cost = self.total_cost.map_or("-".to_string(), |c| c.to_string());
        let rows = [
            ("Cost", cost),
            ("Assignments", self.assignments.to_string()),
            (
                "Assignments within same demo categories",
                format!("{} ({:.2}%)", self.within_count, self.within_count_pct),
            ),
            (
                "Assignments across demo categories",
                format!("{} ({:.2}%)", self.across_count, self.across_count_pct),
            ),
            (
                "Flow assigned with same demo categories",
                format!("{} ({:.2}%)", self.within_units, self.within_flow_pct),
            ),
            (
                "Flow assigned across demo categories",
                format!("{} ({:.2}%)", self.across_units, self.across_flow_pct),
            ),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(out, "{:<width$}  {:.1} ms", "Wall time", ms);
        }
        if !self.trace.is_empty() {
            out.push('\n');
            out.push_str(&trace_table(&self.trace));
        }
        out
    }
}

/// Matched and residual panelists per stage as an aligned table.
pub fn trace_table(trace: &[StageTrace]) -> String {
    let header = [
        "stage",
        "features",
        "clusters",
        "matched_l",
        "matched_r",
        "residual_l",
        "residual_r",
        "dummies",
        "cost",
        "ms",
    ];
    let rows: Vec<[String; 10]> = trace
        .iter()
        .map(|t| {
            [
                t.stage.to_string(),
                if t.features.is_empty() {
                    "-".into()
                } else {
                    t.features.join("+")
                },
                t.clusters.to_string(),
                t.matched_left.to_string(),
                t.matched_right.to_string(),
                t.residual_left.to_string(),
                t.residual_right.to_string(),
                t.dummies.to_string(),
                t.cost.to_string(),
                format!("{:.1}", t.elapsed_ms),
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|c| rows.iter().map(|r| r[c].len()).chain([header[c].len()]).max().unwrap())
        .collect();
    let mut out = String::new();
    let line = |cells: Vec<&str>| -> String {
        cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (s, w))| if c == 1 { format!("{s:<w$}") } else { format!("{s:>w$}") })
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let _ = writeln!(out, "{}", line(header.to_vec()));
    for r in &rows {
        let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
    }
    out
}

/// Stage trace as CSV, one row per stage; features are joined with `|`.
pub fn trace_csv(trace: &[StageTrace]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "stage",
        "features",
        "mode",
        "clusters",
        "deferred_left",
        "deferred_right",
        "matched_left",
        "matched_right",
        "residual_left",
        "residual_right",
        "residual_units",
        "arcs",
        "dummies",
        "fallbacks",
        "discarded_splits",
        "cost",
        "elapsed_ms",
    ])
    .expect("in-memory write");
    for t in trace {
        let mode = serde_json::to_value(t.mode).expect("mode serializes");
        w.write_record([
            t.stage.to_string(),
            t.features.join("|"),
            mode.as_str().unwrap_or_default().to_string(),
            t.clusters.to_string(),
            t.deferred_left.to_string(),
            t.deferred_right.to_string(),
            t.matched_left.to_string(),
            t.matched_right.to_string(),
            t.residual_left.to_string(),
            t.residual_right.to_string(),
            t.residual_units.to_string(),
            t.arcs.to_string(),
            t.dummies.to_string(),
            t.fallbacks.to_string(),
            t.discarded_splits.to_string(),
            t.cost.to_string(),
            format!("{:.3}", t.elapsed_ms),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// Cost of an assignment set under `model`, over normalized panels.
///
/// Lets runs produced under different stage models be compared on one scale.
/// Errors if a pair is excluded by the model.
pub fn assignment_cost(
    assignments: &AssignmentSet,
    left: &Panel,
    right: &Panel,
    model: &CostModel,
) -> Result<i128, EvalError> {
    let (li, ri) = (index(left), index(right));
    let mut total = 0i128;
    for pair in &assignments.pairs {
        let a = lookup(&li, &pair.left_id, "left")?;
        let b = lookup(&ri, &pair.right_id, "right")?;
        let fa = Features {
            categorical: &a.categorical[..],
            real: &a.real[..],
        };
        let fb = Features {
            categorical: &b.categorical[..],
            real: &b.real[..],
        };
        let c = distance(fa, fb, model).ok_or_else(|| {
            EvalError::Integrity(format!(
                "pair ({}, {}) is excluded by the cost model",
                pair.left_id, pair.right_id
            ))
        })?;
        total += c as i128 * pair.units as i128;
    }
    Ok(total)
}
