use serde::{Deserialize, Serialize};

use super::GraphError;
use crate::panel::Panel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealRange {
    pub min: f64,
    pub max: f64,
}

/// Feature layout shared by both panels plus the min-max transform applied
/// to each real feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub categorical_names: Vec<String>,
    pub real_names: Vec<String>,
    pub real_ranges: Vec<RealRange>,
}

impl FeatureSchema {
    /// Maps each real feature to [0, 1]; constant features map to 0.
    pub fn apply(&self, panel: &Panel) -> Panel {
        let mut out = panel.clone();
        for p in &mut out.panelists {
            for (v, r) in p.real.iter_mut().zip(&self.real_ranges) {
                let span = r.max - r.min;
                *v = if span > 0.0 {
                    ((*v - r.min) / span).clamp(0.0, 1.0)
                } else {
                    0.0
                };
            }
        }
        out
    }
}

fn first_missing<'a>(a: &'a [String], b: &[String]) -> Option<&'a String> {
    a.iter().find(|n| !b.contains(n))
}

/// Permutes `right`'s columns into `left`'s order; errors on differing name sets.
fn align(left: &Panel, right: &Panel) -> Result<Panel, GraphError> {
    let (ls, rs) = (&left.schema, &right.schema);
    for (a, b) in [(&ls.categorical, &rs.categorical), (&ls.real, &rs.real)] {
        if let Some(name) = first_missing(a, b).or_else(|| first_missing(b, a)) {
            return Err(GraphError::SchemaMismatch { feature: name.clone() });
        }
    }
    if ls == rs {
        return Ok(right.clone());
    }
    let cat_map: Vec<usize> = ls
        .categorical
        .iter()
        .map(|n| rs.categorical.iter().position(|m| m == n).unwrap())
        .collect();
    let real_map: Vec<usize> = ls
        .real
        .iter()
        .map(|n| rs.real.iter().position(|m| m == n).unwrap())
        .collect();
    let mut out = right.clone();
    out.schema = ls.clone();
    for p in &mut out.panelists {
        p.categorical = cat_map.iter().map(|&i| p.categorical[i].clone()).collect();
        p.real = real_map.iter().map(|&i| p.real[i]).collect();
    }
    Ok(out)
}

/// Min-max normalizes real features over the union of both panels.
pub fn normalize_features(left: &Panel, right: &Panel) -> Result<(Panel, Panel, FeatureSchema), GraphError> {
    let right = align(left, right)?;
    let real_ranges = (0..left.schema.real.len())
        .map(|k| {
            let values = left.panelists.iter().chain(&right.panelists).map(|p| p.real[k]);
            let (min, max) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
            if min > max {
                RealRange { min: 0.0, max: 0.0 }
            } else {
                RealRange { min, max }
            }
        })
        .collect();
    let schema = FeatureSchema {
        categorical_names: left.schema.categorical.clone(),
        real_names: left.schema.real.clone(),
        real_ranges,
    };
    Ok((schema.apply(left), schema.apply(&right), schema))
}
