use std::collections::HashMap;

use super::assignment::{AssignedPair, AssignmentSet};
use super::FusionError;
use crate::panel::Panel;

/// Panels left after subtracting a stage's assignments, and the assignments
/// that were actually kept.
#[derive(Debug, Clone, PartialEq)]
pub struct Residuals {
    pub left: Panel,
    pub right: Panel,
    pub kept: AssignmentSet,
}

/// Drops every pair of a left panelist matched to more than one right
/// panelist.
pub fn apply_no_split(set: &AssignmentSet) -> AssignmentSet {
    let mut partners: HashMap<&str, usize> = HashMap::new();
    for p in &set.pairs {
        *partners.entry(p.left_id.as_str()).or_default() += 1;
    }
    let pairs = set
        .pairs
        .iter()
        .filter(|p| partners[p.left_id.as_str()] == 1)
        .cloned()
        .collect();
    AssignmentSet { pairs }
}

fn subtract(panel: &Panel, assigned: &HashMap<&str, i64>) -> Result<Panel, FusionError> {
    let mut out = panel.clone();
    for p in &mut out.panelists {
        if let Some(&u) = assigned.get(p.id.as_str()) {
            if u > p.units {
                return Err(FusionError::Integrity(format!(
                    "panelist `{}` assigned {u} units but holds {}",
                    p.id, p.units
                )));
            }
            p.units -= u;
        }
    }
    out.panelists.retain(|p| p.units > 0);
    Ok(out)
}

fn totals<'a>(pairs: &'a [AssignedPair], side: impl Fn(&'a AssignedPair) -> &'a str) -> HashMap<&'a str, i64> {
    let mut out = HashMap::new();
    for p in pairs {
        *out.entry(side(p)).or_default() += p.units;
    }
    out
}

/// Subtracts assigned units from both panels and removes exhausted panelists.
pub fn update_residuals(
    assignments: &AssignmentSet,
    left: &Panel,
    right: &Panel,
    no_split: bool,
) -> Result<Residuals, FusionError> {
    let kept = if no_split {
        apply_no_split(assignments)
    } else {
        assignments.clone()
    };
    let by_left = totals(&kept.pairs, |p| &p.left_id);
    let by_right = totals(&kept.pairs, |p| &p.right_id);
    for (side, ids, panel) in [("left", &by_left, left), ("right", &by_right, right)] {
        if let Some(id) = ids.keys().find(|id| panel.get(id).is_none()) {
            return Err(FusionError::Integrity(format!("unknown {side} panelist `{id}`")));
        }
    }
    Ok(Residuals {
        left: subtract(left, &by_left)?,
        right: subtract(right, &by_right)?,
        kept,
    })
}
