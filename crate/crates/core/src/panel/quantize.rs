use std::cmp::Ordering;

use super::{Panel, PanelError};

pub const DEFAULT_UNIT_SCALE: i64 = 1000;
pub const DEFAULT_UNIVERSE_TOLERANCE: f64 = 1e-6;

/// Converts weights to integer units so both panels carry the same total.
///
/// Each panelist gets `round(weight · unit_scale)` (at least 1). Both sides
/// are then brought to the common target `round(mean total · unit_scale)` by
/// adjusting the largest-weight panelist on each side (ties to the smaller id).
/// A shortfall larger than that panelist can give up continues down the
/// weight order.
pub fn quantize_weights(
    left: &Panel,
    right: &Panel,
    unit_scale: i64,
    tolerance: f64,
) -> Result<(Panel, Panel), PanelError> {
    if unit_scale < 1 {
        return Err(PanelError::Quantization(format!(
            "unit_scale must be >= 1, got {unit_scale}"
        )));
    }
    let (lw, rw) = (left.total_weight(), right.total_weight());
    let denom = lw.max(rw);
    if denom <= 0.0 || (lw - rw).abs() / denom > tolerance {
        return Err(PanelError::UniverseMismatch { left: lw, right: rw });
    }
    let target = ((lw + rw) / 2.0 * unit_scale as f64).round() as i64;
    Ok((
        quantize_side(left, unit_scale, target)?,
        quantize_side(right, unit_scale, target)?,
    ))
}

fn quantize_side(panel: &Panel, unit_scale: i64, target: i64) -> Result<Panel, PanelError> {
    let mut out = panel.clone();
    out.unit_scale = Some(unit_scale);
    for p in &mut out.panelists {
        p.units = ((p.weight * unit_scale as f64).round() as i64).max(1);
    }
    let mut drift = target - out.total_units();
    if drift == 0 {
        return Ok(out);
    }
    let mut order: Vec<usize> = (0..out.panelists.len()).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (&out.panelists[a], &out.panelists[b]);
        pb.weight
            .partial_cmp(&pa.weight)
            .unwrap_or(Ordering::Equal)
            .then_with(|| pa.id.cmp(&pb.id))
    });
    // the largest panelist absorbs the drift; a negative drift it cannot
    // absorb while keeping one unit spills over to the next largest
    for i in order {
        let p = &mut out.panelists[i];
        let step = drift.max(1 - p.units);
        p.units += step;
        drift -= step;
        if drift == 0 {
            break;
        }
    }
    if drift != 0 {
        return Err(PanelError::Quantization(format!(
            "{} panelists need at least one unit each but the target is {target} units",
            out.panelists.len()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panel::{PanelSchema, Panelist};

    fn panel(weights: &[(&str, f64)]) -> Panel {
        let people = weights
            .iter()
            .map(|(id, w)| Panelist {
                id: id.to_string(),
                weight: *w,
                units: 0,
                categorical: vec![],
                real: vec![],
            })
            .collect();
        Panel::new(PanelSchema::default(), people).unwrap()
    }

    fn units(p: &Panel) -> Vec<i64> {
        p.panelists.iter().map(|p| p.units).collect()
    }

    #[test]
    fn exact_case() {
        let (l, r) = quantize_weights(
            &panel(&[("a", 2.5), ("b", 1.5)]),
            &panel(&[("x", 4.0)]),
            1000,
            DEFAULT_UNIVERSE_TOLERANCE,
        )
        .unwrap();
        assert_eq!(units(&l), vec![2500, 1500]);
        assert_eq!(units(&r), vec![4000]);
        assert_eq!(l.total_units(), r.total_units());
    }

    #[test]
    fn thirds() {
        let (l, r) = quantize_weights(
            &panel(&[("a", 1.0 / 3.0), ("b", 2.0 / 3.0)]),
            &panel(&[("x", 1.0)]),
            3,
            DEFAULT_UNIVERSE_TOLERANCE,
        )
        .unwrap();
        assert_eq!(units(&l), vec![1, 2]);
        assert_eq!(units(&r), vec![3]);
    }

    #[test]
    fn drift_absorbed_by_largest() {
        // 0.5 and 2.5 both round up: 5 units against a target of 4
        let (l, r) = quantize_weights(
            &panel(&[("a", 0.125), ("b", 0.625), ("c", 0.25)]),
            &panel(&[("x", 1.0)]),
            4,
            DEFAULT_UNIVERSE_TOLERANCE,
        )
        .unwrap();
        assert_eq!(units(&l), vec![1, 2, 1]);
        assert_eq!(l.total_units(), 4);
        assert_eq!(r.total_units(), 4);
    }

    #[test]
    fn spills_to_next_largest() {
        // 3 + 2 + 4·1 = 9 units against a target of 6; b can only give 2
        let (l, _) = quantize_weights(
            &panel(&[
                ("a", 0.25),
                ("b", 2.5),
                ("c", 0.25),
                ("d", 2.25),
                ("e", 0.25),
                ("f", 0.5),
            ]),
            &panel(&[("x", 6.0)]),
            1,
            DEFAULT_UNIVERSE_TOLERANCE,
        )
        .unwrap();
        assert_eq!(units(&l), vec![1, 1, 1, 1, 1, 1]);
        let err = quantize_weights(&panel(&[("a", 0.25), ("b", 0.25)]), &panel(&[("x", 0.5)]), 1, 1e-6);
        assert!(matches!(err, Err(PanelError::Quantization(_))));
    }

    #[test]
    fn universe_mismatch() {
        let err = quantize_weights(
            &panel(&[("a", 1.0)]),
            &panel(&[("x", 2.0)]),
            1000,
            DEFAULT_UNIVERSE_TOLERANCE,
        )
        .unwrap_err();
        match err {
            PanelError::UniverseMismatch { left, right } => assert_eq!((left, right), (1.0, 2.0)),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn ties_prefer_smaller_id() {
        let (l, _) = quantize_weights(
            &panel(&[("b", 0.75), ("a", 0.75)]),
            &panel(&[("x", 1.5)]),
            2,
            DEFAULT_UNIVERSE_TOLERANCE,
        )
        .unwrap();
        // 2 + 2 = 4 against a target of 3: `a` absorbs the drift
        assert_eq!(units(&l), vec![2, 1]);
    }
}
