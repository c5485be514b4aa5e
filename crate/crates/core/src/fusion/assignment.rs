use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::flow::{FlowNetwork, FlowSolution};
use crate::graph::{Endpoint, IdMaps};
use crate::panel::Panel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignedPair {
    pub left_id: String,
    pub right_id: String,
    /// Matched universe persons (`units / unit_scale`).
    pub weight: f64,
    pub units: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AssignmentSet {
    pub pairs: Vec<AssignedPair>,
}

impl AssignmentSet {
    /// Builds a set from accumulated units, ordered by (left_id, right_id).
    pub fn from_units(units: BTreeMap<(String, String), i64>, unit_scale: i64) -> Self {
        let pairs = units
            .into_iter()
            .filter(|(_, u)| *u > 0)
            .map(|((left_id, right_id), units)| AssignedPair {
                weight: units as f64 / unit_scale as f64,
                left_id,
                right_id,
                units,
            })
            .collect();
        Self { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn total_units(&self) -> i64 {
        self.pairs.iter().map(|p| p.units).sum()
    }

    pub fn sort(&mut self) {
        self.pairs
            .sort_by(|a, b| (&a.left_id, &a.right_id).cmp(&(&b.left_id, &b.right_id)));
    }
}

/// A positive flow between two panelists of one solved network, by position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct PairFlow {
    pub left: usize,
    pub right: usize,
    pub units: i64,
    pub cost: i64,
}

pub(crate) fn pair_flows(network: &FlowNetwork, solution: &FlowSolution, maps: &IdMaps) -> Vec<PairFlow> {
    network
        .arcs()
        .iter()
        .zip(&solution.flows)
        .filter(|(_, &f)| f > 0)
        .filter_map(|(arc, &units)| match (maps.endpoint(arc.from), maps.endpoint(arc.to)) {
            (Endpoint::Left(left), Endpoint::Right(right)) => Some(PairFlow {
                left,
                right,
                units,
                cost: arc.cost,
            }),
            _ => None,
        })
        .collect()
}

/// Converts solver flows into panel-level pairs, dropping zero flows and
/// anything touching the balancing node.
pub fn generate_assigned_pairs(network: &FlowNetwork, solution: &FlowSolution, maps: &IdMaps) -> AssignmentSet {
    let pairs = pair_flows(network, solution, maps)
        .into_iter()
        .map(|f| AssignedPair {
            left_id: maps.left[f.left].clone(),
            right_id: maps.right[f.right].clone(),
            weight: f.units as f64 / maps.unit_scale as f64,
            units: f.units,
        })
        .collect();
    AssignmentSet { pairs }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitDiscrepancy {
    pub side: Side,
    pub id: String,
    pub expected: i64,
    pub assigned: i64,
}

/// Per-panelist comparison of assigned units against panel units.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MassBalance {
    pub discrepancies: Vec<UnitDiscrepancy>,
    /// Pair ids that name no panelist.
    pub unknown_ids: Vec<(Side, String)>,
}

impl MassBalance {
    pub fn is_exact(&self) -> bool {
        self.discrepancies.is_empty() && self.unknown_ids.is_empty()
    }
}

/// Checks that every panelist's assigned units sum exactly to its units.
pub fn mass_balance(set: &AssignmentSet, left: &Panel, right: &Panel) -> MassBalance {
    let mut out = MassBalance::default();
    for (side, panel) in [(Side::Left, left), (Side::Right, right)] {
        let mut assigned: HashMap<&str, i64> = panel.panelists.iter().map(|p| (p.id.as_str(), 0)).collect();
        for pair in &set.pairs {
            let id = match side {
                Side::Left => &pair.left_id,
                Side::Right => &pair.right_id,
            };
            match assigned.get_mut(id.as_str()) {
                Some(total) => *total += pair.units,
                None => out.unknown_ids.push((side, id.clone())),
            }
        }
        for p in &panel.panelists {
            let got = assigned[p.id.as_str()];
            if got != p.units {
                out.discrepancies.push(UnitDiscrepancy {
                    side,
                    id: p.id.clone(),
                    expected: p.units,
                    assigned: got,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{solve_mcf, Capacity, NodeId};
    use crate::panel::{PanelSchema, Panelist};

    fn maps(dummy: bool) -> IdMaps {
        IdMaps {
            left: vec!["u1".into(), "u2".into()],
            right: vec!["v1".into(), "v2".into()],
            dummy: dummy.then_some(NodeId(4)),
            unit_scale: 1,
        }
    }

    fn two_by_two() -> FlowNetwork {
        let mut n = FlowNetwork::new();
        for b in [2, 3, -4, -1] {
            n.add_node(b);
        }
        for (f, t, c) in [(0, 2, 1), (0, 3, 3), (1, 2, 2), (1, 3, 1)] {
            n.add_arc(NodeId(f), NodeId(t), c, Capacity::Unbounded);
        }
        n
    }

    #[test]
    fn two_by_two_pairs() {
        let n = two_by_two();
        let s = solve_mcf(&n).unwrap();
        let set = generate_assigned_pairs(&n, &s, &maps(false));
        let got: Vec<(&str, &str, i64)> = set
            .pairs
            .iter()
            .map(|p| (p.left_id.as_str(), p.right_id.as_str(), p.units))
            .collect();
        assert_eq!(got, vec![("u1", "v1", 2), ("u2", "v1", 2), ("u2", "v2", 1)]);
    }

    #[test]
    fn dummy_flows_dropped() {
        let mut n = FlowNetwork::new();
        for b in [2, 1, -1, 0, -2] {
            n.add_node(b);
        }
        n.add_arc(NodeId(0), NodeId(4), 0, Capacity::Unbounded);
        n.add_arc(NodeId(1), NodeId(2), 5, Capacity::Unbounded);
        let s = FlowSolution {
            flows: vec![2, 1],
            total_cost: 5,
            status: crate::flow::Status::Optimal,
        };
        let set = generate_assigned_pairs(&n, &s, &maps(true));
        assert_eq!(set.len(), 1);
        assert_eq!(set.pairs[0].left_id, "u2");

        let zero = FlowSolution { flows: vec![0, 0], ..s };
        assert!(generate_assigned_pairs(&n, &zero, &maps(true)).is_empty());
    }

    #[test]
    fn mass_balance_flags_shortfall_and_unknown() {
        let people = |ids: &[(&str, i64)]| {
            let mut p = Panel::new(
                PanelSchema::default(),
                ids.iter()
                    .map(|(id, u)| Panelist {
                        id: id.to_string(),
                        weight: *u as f64,
                        units: *u,
                        categorical: vec![],
                        real: vec![],
                    })
                    .collect(),
            )
            .unwrap();
            p.unit_scale = Some(1);
            p
        };
        let l = people(&[("a", 2)]);
        let r = people(&[("x", 2)]);
        let mut units = BTreeMap::new();
        units.insert(("a".to_string(), "x".to_string()), 2);
        let set = AssignmentSet::from_units(units.clone(), 1);
        assert!(mass_balance(&set, &l, &r).is_exact());

        units.insert(("a".to_string(), "x".to_string()), 1);
        units.insert(("zz".to_string(), "x".to_string()), 1);
        let mb = mass_balance(&AssignmentSet::from_units(units, 1), &l, &r);
        assert_eq!(mb.unknown_ids, vec![(Side::Left, "zz".to_string())]);
        assert_eq!(mb.discrepancies.len(), 1);
        assert_eq!(mb.discrepancies[0].assigned, 1);
    }
}
