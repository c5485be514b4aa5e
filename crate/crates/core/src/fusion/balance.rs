use super::partition::Cluster;
use crate::flow::Capacity;
use crate::graph::{build_from_members, ArcCoster, BipartiteGraph};
use crate::panel::{Panel, Panelist};

/// Adds a balancing node when the two sides carry different totals.
///
/// Returns `w_d = left total − right total`. A positive `w_d` adds a demand
/// node fed by every left node, a negative one a supply node feeding every
/// right node; all balancing arcs cost 0.
pub fn add_balancing_node(graph: &mut BipartiteGraph) -> i64 {
    let nl = graph.maps.left.len();
    let nr = graph.maps.right.len();
    let balances = graph.network.balances();
    let supply: i64 = balances[..nl].iter().sum();
    let demand: i64 = -balances[nl..nl + nr].iter().sum::<i64>();
    let w_d = supply - demand;
    if w_d == 0 {
        return 0;
    }
    let dummy = graph.network.add_node(-w_d);
    graph.maps.dummy = Some(dummy);
    if w_d > 0 {
        for i in 0..nl {
            let from = graph.maps.left_node(i);
            graph.network.add_arc(from, dummy, 0, Capacity::Unbounded);
        }
    } else {
        for j in 0..nr {
            let to = graph.maps.right_node(j);
            graph.network.add_arc(dummy, to, 0, Capacity::Unbounded);
        }
    }
    w_d
}

/// Builds the cluster's network and balances it.
pub fn balance_cluster(
    cluster: &Cluster,
    left: &Panel,
    right: &Panel,
    coster: &ArcCoster,
    prune_k: Option<usize>,
) -> BipartiteGraph {
    let l: Vec<&Panelist> = cluster.left.iter().map(|&i| &left.panelists[i]).collect();
    let r: Vec<&Panelist> = cluster.right.iter().map(|&j| &right.panelists[j]).collect();
    let unit_scale = left.unit_scale.unwrap_or(1);
    let mut graph = build_from_members(&l, &r, coster, prune_k, unit_scale);
    add_balancing_node(&mut graph);
    graph
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::CostModel;
    use crate::panel::PanelSchema;

    fn panel(units: &[i64]) -> Panel {
        let people = units
            .iter()
            .enumerate()
            .map(|(i, &u)| Panelist {
                id: format!("p{i}"),
                weight: u as f64,
                units: u,
                categorical: vec![],
                real: vec![],
            })
            .collect();
        let mut p = Panel::new(PanelSchema::default(), people).unwrap();
        p.unit_scale = Some(1);
        p
    }

    fn cluster(l: &Panel, r: &Panel) -> Cluster {
        Cluster {
            key: vec![],
            left: (0..l.len()).collect(),
            right: (0..r.len()).collect(),
        }
    }

    fn coster() -> ArcCoster {
        ArcCoster::new(CostModel::soft(0, 1), 0)
    }

    #[test]
    fn left_surplus_adds_demand_node() {
        let (l, r) = (panel(&[2, 3]), panel(&[3]));
        let g = balance_cluster(&cluster(&l, &r), &l, &r, &coster(), None);
        let d = g.maps.dummy.unwrap();
        assert_eq!(g.network.balance(d), -2);
        assert_eq!(g.network.balances().iter().sum::<i64>(), 0);
        let into_dummy = g.network.arcs().iter().filter(|a| a.to == d).count();
        assert_eq!(into_dummy, 2);
    }

    #[test]
    fn right_surplus_adds_supply_node() {
        let (l, r) = (panel(&[3]), panel(&[4, 1]));
        let g = balance_cluster(&cluster(&l, &r), &l, &r, &coster(), None);
        let d = g.maps.dummy.unwrap();
        assert_eq!(g.network.balance(d), 2);
        assert!(g.network.arcs().iter().filter(|a| a.from == d).all(|a| a.cost == 0));
    }

    #[test]
    fn balanced_needs_no_dummy() {
        let (l, r) = (panel(&[2, 2]), panel(&[4]));
        let g = balance_cluster(&cluster(&l, &r), &l, &r, &coster(), None);
        assert_eq!(g.maps.dummy, None);
        assert_eq!(g.network.node_count(), 3);
    }
}
