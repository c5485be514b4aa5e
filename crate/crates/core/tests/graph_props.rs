mod common;

use std::collections::HashSet;

use panelfuse_core::graph::{
    build_bipartite, distance, estimate_arc_count, prune_edges, CandidateArc, CostMode, CostModel, Features,
    PruneConfig,
};
use panelfuse_core::panel::Panel;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn features(p: &panelfuse_core::panel::Panelist) -> Features<'_, String> {
    Features {
        categorical: &p.categorical,
        real: &p.real,
    }
}

fn panels(seed: u64) -> (Panel, Panel) {
    common::random_panels(&mut ChaCha8Rng::seed_from_u64(seed), 8, 5, 2, 2, 2)
}

fn arc_set(l: &Panel, r: &Panel, mode: CostMode, pruning: PruneConfig) -> HashSet<(usize, usize, i64)> {
    let model = CostModel {
        mode,
        penalty: 500,
        cost_scale: 1000,
    };
    let g = build_bipartite(l, r, &model, &pruning).unwrap();
    g.network.arcs().iter().map(|a| (a.from.0, a.to.0, a.cost)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn distance_symmetric_and_zero_on_diagonal(seed in any::<u64>()) {
        let (l, r) = panels(seed);
        for model in [CostModel::hard(1000), CostModel::soft(500, 1000)] {
            for a in &l.panelists {
                prop_assert_eq!(distance(features(a), features(a), &model), Some(0));
                for b in &r.panelists {
                    prop_assert_eq!(
                        distance(features(a), features(b), &model),
                        distance(features(b), features(a), &model)
                    );
                }
            }
        }
    }

    #[test]
    fn hard_arcs_are_a_subset_of_soft(seed in any::<u64>()) {
        let (l, r) = panels(seed);
        let hard = arc_set(&l, &r, CostMode::Hard, PruneConfig::disabled());
        let soft = arc_set(&l, &r, CostMode::Soft, PruneConfig::disabled());
        prop_assert!(hard.is_subset(&soft));
        prop_assert_eq!(soft.len(), l.len() * r.len());
        // count by direct enumeration of agreeing pairs
        let agreeing = l
            .panelists
            .iter()
            .flat_map(|a| r.panelists.iter().map(move |b| a.categorical == b.categorical))
            .filter(|&same| same)
            .count();
        prop_assert_eq!(hard.len(), agreeing);
        prop_assert_eq!(estimate_arc_count(&l, &r, CostMode::Hard), agreeing as u64);
    }

    #[test]
    fn pruned_is_a_subnetwork_keeping_degree(seed in any::<u64>(), k in 1usize..4) {
        let (l, r) = panels(seed);
        for mode in [CostMode::Hard, CostMode::Soft] {
            let full = arc_set(&l, &r, mode, PruneConfig::disabled());
            let pruned = arc_set(&l, &r, mode, PruneConfig::with_k(k));
            prop_assert!(pruned.is_subset(&full));
            prop_assert!(pruned.len() <= l.len() * k + r.len());
            for node in 0..l.len() + r.len() {
                let deg = |s: &HashSet<(usize, usize, i64)>| s.iter().filter(|a| a.0 == node || a.1 == node).count();
                if deg(&full) > 0 {
                    prop_assert!(deg(&pruned) > 0, "node {} lost all arcs", node);
                }
            }
        }
    }

    #[test]
    fn prune_edges_keeps_k_cheapest(costs in prop::collection::vec(prop::collection::vec(0i64..30, 1..7), 1..6), k in 1usize..5) {
        let n_right = costs.iter().map(Vec::len).max().unwrap();
        let rows: Vec<Vec<CandidateArc>> = costs
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().enumerate().map(|(j, &c)| CandidateArc { left: i, right: j, cost: c }).collect())
            .collect();
        let kept = prune_edges(&rows, n_right, k);
        for (i, row) in rows.iter().enumerate() {
            let mut sorted: Vec<(i64, usize)> = row.iter().map(|a| (a.cost, a.right)).collect();
            sorted.sort();
            let want: HashSet<usize> = sorted.iter().take(k).map(|&(_, j)| j).collect();
            let got: HashSet<usize> = kept.iter().filter(|a| a.left == i).map(|a| a.right).collect();
            prop_assert!(want.is_subset(&got));
        }
        if k >= n_right {
            let all: Vec<CandidateArc> = rows.iter().flatten().copied().collect();
            prop_assert_eq!(kept, all);
        }
    }
}

#[test]
fn dense_and_block_arc_counts() {
    let s = common::schema(1, 1);
    let row = |id: &str, c: &str| (id.to_string(), 1, vec![c.to_string()], vec![0.5]);
    let same_l = common::quantized(&s, vec![row("a", "A"), row("b", "A")]);
    let same_r = common::quantized(&s, vec![row("x", "A"), row("y", "A")]);
    let g = build_bipartite(&same_l, &same_r, &CostModel::hard(10), &PruneConfig::disabled()).unwrap();
    assert_eq!(g.network.arc_count(), 4);

    let l = common::quantized(&s, vec![row("a", "A"), row("b", "B")]);
    let r = common::quantized(&s, vec![row("x", "A"), row("y", "B")]);
    let g = build_bipartite(&l, &r, &CostModel::hard(10), &PruneConfig::disabled()).unwrap();
    assert_eq!(g.network.arc_count(), 2);
}

#[test]
fn sample_scale_arc_count() {
    let s = common::schema(0, 0);
    let side = |prefix: &str, n: usize| {
        common::quantized(
            &s,
            (0..n).map(|i| (format!("{prefix}{i}"), 1, vec![], vec![])).collect(),
        )
    };
    let (l, r) = (side("u", 87_576), side("v", 4_605));
    assert_eq!(estimate_arc_count(&l, &r, CostMode::Soft), 403_287_480);
}
