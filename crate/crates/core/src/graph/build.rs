use std::collections::HashMap;

use rayon::prelude::*;

use super::distance::{ArcCoster, CostMode, CostModel, Features};
use super::prune::{keep_cheapest, CandidateArc, OrphanGuard, PruneConfig};
use super::GraphError;
use crate::flow::{Capacity, FlowNetwork, NodeId};
use crate::panel::{Panel, Panelist};

// rows are generated in parallel above this many candidate pairs
const PARALLEL_PAIRS: usize = 1 << 16;

/// Which panelist (or the balancing node) a network node stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Left(usize),
    Right(usize),
    Dummy,
}

/// Recovers panelist ids from node ids. Left panelists occupy nodes
/// `0..n_left`, right panelists the next `n_right`, and a balancing node, when
/// present, comes last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdMaps {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub dummy: Option<NodeId>,
    pub unit_scale: i64,
}

impl IdMaps {
    pub fn left_node(&self, i: usize) -> NodeId {
        NodeId(i)
    }

    pub fn right_node(&self, j: usize) -> NodeId {
        NodeId(self.left.len() + j)
    }

    pub fn endpoint(&self, node: NodeId) -> Endpoint {
        let (nl, nr) = (self.left.len(), self.right.len());
        match node.0 {
            i if i < nl => Endpoint::Left(i),
            i if i < nl + nr => Endpoint::Right(i - nl),
            _ => Endpoint::Dummy,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BipartiteGraph {
    pub network: FlowNetwork,
    pub maps: IdMaps,
    /// Left positions left without any arc (hard-mode exclusions).
    pub isolated_left: Vec<usize>,
    pub isolated_right: Vec<usize>,
    pub pruned: bool,
}

impl BipartiteGraph {
    pub fn has_isolated(&self) -> bool {
        !self.isolated_left.is_empty() || !self.isolated_right.is_empty()
    }
}

/// Builds the transportation network between two quantized panels.
pub fn build_bipartite(
    left: &Panel,
    right: &Panel,
    model: &CostModel,
    pruning: &PruneConfig,
) -> Result<BipartiteGraph, GraphError> {
    let unit_scale = match (left.unit_scale, right.unit_scale) {
        (Some(a), Some(b)) if a == b => a,
        (Some(_), Some(_)) => return Err(GraphError::UnitScaleMismatch),
        _ => return Err(GraphError::NotQuantized),
    };
    if left.schema.categorical != right.schema.categorical || left.schema.real != right.schema.real {
        let feature = left
            .schema
            .categorical
            .iter()
            .chain(&left.schema.real)
            .zip(right.schema.categorical.iter().chain(&right.schema.real))
            .find(|(a, b)| a != b)
            .map(|(a, _)| a.clone())
            .unwrap_or_default();
        return Err(GraphError::SchemaMismatch { feature });
    }
    let coster = ArcCoster::new(*model, left.schema.categorical.len());
    let l: Vec<&Panelist> = left.panelists.iter().collect();
    let r: Vec<&Panelist> = right.panelists.iter().collect();
    Ok(build_from_members(
        &l,
        &r,
        &coster,
        pruning.k_for(l.len(), r.len()),
        unit_scale,
    ))
}

/// Per-feature integer codes for categorical values.
fn encode<'a>(left: &[&'a Panelist], right: &[&'a Panelist]) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
    let n_cat = left.first().or(right.first()).map_or(0, |p| p.categorical.len());
    let mut dicts: Vec<HashMap<&'a str, u32>> = vec![HashMap::new(); n_cat];
    let l = codes(left, &mut dicts);
    let r = codes(right, &mut dicts);
    (l, r)
}

fn codes<'a>(side: &[&'a Panelist], dicts: &mut [HashMap<&'a str, u32>]) -> Vec<Vec<u32>> {
    side.iter()
        .map(|p| {
            p.categorical
                .iter()
                .zip(dicts.iter_mut())
                .map(|(v, d)| {
                    let next = d.len() as u32;
                    *d.entry(v.as_str()).or_insert(next)
                })
                .collect()
        })
        .collect()
}

/// Builds the network over explicit member lists (a cluster or a whole panel).
///
/// Arcs are emitted in (left, right) order; `prune_k` keeps only that many
/// cheapest arcs per left node, plus one restored arc per orphaned right node.
pub fn build_from_members(
    left: &[&Panelist],
    right: &[&Panelist],
    coster: &ArcCoster,
    prune_k: Option<usize>,
    unit_scale: i64,
) -> BipartiteGraph {
    let (lc, rc) = encode(left, right);
    let full_row = |i: usize| -> Vec<CandidateArc> {
        let a = Features {
            categorical: &lc[i][..],
            real: &left[i].real[..],
        };
        right
            .iter()
            .enumerate()
            .filter_map(|(j, q)| {
                let b = Features {
                    categorical: &rc[j][..],
                    real: &q.real[..],
                };
                coster.cost(a, b).map(|cost| CandidateArc {
                    left: i,
                    right: j,
                    cost,
                })
            })
            .collect()
    };

    let rows = match prune_k {
        None if left.len() * right.len() >= PARALLEL_PAIRS => (0..left.len()).into_par_iter().map(full_row).collect(),
        None => (0..left.len()).map(full_row).collect(),
        Some(k) => {
            // orphan restoration needs each right node's cheapest arc before pruning
            let visit = |(mut rows, mut guard): (Vec<(usize, Vec<CandidateArc>)>, OrphanGuard), i| {
                let mut row = full_row(i);
                row.iter().for_each(|a| guard.observe(a));
                keep_cheapest(&mut row, k);
                rows.push((i, row));
                (rows, guard)
            };
            let (mut indexed, guard) = if left.len() * right.len() >= PARALLEL_PAIRS {
                (0..left.len())
                    .into_par_iter()
                    .fold(|| (Vec::new(), OrphanGuard::new(right.len())), visit)
                    .reduce(
                        || (Vec::new(), OrphanGuard::new(right.len())),
                        |(mut a, mut ga), (b, gb)| {
                            a.extend(b);
                            ga.merge(gb);
                            (a, ga)
                        },
                    )
            } else {
                (0..left.len()).fold((Vec::new(), OrphanGuard::new(right.len())), visit)
            };
            indexed.sort_unstable_by_key(|(i, _)| *i);
            let mut rows: Vec<Vec<CandidateArc>> = indexed.into_iter().map(|(_, r)| r).collect();
            guard.restore(&mut rows);
            rows
        }
    };

    assemble(left, right, rows, prune_k.is_some(), unit_scale)
}

fn assemble(
    left: &[&Panelist],
    right: &[&Panelist],
    rows: Vec<Vec<CandidateArc>>,
    pruned: bool,
    unit_scale: i64,
) -> BipartiteGraph {
    let m: usize = rows.iter().map(Vec::len).sum();
    let mut network = FlowNetwork::with_capacity(left.len() + right.len() + 1, m + left.len().max(right.len()));
    for p in left {
        network.add_node(p.units);
    }
    for p in right {
        network.add_node(-p.units);
    }
    let maps = IdMaps {
        left: left.iter().map(|p| p.id.clone()).collect(),
        right: right.iter().map(|p| p.id.clone()).collect(),
        dummy: None,
        unit_scale,
    };
    let mut right_degree = vec![0usize; right.len()];
    let mut isolated_left = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if row.is_empty() {
            isolated_left.push(i);
        }
        for a in row {
            right_degree[a.right] += 1;
            network.add_arc(
                maps.left_node(a.left),
                maps.right_node(a.right),
                a.cost,
                Capacity::Unbounded,
            );
        }
    }
    let isolated_right = (0..right.len()).filter(|&j| right_degree[j] == 0).collect();
    BipartiteGraph {
        network,
        maps,
        isolated_left,
        isolated_right,
        pruned,
    }
}

/// Number of arcs an unpruned build would create.
pub fn estimate_arc_count(left: &Panel, right: &Panel, mode: CostMode) -> u64 {
    match mode {
        CostMode::Soft => left.len() as u64 * right.len() as u64,
        CostMode::Hard => {
            let mut blocks: HashMap<&[String], (u64, u64)> = HashMap::new();
            for p in &left.panelists {
                blocks.entry(&p.categorical[..]).or_default().0 += 1;
            }
            for p in &right.panelists {
                blocks.entry(&p.categorical[..]).or_default().1 += 1;
            }
            blocks.values().map(|(l, r)| l * r).sum()
        }
    }
}
