use serde::{Deserialize, Serialize};

/// A priced left→right pair before it becomes a network arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CandidateArc {
    pub left: usize,
    pub right: usize,
    pub cost: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PruneConfig {
    pub enabled: bool,
    /// Arcs kept per left node; `None` picks [`default_prune_k`].
    pub k: Option<usize>,
}

impl Default for PruneConfig {
    fn default() -> Self {
        Self { enabled: true, k: None }
    }
}

impl PruneConfig {
    pub fn disabled() -> Self {
        Self {
            enabled: false,
            k: None,
        }
    }

    pub fn with_k(k: usize) -> Self {
        Self {
            enabled: true,
            k: Some(k),
        }
    }

    /// Effective k for a graph with the given side sizes, `None` if disabled.
    pub fn k_for(&self, n_left: usize, n_right: usize) -> Option<usize> {
        self.enabled
            .then(|| self.k.unwrap_or_else(|| default_prune_k(n_left, n_right)).max(1))
    }
}

/// `max(16, ceil(2·log2(n1 + n2)))`.
pub fn default_prune_k(n_left: usize, n_right: usize) -> usize {
    let n = (n_left + n_right).max(1) as f64;
    16usize.max((2.0 * n.log2()).ceil() as usize)
}

fn by_cost_then_right(a: &CandidateArc, b: &CandidateArc) -> std::cmp::Ordering {
    (a.cost, a.right).cmp(&(b.cost, b.right))
}

/// Keeps the `k` cheapest arcs of one left node's row, ordered by right index.
pub(crate) fn keep_cheapest(row: &mut Vec<CandidateArc>, k: usize) {
    if row.len() > k {
        row.select_nth_unstable_by(k - 1, by_cost_then_right);
        row.truncate(k);
    }
    row.sort_unstable_by_key(|a| a.right);
}

/// Tracks the cheapest arc seen per right node (ties to the smaller left).
pub(crate) struct OrphanGuard {
    best: Vec<Option<CandidateArc>>,
}

impl OrphanGuard {
    pub(crate) fn new(n_right: usize) -> Self {
        Self {
            best: vec![None; n_right],
        }
    }

    pub(crate) fn observe(&mut self, arc: &CandidateArc) {
        let slot = &mut self.best[arc.right];
        if slot.is_none_or(|b| (arc.cost, arc.left) < (b.cost, b.left)) {
            *slot = Some(*arc);
        }
    }

    pub(crate) fn merge(&mut self, other: OrphanGuard) {
        for arc in other.best.into_iter().flatten() {
            self.observe(&arc);
        }
    }

    /// Restores one arc for every right node that had arcs but kept none.
    pub(crate) fn restore(self, rows: &mut [Vec<CandidateArc>]) {
        let mut covered = vec![false; self.best.len()];
        for row in rows.iter() {
            for a in row {
                covered[a.right] = true;
            }
        }
        for (r, best) in self.best.into_iter().enumerate() {
            if let (false, Some(arc)) = (covered[r], best) {
                let row = &mut rows[arc.left];
                let at = row.partition_point(|a| a.right < r);
                row.insert(at, arc);
            }
        }
    }
}

/// Keeps the `k` cheapest arcs per left node (ties by right index), then
/// gives every right node that lost all its arcs back its cheapest one.
///
/// `rows[i]` holds the candidates of left node `i`. The result is ordered by
/// (left, right).
pub fn prune_edges(rows: &[Vec<CandidateArc>], n_right: usize, k: usize) -> Vec<CandidateArc> {
    let k = k.max(1);
    let mut guard = OrphanGuard::new(n_right);
    let mut kept: Vec<Vec<CandidateArc>> = rows
        .iter()
        .map(|row| {
            row.iter().for_each(|a| guard.observe(a));
            let mut row = row.clone();
            keep_cheapest(&mut row, k);
            row
        })
        .collect();
    guard.restore(&mut kept);
    kept.into_iter().flatten().collect()
}
