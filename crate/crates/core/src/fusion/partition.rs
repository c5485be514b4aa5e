use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::FusionError;
use crate::panel::{Panel, PanelSchema};

/// Ordered categorical subsets to partition on, loosest last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelaxationSchedule {
    stages: Vec<Vec<String>>,
}

impl RelaxationSchedule {
    pub fn new(stages: Vec<Vec<String>>) -> Result<Self, FusionError> {
        if stages.last().is_none_or(|s| !s.is_empty()) {
            return Err(FusionError::Schedule(
                "the final stage must be the empty feature set".into(),
            ));
        }
        Ok(Self { stages })
    }

    /// Just the unpartitioned stage.
    pub fn single() -> Self {
        Self { stages: vec![vec![]] }
    }

    /// All categoricals first, then drops the last remaining one per stage.
    pub fn progressive(categorical: &[String]) -> Self {
        let stages = (0..=categorical.len())
            .rev()
            .map(|n| categorical[..n].to_vec())
            .collect();
        Self { stages }
    }

    pub fn stages(&self) -> &[Vec<String>] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Stage features as categorical column indices.
    pub fn resolve(&self, schema: &PanelSchema) -> Result<Vec<Vec<usize>>, FusionError> {
        self.stages
            .iter()
            .map(|stage| {
                stage
                    .iter()
                    .map(|name| {
                        schema
                            .categorical
                            .iter()
                            .position(|c| c == name)
                            .ok_or_else(|| FusionError::UnknownFeature(name.clone()))
                    })
                    .collect()
            })
            .collect()
    }
}

/// Panelists sharing one value tuple on the stage features.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub key: Vec<String>,
    /// Positions in the left panel.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    /// Ordered by key.
    pub clusters: Vec<Cluster>,
    /// Positions whose key has no counterpart on the other side.
    pub deferred_left: Vec<usize>,
    pub deferred_right: Vec<usize>,
}

/// Groups both panels by their values on `features` (categorical indices).
pub fn partition(left: &Panel, right: &Panel, features: &[usize]) -> Partition {
    let key = |c: &[String]| -> Vec<String> { features.iter().map(|&f| c[f].clone()).collect() };
    let mut groups: BTreeMap<Vec<String>, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, p) in left.panelists.iter().enumerate() {
        groups.entry(key(&p.categorical)).or_default().0.push(i);
    }
    for (j, p) in right.panelists.iter().enumerate() {
        groups.entry(key(&p.categorical)).or_default().1.push(j);
    }
    let mut out = Partition {
        clusters: Vec::new(),
        deferred_left: Vec::new(),
        deferred_right: Vec::new(),
    };
    for (key, (l, r)) in groups {
        if l.is_empty() {
            out.deferred_right.extend(r);
        } else if r.is_empty() {
            out.deferred_left.extend(l);
        } else {
            out.clusters.push(Cluster { key, left: l, right: r });
        }
    }
    out.deferred_left.sort_unstable();
    out.deferred_right.sort_unstable();
    out
}
