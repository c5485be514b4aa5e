use serde::{Deserialize, Serialize};

/// How categorical mismatches are priced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostMode {
    /// Any mismatch excludes the pair.
    Hard,
    /// Each mismatch adds `penalty`.
    Soft,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostModel {
    pub mode: CostMode,
    /// Integer cost added per mismatched categorical feature (soft mode only).
    pub penalty: i64,
    /// Multiplier turning the squared normalized distance into integer cost.
    pub cost_scale: i64,
}

pub const DEFAULT_COST_SCALE: i64 = 1_000_000;

impl CostModel {
    pub fn hard(cost_scale: i64) -> Self {
        Self {
            mode: CostMode::Hard,
            penalty: 0,
            cost_scale,
        }
    }

    pub fn soft(penalty: i64, cost_scale: i64) -> Self {
        Self {
            mode: CostMode::Soft,
            penalty,
            cost_scale,
        }
    }
}

/// Borrowed feature vector of one panelist.
#[derive(Debug, Clone, Copy)]
pub struct Features<'a, C> {
    pub categorical: &'a [C],
    pub real: &'a [f64],
}

/// Integer arc cost between two panelists, `None` when the pair is excluded.
///
/// Real components are expected to be normalized already.
pub fn distance<C: PartialEq>(a: Features<'_, C>, b: Features<'_, C>, model: &CostModel) -> Option<i64> {
    let all_hard = model.mode == CostMode::Hard;
    let mut mismatches = 0i64;
    for (x, y) in a.categorical.iter().zip(b.categorical) {
        if x != y {
            if all_hard {
                return None;
            }
            mismatches += 1;
        }
    }
    Some(real_cost(a.real, b.real, model.cost_scale) + model.penalty * mismatches)
}

pub(crate) fn real_cost(a: &[f64], b: &[f64], cost_scale: i64) -> i64 {
    let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (cost_scale as f64 * sq).round() as i64
}

/// A cost model with a per-feature hard/soft choice, as used inside
/// partitioned stages: features in `hard` exclude on mismatch, the rest are
/// penalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcCoster {
    pub model: CostModel,
    hard: Vec<bool>,
}

impl ArcCoster {
    pub fn new(model: CostModel, categorical_count: usize) -> Self {
        Self {
            hard: vec![model.mode == CostMode::Hard; categorical_count],
            model,
        }
    }

    /// Hard on the listed categorical indices, soft on the others.
    pub fn hard_on(model: CostModel, categorical_count: usize, features: &[usize]) -> Self {
        let mut hard = vec![false; categorical_count];
        for &f in features {
            hard[f] = true;
        }
        Self { model, hard }
    }

    pub fn cost<C: PartialEq>(&self, a: Features<'_, C>, b: Features<'_, C>) -> Option<i64> {
        let mut mismatches = 0i64;
        for ((x, y), hard) in a.categorical.iter().zip(b.categorical).zip(&self.hard) {
            if x != y {
                if *hard {
                    return None;
                }
                mismatches += 1;
            }
        }
        Some(real_cost(a.real, b.real, self.model.cost_scale) + self.model.penalty * mismatches)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f<'a>(c: &'a [&'a str], r: &'a [f64]) -> Features<'a, &'a str> {
        Features {
            categorical: c,
            real: r,
        }
    }

    #[test]
    fn squared_distance_scaled() {
        // [1,2] vs [1,4] over range 4 (min 0) normalizes to [.25,.5] vs [.25,1]
        let m = CostModel::hard(100);
        assert_eq!(distance(f(&["A"], &[0.25, 0.5]), f(&["A"], &[0.25, 1.0]), &m), Some(25));
    }

    #[test]
    fn identical_is_zero() {
        let z = f(&["A", "B"], &[0.1, 0.7]);
        assert_eq!(distance(z, z, &CostModel::hard(DEFAULT_COST_SCALE)), Some(0));
        assert_eq!(distance(z, z, &CostModel::soft(1000, DEFAULT_COST_SCALE)), Some(0));
    }

    #[test]
    fn soft_penalty_per_mismatch() {
        let m = CostModel::soft(1000, DEFAULT_COST_SCALE);
        assert_eq!(distance(f(&["M"], &[0.3]), f(&["F"], &[0.3]), &m), Some(1000));
        assert_eq!(distance(f(&["M", "x"], &[0.3]), f(&["F", "y"], &[0.3]), &m), Some(2000));
        assert_eq!(
            distance(f(&["M"], &[0.3]), f(&["F"], &[0.3]), &CostModel::hard(10)),
            None
        );
    }

    #[test]
    fn coster_mixes_hard_and_soft() {
        let c = ArcCoster::hard_on(CostModel::soft(7, 10), 2, &[0]);
        assert_eq!(c.cost(f(&["a", "x"], &[]), f(&["b", "x"], &[])), None);
        assert_eq!(c.cost(f(&["a", "x"], &[]), f(&["a", "y"], &[])), Some(7));
        let all = ArcCoster::new(CostModel::hard(10), 2);
        assert_eq!(all.cost(f(&["a", "x"], &[]), f(&["a", "y"], &[])), None);
    }
}
