use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{LogNormal, StandardNormal};
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::panel::{Panel, PanelSchema, Panelist};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoricalSpec {
    pub name: String,
    pub levels: Vec<String>,
    /// Relative frequency per level.
    pub probs: Vec<f64>,
}

/// A lognormal real feature. When `driver` names a categorical, the log-mean
/// moves by `shift` per level index of that categorical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealSpec {
    pub name: String,
    pub mu: f64,
    pub sigma: f64,
    #[serde(default)]
    pub driver: Option<String>,
    #[serde(default)]
    pub shift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub categorical: Vec<CategoricalSpec>,
    pub real: Vec<RealSpec>,
    /// Spread of the log of the raw weights.
    #[serde(default = "default_weight_sigma")]
    pub weight_sigma: f64,
}

fn default_weight_sigma() -> f64 {
    0.5
}

fn levels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

impl SynthSpec {
    /// Four demographic categoricals (240 profiles) and four minutes-style
    /// reals, each tied to one categorical.
    pub fn demo() -> Self {
        let cat = |name: &str, prefix: &str, probs: &[f64]| CategoricalSpec {
            name: name.into(),
            levels: levels(prefix, probs.len()),
            probs: probs.to_vec(),
        };
        let real = |name: &str, mu: f64, driver: &str, shift: f64| RealSpec {
            name: name.into(),
            mu,
            sigma: 0.8,
            driver: Some(driver.into()),
            shift,
        };
        Self {
            categorical: vec![
                cat("age", "a", &[0.12, 0.18, 0.2, 0.2, 0.16, 0.14]),
                cat("gender", "g", &[0.49, 0.51]),
                cat("income", "i", &[0.2, 0.25, 0.25, 0.18, 0.12]),
                cat("children", "c", &[0.6, 0.4]),
            ],
            real: vec![
                real("news", 3.0, "age", 0.25),
                real("social", 3.5, "gender", -0.3),
                real("video", 4.0, "income", 0.15),
                real("shopping", 2.5, "children", 0.4),
            ],
            weight_sigma: default_weight_sigma(),
        }
    }

    pub fn schema(&self) -> PanelSchema {
        PanelSchema {
            categorical: self.categorical.iter().map(|c| c.name.clone()).collect(),
            real: self.real.iter().map(|r| r.name.clone()).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        let bad = |m: String| Err(EvalError::Spec(m));
        for c in &self.categorical {
            if c.levels.is_empty() || c.levels.len() != c.probs.len() {
                return bad(format!("categorical `{}` needs one probability per level", c.name));
            }
            if c.probs.iter().any(|p| !(*p >= 0.0)) || c.probs.iter().sum::<f64>() <= 0.0 {
                return bad(format!("categorical `{}` has invalid probabilities", c.name));
            }
        }
        for r in &self.real {
            if !(r.sigma >= 0.0) || !r.mu.is_finite() || !r.shift.is_finite() {
                return bad(format!("real `{}` has invalid parameters", r.name));
            }
            if let Some(d) = &r.driver {
                if !self.categorical.iter().any(|c| &c.name == d) {
                    return bad(format!("real `{}` is driven by unknown categorical `{d}`", r.name));
                }
            }
        }
        let mut names: Vec<&str> = self
            .categorical
            .iter()
            .map(|c| c.name.as_str())
            .chain(self.real.iter().map(|r| r.name.as_str()))
            .collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return bad("feature names must be unique".into());
        }
        if !(self.weight_sigma >= 0.0) {
            return bad("weight_sigma must be >= 0".into());
        }
        Ok(())
    }
}

/// Splits `total` thousandths over raw shares: floor each share (at least 1)
/// and give the remainder to the largest raw share (ties to the smaller index).
fn thousandths(raw: &[f64], total: i64) -> Result<Vec<i64>, EvalError> {
    let sum: f64 = raw.iter().sum();
    let mut k: Vec<i64> = raw
        .iter()
        .map(|r| ((r / sum * total as f64).floor() as i64).max(1))
        .collect();
    let drift = total - k.iter().sum::<i64>();
    let largest = (0..raw.len())
        .max_by(|&a, &b| raw[a].total_cmp(&raw[b]).then(b.cmp(&a)))
        .expect("nonempty");
    k[largest] += drift;
    if k[largest] < 1 {
        return Err(EvalError::Spec("universe too small for the panel size".into()));
    }
    Ok(k)
}

fn synth_panel(
    n: usize,
    spec: &SynthSpec,
    universe_total: f64,
    prefix: &str,
    rng: &mut ChaCha8Rng,
) -> Result<Panel, EvalError> {
    let pickers: Vec<WeightedIndex<f64>> = spec
        .categorical
        .iter()
        .map(|c| WeightedIndex::new(&c.probs).map_err(|e| EvalError::Spec(format!("{}: {e}", c.name))))
        .collect::<Result<_, _>>()?;
    let drivers: Vec<Option<usize>> = spec
        .real
        .iter()
        .map(|r| {
            r.driver
                .as_ref()
                .and_then(|d| spec.categorical.iter().position(|c| &c.name == d))
        })
        .collect();
    let width = n.to_string().len();
    let total = (universe_total * 1000.0).round() as i64;
    if total < n as i64 {
        return Err(EvalError::Spec("universe too small for the panel size".into()));
    }

    let mut raw = Vec::with_capacity(n);
    let mut people = Vec::with_capacity(n);
    for i in 0..n {
        let z: f64 = rng.sample(StandardNormal);
        raw.push((spec.weight_sigma * z).exp());
        let level: Vec<usize> = pickers.iter().map(|p| p.sample(rng)).collect();
        let categorical = level
            .iter()
            .zip(&spec.categorical)
            .map(|(&l, c)| c.levels[l].clone())
            .collect();
        let real = spec
            .real
            .iter()
            .zip(&drivers)
            .map(|(r, d)| {
                let mu = r.mu + d.map_or(0.0, |d| r.shift * level[d] as f64);
                let dist = LogNormal::new(mu, r.sigma).map_err(|e| EvalError::Spec(format!("{}: {e}", r.name)))?;
                Ok(dist.sample(rng))
            })
            .collect::<Result<Vec<f64>, EvalError>>()?;
        people.push(Panelist {
            id: format!("{prefix}{i:0width$}"),
            weight: 0.0,
            units: 0,
            categorical,
            real,
        });
    }
    for (p, k) in people.iter_mut().zip(thousandths(&raw, total)?) {
        p.weight = k as f64 / 1000.0;
    }
    Ok(Panel::new(spec.schema(), people)?)
}

/// Two seeded synthetic panels whose weights (in thousandths) sum exactly to
/// `universe_total` on each side. Left ids start with `L`, right ids with `R`.
pub fn synth_panels(
    n1: usize,
    n2: usize,
    spec: &SynthSpec,
    universe_total: f64,
    seed: u64,
) -> Result<(Panel, Panel), EvalError> {
    if n1 == 0 || n2 == 0 {
        return Err(EvalError::Spec("panel sizes must be >= 1".into()));
    }
    if !(universe_total > 0.0) || !universe_total.is_finite() {
        return Err(EvalError::Spec("universe_total must be positive".into()));
    }
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let left = synth_panel(n1, spec, universe_total, "L", &mut rng)?;
    let right = synth_panel(n2, spec, universe_total, "R", &mut rng)?;
    Ok((left, right))
}

/// Copies the features of one panelist onto another for `round(rate · n)`
/// disjoint pairs, leaving ids and weights alone.
pub fn inject_duplicates(panel: &Panel, rate: f64, seed: u64) -> Panel {
    let mut out = panel.clone();
    let n = out.len();
    let count = ((rate * n as f64).round() as usize).min(n / 2);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    for pair in order.chunks_exact(2).take(count) {
        let (src, dst) = (pair[0], pair[1]);
        out.panelists[dst].categorical = out.panelists[src].categorical.clone();
        out.panelists[dst].real = out.panelists[src].real.clone();
    }
    out
}
