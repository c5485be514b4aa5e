//! Panel datasets: loading, validation, weight quantization and the
//! assignment/config file formats.

mod config;
mod io;
mod quantize;

pub use config::{FusionConfig, DEFAULT_PENALTY_FACTOR, DEFAULT_SINGLE_ARC_CAP};
pub use io::{load_panel, read_assignments, read_panel, write_assignments, write_assignments_to, write_panel};
pub use quantize::{quantize_weights, DEFAULT_UNIT_SCALE, DEFAULT_UNIVERSE_TOLERANCE};

use std::collections::HashSet;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PanelError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("bad header: {0}")]
    Header(String),
    #[error("line {line}: duplicate id `{id}`")]
    DuplicateId { line: u64, id: String },
    #[error("line {line}: non-positive weight {value}")]
    NonPositiveWeight { line: u64, value: f64 },
    #[error("line {line}: expected {expected} fields, found {found}")]
    Arity { line: u64, expected: usize, found: usize },
    #[error("line {line}: non-numeric value `{value}` in column `{column}`")]
    NonNumeric { line: u64, column: String, value: String },
    #[error("universe mismatch: left total weight {left:.3} vs right total weight {right:.3}")]
    UniverseMismatch { left: f64, right: f64 },
    #[error("quantization failed: {0}")]
    Quantization(String),
    #[error("invalid config: {0}")]
    Config(String),
}

/// Ordered feature names of a panel.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PanelSchema {
    pub categorical: Vec<String>,
    pub real: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panelist {
    pub id: String,
    /// Projection weight in universe persons.
    pub weight: f64,
    /// Integer weight units; 0 until quantized.
    pub units: i64,
    pub categorical: Vec<String>,
    pub real: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub schema: PanelSchema,
    pub panelists: Vec<Panelist>,
    /// Units per universe person once quantized.
    pub unit_scale: Option<i64>,
}

impl Panel {
    /// Builds a panel, checking id uniqueness, weights and feature arity.
    /// Error line numbers count the header as line 1.
    pub fn new(schema: PanelSchema, panelists: Vec<Panelist>) -> Result<Self, PanelError> {
        let mut seen = HashSet::with_capacity(panelists.len());
        for (i, p) in panelists.iter().enumerate() {
            let line = i as u64 + 2;
            if !seen.insert(p.id.as_str()) {
                return Err(PanelError::DuplicateId { line, id: p.id.clone() });
            }
            if !(p.weight > 0.0) || !p.weight.is_finite() {
                return Err(PanelError::NonPositiveWeight { line, value: p.weight });
            }
            let expected = schema.categorical.len() + schema.real.len();
            let found = p.categorical.len() + p.real.len();
            if p.categorical.len() != schema.categorical.len() || p.real.len() != schema.real.len() {
                return Err(PanelError::Arity { line, expected, found });
            }
        }
        Ok(Self {
            schema,
            panelists,
            unit_scale: None,
        })
    }

    pub fn len(&self) -> usize {
        self.panelists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.panelists.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.panelists.iter().map(|p| p.weight).sum()
    }

    pub fn total_units(&self) -> i64 {
        self.panelists.iter().map(|p| p.units).sum()
    }

    pub fn categorical_index(&self, name: &str) -> Option<usize> {
        self.schema.categorical.iter().position(|n| n == name)
    }

    pub fn get(&self, id: &str) -> Option<&Panelist> {
        self.panelists.iter().find(|p| p.id == id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn person(id: &str, w: f64) -> Panelist {
        Panelist {
            id: id.into(),
            weight: w,
            units: 0,
            categorical: vec!["A".into()],
            real: vec![1.0],
        }
    }

    fn schema() -> PanelSchema {
        PanelSchema {
            categorical: vec!["g".into()],
            real: vec!["m".into()],
        }
    }

    #[test]
    fn rejects_duplicates_and_bad_weights() {
        let err = Panel::new(schema(), vec![person("a", 1.0), person("a", 2.0)]).unwrap_err();
        assert!(matches!(err, PanelError::DuplicateId { line: 3, .. }));
        let err = Panel::new(schema(), vec![person("a", 0.0)]).unwrap_err();
        assert!(err.to_string().contains("non-positive weight"));
        let err = Panel::new(schema(), vec![person("a", f64::NAN)]).unwrap_err();
        assert!(matches!(err, PanelError::NonPositiveWeight { .. }));
    }

    #[test]
    fn rejects_arity() {
        let mut p = person("a", 1.0);
        p.real.push(2.0);
        let err = Panel::new(schema(), vec![p]).unwrap_err();
        assert!(matches!(
            err,
            PanelError::Arity {
                expected: 2,
                found: 3,
                ..
            }
        ));
    }

    #[test]
    fn totals() {
        let panel = Panel::new(schema(), vec![person("a", 1.5), person("b", 2.5)]).unwrap();
        assert_eq!(panel.total_weight(), 4.0);
        assert_eq!(panel.len(), 2);
        assert_eq!(panel.get("b").unwrap().weight, 2.5);
    }
}
