//! CSV formats.
//!
//! Panel: `id,weight,cat:<name>...,num:<name>...`.
//! Assignments: `left_id,right_id,weight,units`, sorted by (left_id, right_id).

use std::collections::HashSet;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{Panel, PanelError, PanelSchema, Panelist};
use crate::fusion::{AssignedPair, AssignmentSet};

const ASSIGNMENT_HEADER: [&str; 4] = ["left_id", "right_id", "weight", "units"];

enum Column {
    Cat(usize),
    Num(usize),
}

fn io_err(path: &Path, source: std::io::Error) -> PanelError {
    PanelError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path, e: csv::Error) -> PanelError {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => io_err(path, source),
        other => PanelError::Parse {
            line,
            message: format!("{other:?}"),
        },
    }
}

pub fn load_panel(path: impl AsRef<Path>) -> Result<Panel, PanelError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    read_panel_inner(file, path)
}

/// Reads a panel from any reader (used for in-memory data).
pub fn read_panel<R: Read>(reader: R) -> Result<Panel, PanelError> {
    read_panel_inner(reader, Path::new("<reader>"))
}

fn parse_header(header: &csv::StringRecord) -> Result<(PanelSchema, Vec<Column>), PanelError> {
    if header.get(0) != Some("id") || header.get(1) != Some("weight") {
        return Err(PanelError::Header("first two columns must be `id,weight`".into()));
    }
    let mut schema = PanelSchema::default();
    let mut columns = Vec::new();
    let mut names = HashSet::new();
    for field in header.iter().skip(2) {
        let (col, name) = if let Some(name) = field.strip_prefix("cat:") {
            (Column::Cat(schema.categorical.len()), name)
        } else if let Some(name) = field.strip_prefix("num:") {
            (Column::Num(schema.real.len()), name)
        } else {
            return Err(PanelError::Header(format!(
                "column `{field}` lacks a `cat:` or `num:` prefix"
            )));
        };
        if name.is_empty() || !names.insert(name.to_string()) {
            return Err(PanelError::Header(format!("empty or repeated feature name `{name}`")));
        }
        match col {
            Column::Cat(_) => schema.categorical.push(name.to_string()),
            Column::Num(_) => schema.real.push(name.to_string()),
        }
        columns.push(col);
    }
    Ok((schema, columns))
}

fn read_panel_inner<R: Read>(reader: R, path: &Path) -> Result<Panel, PanelError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let header = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    let (schema, columns) = parse_header(&header)?;

    let mut panelists = Vec::new();
    let mut seen = HashSet::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_err(path, e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != header.len() {
            return Err(PanelError::Arity {
                line,
                expected: header.len(),
                found: record.len(),
            });
        }
        let id = record[0].to_string();
        let weight: f64 = record[1].trim().parse().map_err(|_| PanelError::NonNumeric {
            line,
            column: "weight".into(),
            value: record[1].to_string(),
        })?;
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(PanelError::NonPositiveWeight { line, value: weight });
        }
        let mut categorical = vec![String::new(); schema.categorical.len()];
        let mut real = vec![0.0; schema.real.len()];
        for (k, col) in columns.iter().enumerate() {
            let raw = &record[k + 2];
            match *col {
                Column::Cat(i) => categorical[i] = raw.to_string(),
                Column::Num(i) => {
                    real[i] = raw
                        .trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| PanelError::NonNumeric {
                            line,
                            column: header[k + 2].to_string(),
                            value: raw.to_string(),
                        })?;
                }
            }
        }
        if !seen.insert(id.clone()) {
            return Err(PanelError::DuplicateId { line, id });
        }
        panelists.push(Panelist {
            id,
            weight,
            units: 0,
            categorical,
            real,
        });
    }
    Panel::new(schema, panelists)
}

pub fn write_panel(panel: &Panel, path: impl AsRef<Path>) -> Result<(), PanelError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    let mut header = vec!["id".to_string(), "weight".to_string()];
    header.extend(panel.schema.categorical.iter().map(|n| format!("cat:{n}")));
    header.extend(panel.schema.real.iter().map(|n| format!("num:{n}")));
    w.write_record(&header).map_err(|e| csv_err(path, e))?;
    for p in &panel.panelists {
        let mut row = vec![p.id.clone(), p.weight.to_string()];
        row.extend(p.categorical.iter().cloned());
        row.extend(p.real.iter().map(f64::to_string));
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn write_assignments(set: &AssignmentSet, path: impl AsRef<Path>) -> Result<(), PanelError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    write_assignments_to(set, file).map_err(|e| match e {
        PanelError::Io { source, .. } => io_err(path, source),
        other => other,
    })
}

pub fn write_assignments_to<W: Write>(set: &AssignmentSet, writer: W) -> Result<(), PanelError> {
    let path = Path::new("<writer>");
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(ASSIGNMENT_HEADER).map_err(|e| csv_err(path, e))?;
    let mut rows: Vec<&AssignedPair> = set.pairs.iter().collect();
    rows.sort_by(|a, b| (&a.left_id, &a.right_id).cmp(&(&b.left_id, &b.right_id)));
    for p in rows {
        w.write_record([
            p.left_id.as_str(),
            p.right_id.as_str(),
            &p.weight.to_string(),
            &p.units.to_string(),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn read_assignments(path: impl AsRef<Path>) -> Result<AssignmentSet, PanelError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(file);
    let header = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    if header.iter().ne(ASSIGNMENT_HEADER) {
        return Err(PanelError::Header(format!(
            "expected `{}`",
            ASSIGNMENT_HEADER.join(",")
        )));
    }
    let mut pairs = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_err(path, e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 4 {
            return Err(PanelError::Arity {
                line,
                expected: 4,
                found: record.len(),
            });
        }
        let numeric = |k: usize| PanelError::NonNumeric {
            line,
            column: ASSIGNMENT_HEADER[k].into(),
            value: record[k].to_string(),
        };
        let weight: f64 = record[2].parse().map_err(|_| numeric(2))?;
        let units: i64 = record[3].parse().map_err(|_| numeric(3))?;
        if units < 0 {
            return Err(numeric(3));
        }
        pairs.push(AssignedPair {
            left_id: record[0].to_string(),
            right_id: record[1].to_string(),
            weight,
            units,
        });
    }
    Ok(AssignmentSet { pairs })
}
