use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{AttributeKind, Instance, Value};
use crate::error::{Error, Result};

/// Per-attribute kinds read from a typing sidecar (`name:numeric|categorical`
/// per line, `#` comments allowed).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SchemaHint {
    kinds: HashMap<String, AttributeKind>,
}

impl SchemaHint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, kind: AttributeKind) -> Self {
        self.kinds.insert(name.to_string(), kind);
        self
    }

    pub fn kind_of(&self, name: &str) -> Option<AttributeKind> {
        self.kinds.get(name).copied()
    }
}

pub fn parse_schema_hint(text: &str) -> Result<SchemaHint> {
    let mut hint = SchemaHint::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, kind) = line.rsplit_once(':').ok_or_else(|| Error::SchemaHint {
            line: idx + 1,
            message: format!("expected `name:numeric|categorical`, got `{line}`"),
        })?;
        let kind = match kind.trim() {
            "numeric" => AttributeKind::Numeric,
            "categorical" => AttributeKind::Categorical,
            other => {
                return Err(Error::SchemaHint {
                    line: idx + 1,
                    message: format!("unknown kind `{other}`"),
                })
            }
        };
        hint.kinds.insert(name.trim().to_string(), kind);
    }
    Ok(hint)
}

pub fn write_schema_hint(inst: &Instance) -> String {
    inst.schema()
        .iter()
        .map(|a| format!("{}:{}\n", a.name, a.kind))
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    pub schema_hint: Option<SchemaHint>,
    /// Replace empty cells with the column mode instead of rejecting them.
    pub fill_missing_with_mode: bool,
}

pub fn load_csv(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<Instance> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, opts)
}

pub fn read_csv<R: Read>(reader: R, opts: &LoadOptions) -> Result<Instance> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);

    let mut records = rdr.records();
    let header = match records.next() {
        Some(r) => r?,
        None => return Err(Error::EmptyInput),
    };
    let names: Vec<String> = header.iter().map(|s| s.trim().to_string()).collect();
    let m = names.len();

    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut lines: Vec<usize> = Vec::new();
    for rec in records {
        let rec = rec?;
        let line = rec.position().map_or(cells.len() + 2, |p| p.line() as usize);
        if rec.len() == 1 && rec.get(0).is_some_and(|c| c.trim().is_empty()) && m > 1 {
            // blank line
            continue;
        }
        if rec.len() != m {
            return Err(Error::RaggedRow {
                line,
                expected: m,
                found: rec.len(),
            });
        }
        cells.push(rec.iter().map(|s| s.trim().to_string()).collect());
        lines.push(line);
    }

    let mut columns = Vec::with_capacity(m);
    for (j, name) in names.iter().enumerate() {
        let hinted = opts.schema_hint.as_ref().and_then(|h| h.kind_of(name));
        let kind = hinted.unwrap_or_else(|| {
            let numeric = cells
                .iter()
                .map(|row| row[j].as_str())
                .filter(|c| !c.is_empty())
                .all(|c| c.parse::<f64>().is_ok_and(f64::is_finite));
            if numeric {
                AttributeKind::Numeric
            } else {
                AttributeKind::Categorical
            }
        });
        columns.push((name.clone(), kind));
    }

    for (j, (name, _)) in columns.iter().enumerate() {
        if let Some(row) = cells.iter().position(|r| r[j].is_empty()) {
            if !opts.fill_missing_with_mode {
                return Err(Error::MissingValue {
                    column: name.clone(),
                    line: lines[row],
                });
            }
            let mode = column_mode(&cells, j).ok_or_else(|| Error::MissingValue {
                column: name.clone(),
                line: lines[row],
            })?;
            for r in cells.iter_mut() {
                if r[j].is_empty() {
                    r[j] = mode.clone();
                }
            }
        }
    }

    let mut rows = Vec::with_capacity(cells.len());
    for (row, line) in cells.into_iter().zip(lines) {
        let mut values = Vec::with_capacity(m);
        for (j, cell) in row.into_iter().enumerate() {
            let value = match columns[j].1 {
                AttributeKind::Numeric => match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => Value::Num(v),
                    _ => {
                        return Err(Error::NotNumeric {
                            column: columns[j].0.clone(),
                            line,
                            value: cell,
                        })
                    }
                },
                AttributeKind::Categorical => Value::Text(cell),
            };
            values.push(value);
        }
        rows.push(values);
    }
    Instance::new(columns, rows)
}

/// Most frequent non-empty cell; ties go to the lexicographically smallest.
fn column_mode(cells: &[Vec<String>], j: usize) -> Option<String> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for row in cells {
        if !row[j].is_empty() {
            *counts.entry(row[j].as_str()).or_default() += 1;
        }
    }
    counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(a.0)))
        .map(|(s, _)| s.to_string())
}

pub fn write_csv<W: Write>(inst: &Instance, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(inst.schema().iter().map(|a| a.name.as_str()))?;
    for t in inst.tuples() {
        w.write_record(t.values.iter().map(|v| v.to_string()))?;
    }
    w.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}
