//! Rendering of command results as JSON, CSV or an aligned text table.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Opens `path` for writing, or stdout when no path is given.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes one JSON document (an object, or an array of objects) in `format`.
pub fn render(value: &Value, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer(&mut *out, value)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let rows = rows_of(value);
            let header = columns(&rows);
            let mut writer = csv::Writer::from_writer(&mut *out);
            writer.write_record(&header)?;
            for row in &rows {
                writer.write_record(header.iter().map(|k| cell(row.get(k))))?;
            }
            writer.flush()?;
        }
        Format::Table => match value {
            Value::Array(_) => {
                let rows = rows_of(value);
                let header = columns(&rows);
                let cells: Vec<Vec<String>> = rows
                    .iter()
                    .map(|row| header.iter().map(|k| cell(row.get(k))).collect())
                    .collect();
                let widths: Vec<usize> = header
                    .iter()
                    .enumerate()
                    .map(|(i, h)| cells.iter().map(|c| c[i].len()).fold(h.len(), usize::max))
                    .collect();
                let line = |fields: Vec<&str>| {
                    fields
                        .iter()
                        .zip(&widths)
                        .map(|(f, w)| format!("{f:<w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                        .trim_end()
                        .to_string()
                };
                writeln!(out, "{}", line(header.iter().map(String::as_str).collect()))?;
                for row in &cells {
                    writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
                }
            }
            _ => {
                let rows = rows_of(value);
                let width = rows
                    .first()
                    .map_or(0, |r| r.keys().map(String::len).max().unwrap_or(0));
                for row in rows {
                    for (k, v) in &row {
                        writeln!(out, "{k:<width$}  {}", cell(Some(v)))?;
                    }
                }
            }
        },
    }
    out.flush()?;
    Ok(())
}

fn rows_of(value: &Value) -> Vec<Map<String, Value>> {
    match value {
        Value::Array(items) => items.iter().map(as_row).collect(),
        other => vec![as_row(other)],
    }
}

fn as_row(value: &Value) -> Map<String, Value> {
    match value {
        Value::Object(map) => map.clone(),
        other => Map::from_iter([("value".to_string(), other.clone())]),
    }
}

/// Union of the keys of all rows, in first-seen order.
fn columns(rows: &[Map<String, Value>]) -> Vec<String> {
    let mut header: Vec<String> = Vec::new();
    for row in rows {
        for key in row.keys() {
            if !header.contains(key) {
                header.push(key.clone());
            }
        }
    }
    header
}

fn cell(value: Option<&Value>) -> String {
    match value {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

/// A count that may exceed `u64`, as a JSON number when it fits and a
/// decimal string otherwise.
pub fn big(x: u128) -> Value {
    u64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}
