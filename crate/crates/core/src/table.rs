//! CSV and JSON tables.
//!
//! CSV reals use 17 significant digits (`{:.16e}`) so they parse back to the
//! same `f64`. JSON documents are `{"meta": ..., "columns": [...], "rows": [[...]]}`.
//! Files are written to a temporary sibling and renamed into place.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    UInt(u64),
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::UInt(v) => Some(v as f64),
            Cell::Int(v) => Some(v as f64),
            Cell::Real(v) => Some(v),
            Cell::Text(_) => None,
        }
    }

    fn write_csv(&self, out: &mut String) {
        // writing to a String cannot fail
        let _ = match self {
            Cell::UInt(v) => write!(out, "{v}"),
            Cell::Int(v) => write!(out, "{v}"),
            Cell::Real(v) => write!(out, "{v:.16e}"),
            Cell::Text(s) => write!(out, "{s}"),
        };
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::UInt(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::UInt(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonDocument {
    pub meta: serde_json::Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.is_empty() {
            return Err(Error::Table("no rows".into()));
        }
        if let Some((i, row)) = self.rows.iter().enumerate().find(|(_, r)| r.len() != self.columns.len()) {
            return Err(Error::Table(format!(
                "row {i} has {} cells, expected {}",
                row.len(),
                self.columns.len()
            )));
        }
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        self.validate()?;
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.write_csv(&mut out);
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn to_json(&self, meta: serde_json::Value) -> Result<String> {
        self.validate()?;
        let doc = JsonDocument {
            meta,
            columns: self.columns.clone(),
            rows: self.rows.clone(),
        };
        let mut text = serde_json::to_string(&doc)?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<(Table, serde_json::Value)> {
        let doc: JsonDocument = serde_json::from_str(text)?;
        Ok((
            Table {
                columns: doc.columns,
                rows: doc.rows,
            },
            doc.meta,
        ))
    }

    pub fn render(&self, format: Format, meta: serde_json::Value) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(meta),
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Renders and writes `table`; with no `path` the text goes to stdout.
pub fn emit_table(table: &Table, format: Format, meta: serde_json::Value, path: Option<&Path>) -> Result<()> {
    let text = table.render(format, meta)?;
    match path {
        Some(p) => write_atomic(p, &text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
