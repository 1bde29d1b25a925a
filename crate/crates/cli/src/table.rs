//! Column tables and their on-disk form.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::CliError;

/// Named real columns of equal length plus free-form metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<(String, Vec<f64>)>,
    pub metadata: Map<String, Value>,
}

impl ResultTable {
    pub fn new(columns: Vec<(&str, Vec<f64>)>) -> Result<Self, CliError> {
        let len = columns.first().map_or(0, |c| c.1.len());
        if columns.iter().any(|c| c.1.len() != len) {
            return Err(CliError::Numerical("columns have different lengths".into()));
        }
        Ok(ResultTable {
            columns: columns.into_iter().map(|(n, v)| (n.to_string(), v)).collect(),
            metadata: Map::new(),
        })
    }

    pub fn names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.0.as_str()).collect()
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|c| c.0 == name).map(|c| c.1.as_slice())
    }

    pub fn n_rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.1.len())
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    /// CSV text with a header row, LF endings and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = self.names().join(",");
        out.push('\n');
        for r in 0..self.n_rows() {
            let row: Vec<String> = self.columns.iter().map(|c| format_value(c.1[r])).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn format_value(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

/// `<out>.meta.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Writes `contents` through a temporary file in the target directory and
/// renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

/// Writes the CSV and its JSON sidecar.
pub fn write_table(table: &ResultTable, out: &Path) -> Result<(), CliError> {
    write_atomic(out, table.to_csv().as_bytes())?;
    let meta = serde_json::to_vec_pretty(&Value::Object(table.metadata.clone()))
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    write_atomic(&sidecar_path(out), &meta)
}
