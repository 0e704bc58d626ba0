//! CSV and JSON artifacts plus the run manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(_) => Value::Null,
            Cell::Text(s) => json!(s),
        }
    }
}

/// One output file: header metadata, column names and rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.into(), meta: Vec::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// CSV text with `#` metadata lines.
    pub fn to_csv(&self, hash: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# manifest_hash: {hash}");
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k}: {v}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn to_json(&self, hash: &str) -> Value {
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        json!({ "manifest_hash": hash, "meta": meta, "columns": self.columns, "rows": rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

/// Git-style content hash, `sha256("blob <len>\0" + content)`, in hex.
pub fn content_hash(content: &str) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", content.len()).as_bytes());
    h.update(content.as_bytes());
    let mut out = String::with_capacity(64);
    for b in h.finalize().iter() {
        let _ = write!(out, "{b:02x}");
    }
    out
}

/// Hash of the resolved configuration and the command.
pub fn input_hash(snapshot: &[(String, String)], command: &str) -> String {
    let mut s = String::new();
    for (k, v) in snapshot {
        let _ = writeln!(s, "{k} = {v}");
    }
    let _ = writeln!(s, "command = {command}");
    content_hash(&s)
}

pub fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Writes every table (and JSON mirrors when asked) followed by
/// `manifest.json`. Returns the written paths, manifest last.
pub fn write_artifacts(
    out: &Path,
    tables: &[Table],
    json_mirror: bool,
    snapshot: &[(String, String)],
    command: &str,
    started: u64,
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    let hash = input_hash(snapshot, command);
    let mut paths = Vec::new();
    for t in tables {
        let p = out.join(format!("{}.csv", t.name));
        fs::write(&p, t.to_csv(&hash)).map_err(|e| io_err(&p, e))?;
        paths.push(p);
        if json_mirror {
            let p = out.join(format!("{}.json", t.name));
            let text = serde_json::to_string_pretty(&t.to_json(&hash)).map_err(|e| CliError::Io(e.to_string()))?;
            fs::write(&p, text).map_err(|e| io_err(&p, e))?;
            paths.push(p);
        }
    }
    let config: Map<String, Value> = snapshot.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    let manifest = json!({
        "command": command,
        "input_hash": hash,
        "config": config,
        "started_unix": started,
        "finished_unix": unix_now(),
        "outputs": paths.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "version": env!("CARGO_PKG_VERSION"),
    });
    let mp = out.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
    fs::write(&mp, text).map_err(|e| io_err(&mp, e))?;
    paths.push(mp);
    Ok(paths)
}
