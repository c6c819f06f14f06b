//! Output plumbing: provenance headers, number formatting and atomic writes.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// Version of the CSV column layouts and JSON field names in `docs/schema.md`.
pub const SCHEMA_VERSION: u32 = 1;
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shortest round-trip decimal; exponent form outside `[1e-6, 1e16)`.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = x.abs();
    if a != 0.0 && !(1e-6..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Effective parameters of one invocation, in a fixed key order.
#[derive(Clone, Debug)]
pub struct Provenance {
    pub experiment: String,
    pub master_seed: u64,
    /// `(key, value)` pairs sorted by key.
    pub params: Vec<(String, String)>,
}

impl Provenance {
    /// `canonical` holds `key=value` lines; `extra` adds subcommand parameters.
    pub fn new(experiment: &str, master_seed: u64, canonical: &str, extra: &[(&str, String)]) -> Self {
        let mut params: Vec<(String, String)> = canonical
            .lines()
            .filter_map(|l| l.split_once('='))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .chain(extra.iter().map(|(k, v)| (k.to_string(), v.clone())))
            .collect();
        params.sort();
        Self { experiment: experiment.to_string(), master_seed, params }
    }

    pub fn config_text(&self) -> String {
        let mut s = format!("experiment={}\n", self.experiment);
        for (k, v) in &self.params {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }

    pub fn config_hash(&self) -> String {
        hex::encode(Sha256::digest(self.config_text().as_bytes()))
    }

    /// Two `#` comment lines placed above the CSV header row.
    pub fn csv_preamble(&self) -> String {
        let cfg: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!(
            "# farey-renewal version={} schema={} experiment={} master_seed={} config_hash={}\n# config {}\n",
            ARTIFACT_VERSION,
            SCHEMA_VERSION,
            self.experiment,
            self.master_seed,
            self.config_hash(),
            cfg.join(";")
        )
    }

    /// Header object shared by every JSON document.
    pub fn json_header(&self) -> Map<String, Value> {
        let config: Map<String, Value> =
            self.params.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let mut m = Map::new();
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        m.insert("artifact_version".into(), json!(ARTIFACT_VERSION));
        m.insert("experiment".into(), json!(self.experiment));
        m.insert("master_seed".into(), json!(self.master_seed));
        m.insert("config_hash".into(), json!(self.config_hash()));
        m.insert("config".into(), Value::Object(config));
        m
    }

    /// The header merged with the fields of `payload`.
    pub fn json_document<T: Serialize>(&self, payload: &T) -> String {
        let mut m = self.json_header();
        match serde_json::to_value(payload).expect("serializable payload") {
            Value::Object(fields) => m.extend(fields),
            other => {
                m.insert("result".into(), other);
            }
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("valid json");
        s.push('\n');
        s
    }
}

/// A row cell.
#[derive(Clone, Debug)]
pub enum Cell {
    U(u64),
    F(f64),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::U(v) => v.to_string(),
            Cell::F(v) => num(*v),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::U(v) => json!(v),
            Cell::F(v) => json!(v),
            Cell::Empty => Value::Null,
        }
    }
}

/// A long-format table with fixed columns.
#[derive(Clone, Debug)]
pub struct Table {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
    /// Comment lines appended after the last CSV row.
    pub trailer: Vec<String>,
    /// Extra top-level JSON fields.
    pub json_extra: Map<String, Value>,
}

impl Table {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Self { columns, rows: Vec::new(), trailer: Vec::new(), json_extra: Map::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, prov: &Provenance) -> String {
        let mut s = prov.csv_preamble();
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        for t in &self.trailer {
            let _ = writeln!(s, "# {t}");
        }
        s
    }

    pub fn to_json(&self, prov: &Provenance) -> String {
        let mut m = prov.json_header();
        m.insert("columns".into(), json!(self.columns));
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        m.insert("rows".into(), Value::Array(rows));
        m.extend(self.json_extra.clone());
        let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("valid json");
        s.push('\n');
        s
    }
}

/// Files staged next to their destinations and renamed into place together.
/// Dropping a `Staged` without committing removes the temporaries.
#[derive(Default)]
pub struct Staged {
    files: Vec<(tempfile::NamedTempFile, PathBuf)>,
}

impl Staged {
    pub fn add(&mut self, path: &Path, contents: &str) -> io::Result<()> {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::Builder::new().prefix(".farey-").suffix(".part").tempfile_in(dir)?;
        tmp.write_all(contents.as_bytes())?;
        tmp.as_file().sync_all()?;
        self.files.push((tmp, path.to_path_buf()));
        Ok(())
    }

    pub fn commit(self) -> io::Result<()> {
        for (tmp, path) in self.files {
            tmp.persist(&path).map_err(|e| e.error)?;
        }
        Ok(())
    }
}

/// Write `contents` to `out` atomically, or to stdout when `out` is `None`.
pub fn emit(out: Option<&Path>, contents: &str) -> io::Result<()> {
    match out {
        Some(path) => {
            let mut staged = Staged::default();
            staged.add(path, contents)?;
            staged.commit()
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(0.1), "0.1");
        assert_eq!(num(1.0), "1");
        assert_eq!(num(1e-9), "1e-9");
        assert_eq!(num(2.5e20), "2.5e20");
        assert_eq!(num(1.0 / 3.0), "0.3333333333333333");
        assert_eq!(num(f64::INFINITY), "inf");
        for x in [0.1, 1e-300, 123456.789, std::f64::consts::PI, 9.999e15] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn hash_ignores_param_order() {
        let a = Provenance::new("t", 1, "b=2\na=1\n", &[("z", "9".into())]);
        let b = Provenance::new("t", 1, "a=1\n", &[("z", "9".into()), ("b", "2".into())]);
        assert_eq!(a.config_hash(), b.config_hash());
        assert_eq!(a.config_hash().len(), 64);
        let c = Provenance::new("u", 1, "a=1\nb=2\n", &[("z", "9".into())]);
        assert_ne!(a.config_hash(), c.config_hash());
    }
}
