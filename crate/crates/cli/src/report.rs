//! Report assembly: canonical JSON with sorted keys, aligned text
//! tables, and CSV rows.  Identical inputs and code version produce
//! byte-identical canonical JSON; wall-clock timings live in their own
//! section so they can be excluded from comparisons.

use serde_json::{json, Map, Value};

pub const SCHEMA: u64 = 1;

#[derive(Clone, Debug)]
pub struct Report {
    pub kind: &'static str,
    pub spec: Value,
    pub body: Map<String, Value>,
    pub timings_ms: Map<String, Value>,
    pub ok: bool,
}

impl Report {
    pub fn new(kind: &'static str, spec: Value) -> Report {
        Report { kind, spec, body: Map::new(), timings_ms: Map::new(), ok: true }
    }

    pub fn insert(&mut self, key: &str, value: Value) {
        self.body.insert(key.to_string(), value);
    }

    pub fn timing(&mut self, key: &str, ms: u128) {
        self.timings_ms.insert(key.to_string(), json!(ms as u64));
    }

    /// Full report, timings included.
    pub fn to_json(&self) -> Value {
        let mut v = self.canonical_json();
        v["timings_ms"] = Value::Object(self.timings_ms.clone());
        v
    }

    /// Deterministic part: everything except timings.
    pub fn canonical_json(&self) -> Value {
        let mut root = Map::new();
        root.insert("schema".into(), json!(SCHEMA));
        root.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        root.insert("kind".into(), json!(self.kind));
        root.insert("spec".into(), self.spec.clone());
        root.insert("ok".into(), json!(self.ok));
        for (k, v) in &self.body {
            root.insert(k.clone(), v.clone());
        }
        Value::Object(root)
    }
}

/// Pads each column to its widest cell; two spaces between columns.
pub fn align_table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if i + 1 < row.len() {
                for _ in cell.len()..widths[i] {
                    line.push(' ');
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
