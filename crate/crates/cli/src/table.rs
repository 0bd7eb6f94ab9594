//! Result tables and their JSON / CSV renderings.

use std::fmt::Write;

use serde_json::{json, Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    /// exact value printed as `p/q` or `a + b*sqrt(r)`
    Exact(String),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Exact(s) | Cell::Text(s) => json!(s),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(v) => json!(v.to_string()),
            Cell::Bool(b) => json!(b),
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Exact(s) | Cell::Text(s) => quote(s),
            Cell::Float(v) => fmt_float(*v),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

fn fmt_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub command: String,
    pub params: Vec<(String, String)>,
    pub rows: Vec<Vec<(String, Cell)>>,
    pub provenance: Vec<(String, String)>,
}

impl Table {
    pub fn new(command: &str) -> Self {
        Table {
            command: command.to_string(),
            ..Default::default()
        }
    }

    pub fn param(&mut self, name: &str, value: impl ToString) {
        self.params.push((name.to_string(), value.to_string()));
    }

    /// Adds a row; the first column is always the tag of the formula it instantiates.
    pub fn row(&mut self, tag: &str, cols: Vec<(&str, Cell)>) {
        let mut row = vec![("tag".to_string(), Cell::Text(tag.to_string()))];
        row.extend(cols.into_iter().map(|(k, v)| (k.to_string(), v)));
        self.rows.push(row);
    }

    pub fn tag(&mut self, tag: &str, description: &str) {
        if !self.provenance.iter().any(|(t, _)| t == tag) {
            self.provenance.push((tag.to_string(), description.to_string()));
        }
    }

    pub fn to_json(&self) -> String {
        let mut params = Map::new();
        for (k, v) in &self.params {
            params.insert(k.clone(), json!(v));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(r.iter().map(|(k, v)| (k.clone(), v.json())).collect()))
            .collect();
        let mut prov = Map::new();
        for (k, v) in &self.provenance {
            prov.insert(k.clone(), json!(v));
        }
        let mut top = Map::new();
        top.insert("command".into(), json!(self.command));
        top.insert("params".into(), Value::Object(params));
        top.insert("rows".into(), Value::Array(rows));
        top.insert("provenance".into(), Value::Object(prov));
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).unwrap_or_default();
        s.push('\n');
        s
    }

    /// Header from the union of row keys in first-seen order; missing cells are empty.
    pub fn to_csv(&self) -> String {
        let mut header: Vec<&str> = Vec::new();
        for r in &self.rows {
            for (k, _) in r {
                if !header.contains(&k.as_str()) {
                    header.push(k);
                }
            }
        }
        let mut out = String::new();
        let _ = writeln!(out, "{}", header.join(","));
        for r in &self.rows {
            let line: Vec<String> = header
                .iter()
                .map(|h| r.iter().find(|(k, _)| k == h).map(|(_, c)| c.csv()).unwrap_or_default())
                .collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }
}
