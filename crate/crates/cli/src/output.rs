use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Self::Float(x) => format!("{x:.16e}"),
            Self::Int(i) => i.to_string(),
            Self::Text(s) => s.clone(),
            Self::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Self::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Self::Int(i) => json!(i),
            Self::Text(s) => json!(s),
            Self::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Float(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Self::Int(i)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Self::Text(s.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Self::Empty, Self::Float)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// A command result: one table plus scalar summary values.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub table: Table,
    pub summary: Vec<(String, Cell)>,
}

impl Report {
    pub fn note(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.push((key.to_string(), value.into()));
    }

    pub fn render(&self, cfg: &RunConfig, wall_time: Option<f64>) -> String {
        match cfg.format {
            Format::Csv => self.csv(wall_time),
            Format::Json => self.json(cfg, wall_time),
        }
    }

    fn csv(&self, wall_time: Option<f64>) -> String {
        let mut out = String::new();
        for (k, v) in &self.summary {
            let _ = writeln!(out, "# {k}={}", v.csv());
        }
        if let Some(t) = wall_time {
            let _ = writeln!(out, "# wall_time_s={t:.3}");
        }
        let _ = writeln!(out, "{}", self.table.columns.join(","));
        for row in &self.table.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    fn json(&self, cfg: &RunConfig, wall_time: Option<f64>) -> String {
        let mut meta = Map::new();
        meta.insert("tool".into(), json!("spectra"));
        meta.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        meta.insert("command".into(), json!(cfg.command.name()));
        meta.insert("seed".into(), json!(cfg.seed));
        meta.insert("config".into(), cfg.args_value());
        if let Some(t) = wall_time {
            meta.insert("wall_time_s".into(), json!(t));
        }
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let rows: Vec<Value> = self.table.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        let doc = json!({
            "metadata": meta,
            "summary": summary,
            "columns": self.table.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }
}
