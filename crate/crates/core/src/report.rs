//! Tabular experiment reports with named pass/fail assertions.

use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::io::fmt17;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => fmt17(*v),
            Cell::Text(v) => v.clone(),
            Cell::Bool(v) => v.to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}
impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
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
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Ordered `column → value` pairs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Row(pub Vec<(String, Cell)>);

impl Row {
    pub fn new() -> Self {
        Row(Vec::new())
    }

    pub fn with(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Cell> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn num(&self, key: &str) -> Option<f64> {
        match self.get(key)? {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }
}

impl Serialize for Row {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub tolerance: f64,
    pub measured: f64,
    pub pass: bool,
}

impl Assertion {
    /// Passes when `measured ≤ tolerance`; NaN fails.
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Assertion { name: name.into(), tolerance, measured, pass: measured <= tolerance }
    }

    /// Passes when `measured ≥ tolerance`; NaN fails.
    pub fn at_least(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Assertion { name: name.into(), tolerance, measured, pass: measured >= tolerance }
    }
}

/// A file written next to the report.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub name: String,
    pub axis: String,
    pub rows: Vec<Row>,
    pub assertions: Vec<Assertion>,
    #[serde(skip)]
    pub artifacts: Vec<Artifact>,
}

impl SweepReport {
    pub fn new(name: &str, axis: &str) -> Self {
        SweepReport { name: name.into(), axis: axis.into(), rows: Vec::new(), assertions: Vec::new(), artifacts: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }

    /// Rows as CSV; columns are the union of keys in order of first appearance.
    pub fn to_csv(&self) -> String {
        let mut cols: Vec<&str> = Vec::new();
        for r in &self.rows {
            for (k, _) in &r.0 {
                if !cols.contains(&k.as_str()) {
                    cols.push(k);
                }
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let _ = w.write_record(&cols);
        for r in &self.rows {
            let rec: Vec<String> = cols.iter().map(|c| r.get(c).map(Cell::csv).unwrap_or_default()).collect();
            let _ = w.write_record(&rec);
        }
        String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
    }
}
