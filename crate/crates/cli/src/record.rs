//! The result of one experiment run, before it is written to disk.

use std::collections::BTreeMap;

use serde::Serialize;

/// Comparison an assertion makes between its measured value and tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub id: String,
    /// The acceptance criterion or module invariant this assertion checks.
    pub traces: String,
    pub measured: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Num(f64),
    Bool(bool),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub x_label: String,
    pub t: Vec<f64>,
    pub values: Vec<f64>,
}

/// Everything an experiment produces.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub scalars: BTreeMap<String, f64>,
    pub tables: Vec<Table>,
    pub series: Vec<Series>,
    pub assertions: Vec<Assertion>,
}

impl Report {
    pub fn scalar(&mut self, name: impl Into<String>, value: f64) {
        self.scalars.insert(name.into(), value);
    }

    /// Records `measured <= tolerance` and returns whether it holds.
    pub fn at_most(&mut self, id: impl Into<String>, traces: &str, measured: f64, tolerance: f64) -> bool {
        self.push(id.into(), traces, measured, Relation::AtMost, tolerance)
    }

    /// Records `measured >= tolerance` and returns whether it holds.
    pub fn at_least(&mut self, id: impl Into<String>, traces: &str, measured: f64, tolerance: f64) -> bool {
        self.push(id.into(), traces, measured, Relation::AtLeast, tolerance)
    }

    fn push(&mut self, id: String, traces: &str, measured: f64, relation: Relation, tolerance: f64) -> bool {
        // NaN never passes.
        let passed = match relation {
            Relation::AtMost => measured <= tolerance,
            Relation::AtLeast => measured >= tolerance,
        };
        self.assertions.push(Assertion { id, traces: traces.to_string(), measured, relation, tolerance, passed });
        passed
    }

    pub fn table(&mut self, name: &str, header: &[&str], rows: Vec<Vec<Cell>>) {
        let header = header.iter().map(|h| h.to_string()).collect();
        self.tables.push(Table { name: name.to_string(), header, rows });
    }

    pub fn series(&mut self, name: impl Into<String>, t: Vec<f64>, values: Vec<f64>) {
        self.series.push(Series { name: name.into(), x_label: "t".into(), t, values });
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.passed)
    }
}
