//! CSV and JSON emission at a fixed decimal precision.
//!
//! Floats are written in fixed-point notation with `precision` digits after
//! the point, so the same spec always produces the same bytes. Quantities that
//! are zero up to round-off by construction (finite-difference slopes and
//! their bounds) use scientific notation instead, where fixed-point would
//! print only zeros.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

use super::spec::{ProfileSource, SweepSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    UInt(u64),
    Float(f64),
    Sci(f64),
    Bool(bool),
}

impl Cell {
    pub fn render(&self, precision: usize) -> String {
        match *self {
            Cell::Int(v) => v.to_string(),
            Cell::UInt(v) => v.to_string(),
            Cell::Float(v) => format_fixed(v, precision),
            Cell::Sci(v) => format_sci(v, precision),
            Cell::Bool(v) => v.to_string(),
        }
    }

    fn to_json(&self, precision: usize) -> Value {
        match self {
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Float(v) | Cell::Sci(v) if !v.is_finite() => Value::Null,
            _ => Value::Number(
                Number::from_str(&self.render(precision)).expect("rendered cell is a JSON number"),
            ),
        }
    }
}

/// Fixed-point rendering with negative zero folded into zero.
pub fn format_fixed(value: f64, precision: usize) -> String {
    let s = format!("{value:.precision$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

pub fn format_sci(value: f64, precision: usize) -> String {
    if value == 0.0 {
        return format!("{:.precision$e}", 0.0);
    }
    format!("{value:.precision$e}")
}

/// Rows in grid order under a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// Everything a run produces before rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub summary: Vec<(&'static str, Cell)>,
    /// Set by certificate runs when any case breaks its bound.
    pub violation: bool,
}

pub fn render_csv(table: &Table, precision: usize) -> String {
    let mut out = table.columns.join(",");
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|c| c.render(precision)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Two-column `key,value` rendering of a summary record.
pub fn render_summary_csv(summary: &[(&'static str, Cell)], precision: usize) -> String {
    let mut out = String::from("key,value\n");
    for (key, cell) in summary {
        writeln!(out, "{key},{}", cell.render(precision)).unwrap();
    }
    out
}

fn shortest(value: f64) -> Value {
    Number::from_f64(value).map(Value::Number).unwrap_or(Value::Null)
}

/// Resolved spec echoed into JSON reports. Output paths are left out so the
/// report does not depend on where it is written.
pub fn spec_json(spec: &SweepSpec) -> Value {
    let base = &spec.base;
    let mut b = Map::new();
    b.insert("radius".into(), shortest(base.ring.radius));
    b.insert("charge".into(), shortest(base.ring.charge));
    b.insert("mass".into(), shortest(base.ring.mass));
    b.insert("base_density".into(), shortest(base.ring.base_density));
    b.insert("flux".into(), shortest(base.flux));
    match &base.profile {
        ProfileSource::Cosine { epsilon, harmonic } => {
            b.insert("epsilon".into(), shortest(*epsilon));
            b.insert("harmonic".into(), Value::from(*harmonic));
        }
        ProfileSource::File(path) => {
            b.insert("profile_file".into(), Value::from(path.display().to_string()));
        }
    }
    b.insert("grid_size".into(), Value::from(base.grid_size));
    b.insert("winding".into(), Value::from(base.winding.to_string()));
    b.insert("alpha".into(), shortest(base.alpha));
    b.insert("beta".into(), shortest(base.beta));
    b.insert("shape_factor".into(), shortest(base.shape_factor));

    let mut grid = Map::new();
    grid.insert("start".into(), shortest(spec.grid.start));
    grid.insert("stop".into(), shortest(spec.grid.stop));
    grid.insert("count".into(), Value::from(spec.grid.count));

    let mut output = Map::new();
    output.insert("format".into(), Value::from(spec.output.format.to_string()));
    output.insert("precision".into(), Value::from(spec.output.precision));

    let mut top = Map::new();
    top.insert("kind".into(), Value::from(spec.kind.name()));
    top.insert("seed".into(), Value::from(spec.seed));
    top.insert("cases".into(), Value::from(spec.cases));
    top.insert("base".into(), Value::Object(b));
    top.insert("grid".into(), Value::Object(grid));
    top.insert("output".into(), Value::Object(output));
    Value::Object(top)
}

/// One top-level object with `spec`, `rows` and `summary`.
pub fn render_json(spec: &SweepSpec, report: &Report) -> String {
    let precision = spec.output.precision;
    let rows: Vec<Value> = report
        .table
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (col, cell) in report.table.columns.iter().zip(row) {
                obj.insert((*col).into(), cell.to_json(precision));
            }
            Value::Object(obj)
        })
        .collect();
    let mut summary = Map::new();
    for (key, cell) in &report.summary {
        summary.insert((*key).into(), cell.to_json(precision));
    }
    let mut top = Map::new();
    top.insert("spec".into(), spec_json(spec));
    top.insert("rows".into(), Value::Array(rows));
    top.insert("summary".into(), Value::Object(summary));
    let mut text = serde_json::to_string_pretty(&Value::Object(top)).expect("JSON serialises");
    text.push('\n');
    text
}
