//! File writers for a finished run. Every file is written to a temporary
//! sibling and renamed into place.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::record::{Assertion, Cell, Report, Series, Table};

/// Formats `v` with 12 significant digits, in fixed notation for moderate
/// exponents and scientific notation otherwise.
pub fn sig12(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn cell(c: &Cell) -> String {
    match c {
        Cell::Text(s) => s.clone(),
        Cell::Int(i) => i.to_string(),
        Cell::Num(v) => sig12(*v),
        Cell::Bool(b) => b.to_string(),
    }
}

pub fn render_csv(table: &Table) -> String {
    let mut out = table.header.join(",");
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(cell).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_dat(series: &Series) -> String {
    let mut out = format!("# {} {}\n", series.x_label, series.name);
    for (t, v) in series.t.iter().zip(&series.values) {
        out.push_str(&sig12(*t));
        out.push(' ');
        out.push_str(&sig12(*v));
        out.push('\n');
    }
    out
}

/// Reference to a series file from results.json.
#[derive(Debug, Serialize)]
pub struct SeriesRef {
    pub name: String,
    pub file: String,
    pub points: usize,
}

/// The full record serialized to results.json.
#[derive(Debug, Serialize)]
pub struct ResultRecord<'a> {
    pub experiment: String,
    pub seed: u64,
    pub passed: bool,
    pub inputs: &'a ExperimentConfig,
    pub scalars: &'a BTreeMap<String, f64>,
    pub tables: Vec<String>,
    pub series: Vec<SeriesRef>,
    pub assertions: &'a [Assertion],
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut tmp =
        tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// Writes every artifact of `report` into `dir` and returns the paths written.
pub fn write_outputs(dir: &Path, config: &ExperimentConfig, report: &Report) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    let mut tables = Vec::new();
    for t in &report.tables {
        let file = format!("{}.csv", t.name);
        let path = dir.join(&file);
        write_atomic(&path, render_csv(t).as_bytes())?;
        tables.push(file);
        written.push(path);
    }
    let mut series = Vec::new();
    for s in &report.series {
        let file = format!("{}.dat", s.name);
        let path = dir.join(&file);
        write_atomic(&path, render_dat(s).as_bytes())?;
        series.push(SeriesRef { name: s.name.clone(), file, points: s.t.len() });
        written.push(path);
    }
    let record = ResultRecord {
        experiment: config.experiment.to_string(),
        seed: config.seed,
        passed: report.passed(),
        inputs: config,
        scalars: &report.scalars,
        tables,
        series,
        assertions: &report.assertions,
    };
    let mut json = serde_json::to_string_pretty(&record)?;
    json.push('\n');
    let path = dir.join("results.json");
    write_atomic(&path, json.as_bytes())?;
    written.push(path);
    Ok(written)
}
