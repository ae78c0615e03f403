//! File formats. Tables are written as CSV with a header row, or as JSON
//! holding the same columns and rows in the same order.

use std::fs;
use std::path::{Path, PathBuf};

use duality_core::mesh::MZIMesh;
use duality_core::metrics::{DualityReport, DualitySource};
use duality_core::qcore::{ComplexMatrix, Unitary};
use duality_core::sorkin::{SorkinReport, SorkinTerms};
use serde_json::{json, Value};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    UInt(u64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::UInt(x) => x.to_string(),
            // Shortest round-trip representation; stable across runs.
            Cell::Float(x) => x.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::UInt(x) => json!(x),
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(_) => Value::Null,
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::UInt(x) => Some(x as f64),
            Cell::Float(x) => Some(x),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::UInt(x as u64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::UInt(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

/// Named columns and rows of equal width.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header of `{}`", self.name);
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of one column; text cells are skipped.
    pub fn numeric_column(&self, name: &str) -> Vec<f64> {
        match self.column_index(name) {
            Some(i) => self.rows.iter().filter_map(|r| r[i].as_f64()).collect(),
            None => Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("fields are UTF-8")
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let doc = json!({ "name": self.name, "columns": self.columns, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn format_err(path: &Path, message: impl ToString) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

pub fn mesh_to_json(mesh: &MZIMesh) -> String {
    let mut s = serde_json::to_string_pretty(mesh).expect("mesh serializes");
    s.push('\n');
    s
}

pub fn mesh_from_json(text: &str) -> std::result::Result<MZIMesh, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn write_mesh(path: &Path, mesh: &MZIMesh) -> Result<()> {
    write_text(path, &mesh_to_json(mesh))
}

pub fn read_mesh(path: &Path) -> Result<MZIMesh> {
    mesh_from_json(&read_text(path)?).map_err(|e| format_err(path, e))
}

/// `{"rows": r, "cols": c, "data": [[re, im], ...]}`, row-major.
pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    let mut s = serde_json::to_string_pretty(m).expect("matrix serializes");
    s.push('\n');
    s
}

pub fn matrix_from_json(text: &str) -> std::result::Result<ComplexMatrix, String> {
    let raw: ComplexMatrix = serde_json::from_str(text).map_err(|e| e.to_string())?;
    // Derived deserialization does not check the shape; `new` does.
    ComplexMatrix::new(raw.rows(), raw.cols(), raw.data().to_vec()).map_err(|e| e.to_string())
}

pub fn read_unitary(path: &Path) -> Result<Unitary> {
    let m = matrix_from_json(&read_text(path)?).map_err(|e| format_err(path, e))?;
    Unitary::new(m).map_err(|e| format_err(path, e))
}

pub fn write_matrix(path: &Path, m: &ComplexMatrix) -> Result<()> {
    write_text(path, &matrix_to_json(m))
}

/// Column order of [`duality_table`].
pub const DUALITY_COLUMNS: [&str; 8] = [
    "d",
    "coherence",
    "visibility",
    "distinguishability",
    "missing_information",
    "c2_plus_d2",
    "saturated",
    "source",
];

pub fn source_name(s: DualitySource) -> &'static str {
    match s {
        DualitySource::FromDensityMatrix => "density",
        DualitySource::FromFringe => "fringe",
    }
}

pub fn duality_cells(r: &DualityReport) -> Vec<Cell> {
    vec![
        r.d.into(),
        r.coherence.into(),
        r.visibility.into(),
        r.distinguishability.into(),
        r.missing_information.into(),
        r.c2_plus_d2().into(),
        r.saturated.into(),
        source_name(r.source).into(),
    ]
}

pub fn duality_table(reports: &[DualityReport]) -> Table {
    let mut t = Table::new("duality_reports", &DUALITY_COLUMNS);
    for r in reports {
        t.push(duality_cells(r));
    }
    t
}

/// Column order of [`sorkin_table`]: one `trial` row per seed, then an
/// `exact` row (noise-free terms) and a `summary` row (κ mean and sample
/// standard deviation in `kappa`, `kappa_std`).
pub const SORKIN_COLUMNS: [&str; 11] = [
    "row", "seed", "I_12", "I_13", "I_14", "I_23", "I_24", "I_34", "I_1234", "kappa", "kappa_std",
];

fn term_cells(kind: &str, seed: Option<u64>, t: &SorkinTerms, std: Option<f64>) -> Vec<Cell> {
    let mut row = vec![Cell::from(kind), seed.map_or(Cell::Text(String::new()), Cell::UInt)];
    row.extend(t.second_order.iter().map(|&x| Cell::Float(x)));
    row.push(t.fourth_order.into());
    row.push(t.kappa.into());
    row.push(std.map_or(Cell::Text(String::new()), Cell::Float));
    row
}

pub fn sorkin_table(report: &SorkinReport) -> Table {
    let mut t = Table::new("sorkin", &SORKIN_COLUMNS);
    for trial in &report.trials {
        t.push(term_cells("trial", Some(trial.seed), &trial.terms, None));
    }
    t.push(term_cells("exact", None, &report.exact, None));
    let mut summary = vec![Cell::from("summary"), Cell::Text(String::new())];
    summary.extend((0..7).map(|_| Cell::Text(String::new())));
    summary.push(report.kappa_mean.into());
    summary.push(report.kappa_std.into());
    t.push(summary);
    t
}

/// `<dir>/<table name>.<ext>`.
pub fn artifact_path(dir: &Path, name: &str, ext: &str) -> PathBuf {
    dir.join(format!("{name}.{ext}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_carry_the_same_cells() {
        let mut t = Table::new("t", &["d", "x", "tag"]);
        t.push(vec![2usize.into(), 0.1.into(), "a,b".into()]);
        t.push(vec![4usize.into(), f64::NAN.into(), "c".into()]);
        assert_eq!(t.to_csv(), "d,x,tag\n2,0.1,\"a,b\"\n4,NaN,c\n");
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["columns"], json!(["d", "x", "tag"]));
        assert_eq!(v["rows"][0], json!([2, 0.1, "a,b"]));
        assert_eq!(v["rows"][1][1], Value::Null);
    }

    #[test]
    fn duality_reports_keep_field_order() {
        let r = DualityReport::new(2, 0.6, 0.6, 0.8, DualitySource::FromDensityMatrix).unwrap();
        let csv = duality_table(&[r]).to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), DUALITY_COLUMNS.join(","));
        assert!(lines.next().unwrap().starts_with("2,0.6,0.6,0.8,"));
    }

    #[test]
    fn matrix_shape_is_checked_on_read() {
        assert!(matrix_from_json(r#"{"rows":2,"cols":2,"data":[[1,0]]}"#).is_err());
        let m = matrix_from_json(r#"{"rows":1,"cols":1,"data":[[0.5,-1]]}"#).unwrap();
        assert_eq!(m.data()[0].im, -1.0);
    }
}
