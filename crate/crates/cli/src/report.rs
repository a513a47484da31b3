//! Deterministic report files: `<name>.report.json` and `<name>.rows.csv`,
//! written atomically. Reports are pure functions of (config, seed); wall
//! clock goes to stderr only.

use rdlab_core::{Rational, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    /// Concrete witness for failures (elements, vertices, values).
    pub witness: String,
}

impl Verdict {
    pub fn new(check: impl Into<String>, pass: bool, witness: impl Into<String>) -> Verdict {
        Verdict {
            check: check.into(),
            pass,
            witness: witness.into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub name: String,
    pub kind: String,
    pub config: BTreeMap<String, String>,
    pub budget_max_elements: usize,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
    pub measurements: serde_json::Value,
    pub rows_file: String,
}

pub struct Rows {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Rows {
    pub fn new(header: Vec<&'static str>) -> Rows {
        Rows {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Exact rationals render as `num/den`.
pub fn q_cell(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Floats render with 17 significant digits.
pub fn f_cell(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Writes both report files; returns their paths.
pub fn emit(out_dir: &Path, report: &Report, rows: &Rows) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(out_dir)?;
    let json_path = out_dir.join(format!("{}.report.json", report.name));
    let csv_path = out_dir.join(format!("{}.rows.csv", report.name));
    let mut json = serde_json::to_vec_pretty(report).expect("report serializes");
    json.push(b'\n');
    write_atomic(&json_path, &json)?;
    let mut csv = String::new();
    csv.push_str(&rows.header.join(","));
    csv.push('\n');
    for row in &rows.rows {
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    write_atomic(&csv_path, csv.as_bytes())?;
    Ok((json_path, csv_path))
}
