//! Report tables, their CSV/JSON forms, plot data and run manifests.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::Format;
use crate::casimir::Settings;
use crate::constants;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    /// SI unit, empty for dimensionless or text columns.
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Self { name: name.into(), unit: unit.into() }
    }

    fn header(&self) -> String {
        if self.unit.is_empty() {
            self.name.clone()
        } else {
            format!("{} [{}]", self.name, self.unit)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Number(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Number(x) => format!("{x:.8e}"),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn number(&self) -> Option<f64> {
        match self {
            Cell::Number(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Number(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Result of one task: a table plus the columns that make up its plot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub task: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    /// Indices into `columns` written by [`emit_plotdata`]; empty when the
    /// task has nothing to plot.
    pub plot: Vec<usize>,
}

impl Report {
    pub fn new(task: &str, columns: Vec<Column>, plot: Vec<usize>) -> Self {
        Self { task: task.into(), columns, rows: Vec::new(), plot }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c.name == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }
}

pub fn write_csv<W: Write>(report: &Report, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(report.columns.iter().map(Column::header)).map_err(csv_err)?;
    for row in &report.rows {
        w.write_record(row.iter().map(Cell::csv)).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(report: &Report, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, report).map_err(|e| Error::Io(e.into()))?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Whitespace-separated columns with `#` header lines.
pub fn emit_plotdata<W: Write>(report: &Report, mut out: W) -> Result<()> {
    writeln!(out, "# {}", report.task)?;
    let names: Vec<String> = report.plot.iter().map(|&i| report.columns[i].header()).collect();
    writeln!(out, "# {}", names.join("  "))?;
    for row in &report.rows {
        let line: Vec<String> = report.plot.iter().map(|&i| row[i].csv()).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Everything needed to reproduce a run. Contains no timestamps, so that
/// identical runs produce identical manifests.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub task: String,
    /// SHA-256 of the config file bytes.
    pub config_sha256: String,
    pub tolerance: f64,
    pub settings: Settings,
    pub constants: Vec<(String, f64)>,
    pub files: Vec<String>,
}

impl Manifest {
    pub fn new(task: &str, config: &[u8], tolerance: f64, settings: Settings) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            task: task.into(),
            config_sha256: Sha256::digest(config).iter().map(|b| format!("{b:02x}")).collect(),
            tolerance,
            settings,
            constants: constants::table().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            files: Vec::new(),
        }
    }
}

/// Writes the report, its plot data and the manifest into `dir`.
pub fn write_all(dir: &Path, report: &Report, format: Format, mut manifest: Manifest) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let stem = report.task.clone();
    let report_name = match format {
        Format::Csv => format!("{stem}.csv"),
        Format::Json => format!("{stem}.json"),
    };
    let mut written = Vec::new();
    let path = dir.join(&report_name);
    let file = std::io::BufWriter::new(std::fs::File::create(&path)?);
    match format {
        Format::Csv => write_csv(report, file)?,
        Format::Json => write_json(report, file)?,
    }
    manifest.files.push(report_name);
    written.push(path);
    if !report.plot.is_empty() {
        let name = format!("{stem}.dat");
        let path = dir.join(&name);
        let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
        emit_plotdata(report, &mut file)?;
        file.flush()?;
        manifest.files.push(name);
        written.push(path);
    }
    let path = dir.join("manifest.json");
    let mut file = std::fs::File::create(&path)?;
    serde_json::to_writer_pretty(&mut file, &manifest).map_err(|e| Error::Io(e.into()))?;
    file.write_all(b"\n")?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("force", vec![Column::new("a", "m"), Column::new("force_per_area", "Pa")], vec![0, 1]);
        r.push(vec![1e-6.into(), (-1.3001e-3).into()]);
        r
    }

    #[test]
    fn csv_uses_nine_significant_digits() {
        let mut buf = Vec::new();
        write_csv(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "a [m],force_per_area [Pa]\n1.00000000e-6,-1.30010000e-3\n");
    }

    #[test]
    fn empty_report_plots_header_only() {
        let mut r = sample();
        r.rows.clear();
        let mut buf = Vec::new();
        emit_plotdata(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().all(|l| l.starts_with('#')));
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn text_cells_are_quoted_when_needed() {
        let mut r = Report::new("validate", vec![Column::new("material", ""), Column::new("message", "")], vec![]);
        r.push(vec!["gold".into(), "bad, really".into()]);
        let mut buf = Vec::new();
        write_csv(&r, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains("\"bad, really\""));
    }

    #[test]
    fn manifest_hash_depends_only_on_config() {
        let a = Manifest::new("force", b"x = 1", 1e-8, Settings::default());
        let b = Manifest::new("force", b"x = 1", 1e-8, Settings::default());
        let c = Manifest::new("force", b"x = 2", 1e-8, Settings::default());
        assert_eq!(a, b);
        assert_ne!(a.config_sha256, c.config_sha256);
    }
}
