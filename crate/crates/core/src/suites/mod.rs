//! Verification suites behind the command-line tool. Each suite returns a
//! [`Report`]: CSV tables, optional SVG files and an overall verdict.

pub mod identities;
pub mod periods;
pub mod plot;
pub mod thm51;
pub mod thm66;

use std::fmt;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Bool(bool),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(n) => write!(f, "{n}"),
            // 17 significant digits
            Cell::Real(x) if x.is_finite() => write!(f, "{x:.16e}"),
            Cell::Real(x) => write!(f, "{x}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<i64> for Cell {
    fn from(n: i64) -> Self {
        Cell::Int(n)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
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

/// Two cells, real and imaginary part.
pub fn complex_cells(z: Complex64) -> [Cell; 2] {
    [Cell::Real(z.re), Cell::Real(z.im)]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem of the CSV output.
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len(), "row width in {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write_csv(&self, dir: &Path) -> Result<()> {
        let path = dir.join(format!("{}.csv", self.name));
        let io = |e: csv::Error| Error::Config(format!("{}: {e}", path.display()));
        let mut w = csv::Writer::from_path(&path).map_err(io)?;
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string())).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// A thresholded scalar check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    /// `true` when the value must stay below the tolerance, `false` when
    /// it must exceed it.
    pub below: bool,
    /// Checks of the literal statements decide the exit code; diagnostics
    /// are reported only.
    pub gating: bool,
}

impl Check {
    pub fn below(name: &str, value: f64, tolerance: f64) -> Self {
        Self { name: name.to_string(), value, tolerance, below: true, gating: true }
    }

    pub fn above(name: &str, value: f64, tolerance: f64) -> Self {
        Self { name: name.to_string(), value, tolerance, below: false, gating: true }
    }

    pub fn diagnostic(mut self) -> Self {
        self.gating = false;
        self
    }

    pub fn pass(&self) -> bool {
        if self.below {
            self.value < self.tolerance
        } else {
            self.value > self.tolerance
        }
    }
}

pub fn checks_table(name: &str, checks: &[Check]) -> Table {
    let mut t = Table::new(name, &["check", "value", "comparison", "tolerance", "gating", "pass"]);
    for c in checks {
        t.push(vec![
            c.name.as_str().into(),
            c.value.into(),
            if c.below { "<" } else { ">" }.into(),
            c.tolerance.into(),
            c.gating.into(),
            c.pass().into(),
        ]);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub tables: Vec<Table>,
    /// `(file name, contents)`.
    pub files: Vec<(String, String)>,
    pub checks: Vec<Check>,
    /// Free-form notes for the terminal, not written to disk.
    pub log: Vec<String>,
}

impl Report {
    /// All gating checks pass.
    pub fn pass(&self) -> bool {
        self.checks.iter().filter(|c| c.gating).all(Check::pass)
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::Config(format!("{}: {e}", dir.display())))?;
        for t in &self.tables {
            t.write_csv(dir)?;
        }
        for (name, body) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }
}

/// Largest value, NaN-propagating, `0` for an empty iterator.
pub(crate) fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |a: f64, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
}

/// Distance of `z` from the nearest integer.
pub(crate) fn frac_dist(z: Complex64) -> f64 {
    Complex64::new(z.re - z.re.round(), z.im).norm()
}
