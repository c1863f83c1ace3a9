//! Tables, CSV and JSON output.
//!
//! Every column has a fixed provenance. Rationals are written as `"num/den"`
//! strings, integers in decimal, floats in shortest round-trip exponent form.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{LabError, LabResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Exact integer or rational arithmetic.
    Exact,
    /// A numeric value from a truncated series, refinement or enclosure.
    Truncated,
    /// A bound resting on constants measured over finite ranges.
    MeasuredConstant,
    /// Identifiers and descriptive text.
    Label,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(BigInt),
    Rational(BigRational),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    pub fn int(v: impl Into<BigInt>) -> Cell {
        Cell::Int(v.into())
    }

    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Rational(r) => format!("{}/{}", r.numer(), r.denom()),
            Cell::Float(v) => format!("{v:e}"),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => match i64::try_from(v) {
                Ok(x) => json!(x),
                Err(_) => json!(v.to_string()),
            },
            Cell::Float(v) => json!(v),
            Cell::Bool(b) => json!(b),
            _ => json!(self.render()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Int,
    Rational,
    Float,
    Bool,
    Text,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: &'static str,
    pub kind: Kind,
    pub provenance: Provenance,
}

pub const fn col(name: &'static str, kind: Kind, provenance: Provenance) -> Column {
    Column {
        name,
        kind,
        provenance,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: Vec<Column>) -> Table {
        Table {
            name: name.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| c.name)).unwrap();
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    /// Parses CSV written by [`Table::to_csv`] back into cells of the given columns.
    pub fn from_csv(name: &str, columns: Vec<Column>, text: &str) -> LabResult<Table> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r
            .headers()
            .map_err(|e| LabError::Config(format!("csv: {e}")))?
            .clone();
        if header.iter().ne(columns.iter().map(|c| c.name)) {
            return Err(LabError::Config("csv header does not match".into()));
        }
        let mut t = Table::new(name, columns);
        for rec in r.records() {
            let rec = rec.map_err(|e| LabError::Config(format!("csv: {e}")))?;
            let row = rec
                .iter()
                .zip(&t.columns)
                .map(|(s, c)| parse_cell(s, c.kind))
                .collect::<LabResult<Vec<_>>>()?;
            t.rows.push(row);
        }
        Ok(t)
    }

    pub fn to_json(&self) -> Value {
        let columns: Vec<Value> = self
            .columns
            .iter()
            .map(|c| json!({"name": c.name, "provenance": c.provenance}))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = serde_json::Map::new();
                for (c, v) in self.columns.iter().zip(r) {
                    m.insert(
                        c.name.to_string(),
                        json!({"value": v.json(), "provenance": c.provenance}),
                    );
                }
                Value::Object(m)
            })
            .collect();
        json!({"name": self.name, "columns": columns, "rows": rows})
    }

    /// Fixed-width text for the terminal.
    pub fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::render).collect())
            .collect();
        let mut width: Vec<usize> = self.columns.iter().map(|c| c.name.len()).collect();
        for r in &cells {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, items: Vec<&str>| {
            let parts: Vec<String> = items
                .iter()
                .zip(&width)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            writeln!(out, "{}", parts.join("  ").trim_end()).unwrap();
        };
        line(&mut out, self.columns.iter().map(|c| c.name).collect());
        for r in &cells {
            line(&mut out, r.iter().map(String::as_str).collect());
        }
        out
    }
}

fn parse_cell(s: &str, kind: Kind) -> LabResult<Cell> {
    let bad = || LabError::Config(format!("csv: cannot parse {s:?} as {kind:?}"));
    Ok(match kind {
        Kind::Int => Cell::Int(BigInt::from_str(s).map_err(|_| bad())?),
        Kind::Rational => Cell::Rational(BigRational::from_str(s).map_err(|_| bad())?),
        Kind::Float => Cell::Float(s.parse().map_err(|_| bad())?),
        Kind::Bool => Cell::Bool(s.parse().map_err(|_| bad())?),
        Kind::Text => Cell::Text(s.to_string()),
    })
}

/// Outcome of one exact check.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub detail: String,
    pub seconds: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Manifest {
    pub command: String,
    pub field: String,
    pub config_digest: String,
    pub seed: u64,
    pub version: String,
    pub threads: usize,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub manifest: Manifest,
    pub tables: Vec<Table>,
    pub checks: Vec<CheckOutcome>,
    /// Free-form numbers for the JSON summary only (timings and the like).
    pub extra: serde_json::Map<String, Value>,
}

impl Report {
    pub fn new(manifest: Manifest) -> Report {
        Report {
            manifest,
            tables: Vec::new(),
            checks: Vec::new(),
            extra: serde_json::Map::new(),
        }
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "manifest": self.manifest,
            "tables": self.tables.iter().map(Table::to_json).collect::<Vec<_>>(),
            "checks": self.checks,
            "all_checks_pass": self.all_checks_pass(),
            "extra": self.extra,
        })
    }

    fn csv_name(&self, t: &Table) -> String {
        let cmd = self.manifest.command.replace(' ', "_");
        if self.tables.len() == 1 {
            format!("{cmd}.csv")
        } else {
            format!("{cmd}_{}.csv", t.name)
        }
    }

    /// Writes one CSV per table and a JSON summary into `dir`.
    pub fn emit(&self, dir: &Path) -> LabResult<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| LabError::io(dir.display().to_string(), e))?;
        let mut written = Vec::new();
        for t in &self.tables {
            let p = dir.join(self.csv_name(t));
            std::fs::write(&p, t.to_csv()).map_err(|e| LabError::io(p.display().to_string(), e))?;
            written.push(p);
        }
        let p = dir.join(format!("{}.json", self.manifest.command.replace(' ', "_")));
        let text = serde_json::to_string_pretty(&self.to_json()).unwrap();
        std::fs::write(&p, text).map_err(|e| LabError::io(p.display().to_string(), e))?;
        written.push(p);
        Ok(written)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.tables {
            if self.tables.len() > 1 {
                writeln!(out, "# {}", t.name).unwrap();
            }
            out.push_str(&t.to_text());
        }
        for c in &self.checks {
            writeln!(
                out,
                "{} {}: {} cases, {} failures{}",
                if c.passed() { "ok  " } else { "FAIL" },
                c.name,
                c.cases,
                c.failures,
                if c.detail.is_empty() {
                    String::new()
                } else {
                    format!(" ({})", c.detail)
                }
            )
            .unwrap();
        }
        out
    }
}

pub fn rational_cell(r: &BigRational) -> Cell {
    Cell::Rational(r.clone())
}
