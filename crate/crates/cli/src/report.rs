use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use entropic_sums::InequalityCheck;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One table cell. Floats are written with 17 significant digits in CSV
/// so they round-trip exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Bool(bool),
    /// A verdict: `None` means not evaluated.
    Verdict(Option<bool>),
    Text(String),
    /// Not applicable to this row: empty in CSV, null in JSON.
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Verdict(Some(b)) => b.to_string(),
            Cell::Verdict(None) => "not_evaluated".to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(n) => Value::from(*n),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Verdict(v) => v.map_or(Value::Null, Value::Bool),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Missing => Value::Null,
        }
    }
}

pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        // avoid "-0e0" and keep zero short
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    format!("{x:.16e}")
}

/// A fixed-schema output row.
pub trait Record {
    fn header() -> &'static [&'static str];
    fn cells(&self) -> Vec<Cell>;
}

/// One inequality check, as emitted by `check`, `sweep` and `adversarial`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub experiment: String,
    pub alpha: f64,
    pub k: usize,
    pub dim: usize,
    pub epsilon: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub applicable: bool,
    pub satisfied: Option<bool>,
    pub margin: f64,
    pub seed: u64,
}

impl ReportRow {
    pub fn from_check(
        experiment: &str,
        alpha: f64,
        dim: usize,
        seed: u64,
        c: &InequalityCheck,
    ) -> Self {
        ReportRow {
            experiment: experiment.to_string(),
            alpha,
            k: c.k,
            dim,
            epsilon: c.epsilon,
            lhs: c.lhs,
            rhs: c.bound.rhs,
            applicable: c.bound.applicable,
            satisfied: c.satisfied(),
            margin: c.margin,
            seed,
        }
    }

    pub fn is_violation(&self) -> bool {
        self.satisfied == Some(false)
    }
}

impl Record for ReportRow {
    fn header() -> &'static [&'static str] {
        &[
            "experiment",
            "alpha",
            "k",
            "dim",
            "epsilon",
            "lhs",
            "rhs",
            "applicable",
            "satisfied",
            "margin",
            "seed",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Text(self.experiment.clone()),
            Cell::Float(self.alpha),
            Cell::Int(self.k as u64),
            Cell::Int(self.dim as u64),
            Cell::Float(self.epsilon),
            Cell::Float(self.lhs),
            Cell::Float(self.rhs),
            Cell::Bool(self.applicable),
            Cell::Verdict(self.satisfied),
            Cell::Float(self.margin),
            Cell::Int(self.seed),
        ]
    }
}

/// Writes records as CSV (with header) or newline-delimited JSON.
pub struct RecordWriter<W: Write> {
    format: Format,
    csv: Option<csv::Writer<W>>,
    json: Option<W>,
    header_done: bool,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(out: W, format: Format) -> Self {
        match format {
            Format::Csv => RecordWriter {
                format,
                csv: Some(
                    csv::WriterBuilder::new()
                        .has_headers(false)
                        .from_writer(out),
                ),
                json: None,
                header_done: false,
            },
            Format::Json => RecordWriter {
                format,
                csv: None,
                json: Some(out),
                header_done: false,
            },
        }
    }

    pub fn write<R: Record>(&mut self, rec: &R) -> Result<()> {
        match self.format {
            Format::Csv => {
                let w = self.csv.as_mut().expect("csv writer");
                if !self.header_done {
                    w.write_record(R::header())?;
                    self.header_done = true;
                }
                w.write_record(rec.cells().iter().map(Cell::csv))?;
            }
            Format::Json => {
                let w = self.json.as_mut().expect("json writer");
                let obj: Map<String, Value> = R::header()
                    .iter()
                    .zip(rec.cells())
                    .map(|(h, c)| (h.to_string(), c.json()))
                    .collect();
                serde_json::to_writer(&mut *w, &obj)?;
                w.write_all(b"\n")?;
            }
        }
        Ok(())
    }

    pub fn write_all<'a, R: Record + 'a>(
        &mut self,
        recs: impl IntoIterator<Item = &'a R>,
    ) -> Result<()> {
        for r in recs {
            self.write(r)?;
        }
        Ok(())
    }

    /// Writes the CSV header even when no rows follow.
    pub fn header<R: Record>(&mut self) -> Result<()> {
        if let (Format::Csv, false) = (self.format, self.header_done) {
            self.csv
                .as_mut()
                .expect("csv writer")
                .write_record(R::header())?;
            self.header_done = true;
        }
        Ok(())
    }

    pub fn finish(self) -> Result<()> {
        if let Some(mut w) = self.csv {
            w.flush()?;
        }
        if let Some(mut w) = self.json {
            w.flush()?;
        }
        Ok(())
    }
}
