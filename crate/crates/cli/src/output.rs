//! Row output as CSV (header, 17 significant digits, LF) or a JSON array.
//!
//! Rows are any flat `Serialize` struct; column order is field order.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use stablecurv::table::fmt17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn open(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) if n.is_f64() => fmt17(n.as_f64().expect("f64 number")),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Writes rows one at a time, so long sweeps stream their output.
pub struct RowSink {
    format: Format,
    csv: Option<csv::Writer<Box<dyn Write>>>,
    raw: Option<Box<dyn Write>>,
    rows: usize,
    empty_header: Option<&'static [&'static str]>,
}

impl RowSink {
    pub fn new(format: Format, out: Box<dyn Write>) -> Self {
        Self { format, csv: None, raw: Some(out), rows: 0, empty_header: None }
    }

    /// CSV header to write if no row arrives; otherwise it comes from the
    /// first row.
    pub fn with_columns(mut self, columns: &'static [&'static str]) -> Self {
        self.empty_header = Some(columns);
        self
    }

    pub fn row<T: Serialize>(&mut self, row: &T) -> io::Result<()> {
        let value = serde_json::to_value(row).map_err(io::Error::other)?;
        match self.format {
            Format::Csv => {
                let Value::Object(map) = value else {
                    return Err(io::Error::other("CSV rows must be structs"));
                };
                if self.csv.is_none() {
                    let out = self.raw.take().expect("writer present before first row");
                    let mut w = csv::WriterBuilder::new()
                        .terminator(csv::Terminator::Any(b'\n'))
                        .from_writer(out);
                    w.write_record(map.keys())?;
                    self.csv = Some(w);
                }
                let w = self.csv.as_mut().expect("initialized above");
                w.write_record(map.values().map(cell))?;
                w.flush()?;
            }
            Format::Json => {
                let out = self.raw.as_mut().expect("json writer");
                out.write_all(if self.rows == 0 { b"[\n  " } else { b",\n  " })?;
                serde_json::to_writer(&mut *out, &value).map_err(io::Error::other)?;
                out.flush()?;
            }
        }
        self.rows += 1;
        Ok(())
    }

    pub fn finish(mut self) -> io::Result<()> {
        match self.format {
            Format::Csv => {
                if let Some(mut w) = self.csv.take() {
                    w.flush()?;
                } else if let Some(mut out) = self.raw.take() {
                    if let Some(cols) = self.empty_header {
                        writeln!(out, "{}", cols.join(","))?;
                    }
                    out.flush()?;
                }
            }
            Format::Json => {
                let out = self.raw.as_mut().expect("json writer");
                out.write_all(if self.rows == 0 { b"[]\n" } else { b"\n]\n" })?;
                out.flush()?;
            }
        }
        Ok(())
    }
}
