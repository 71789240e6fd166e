//! Fixed-format serialization: floats with 17 significant digits, non-finite as null.

use std::io::Write;
use std::path::Path;

use gfrac::Complex;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{CliError, CliResult};

pub fn fmt_f64(x: f64) -> Option<String> {
    x.is_finite().then(|| format!("{x:.16e}"))
}

/// A float that serializes as `{:.16e}` or `null`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match fmt_f64(self.0) {
            Some(t) => RawValue::from_string(t)
                .map_err(serde::ser::Error::custom)?
                .serialize(s),
            None => s.serialize_none(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cx {
    pub re: Num,
    pub im: Num,
}

impl From<Complex> for Cx {
    fn from(z: Complex) -> Self {
        Cx { re: Num(z.re), im: Num(z.im) }
    }
}

/// Coefficient list as `[[re, im], ...]`, ascending degree.
pub fn coeff_list(p: &gfrac::ComplexPoly) -> Vec<[Num; 2]> {
    p.coeffs().iter().map(|c| [Num(c.re), Num(c.im)]).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Params {
    pub a: Num,
    pub b: Num,
    pub c: Num,
}

impl Params {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Params { a: Num(a), b: Num(b), c: Num(c) }
    }
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub fn cell(x: f64) -> String {
    fmt_f64(x).unwrap_or_default()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
    NotConverged,
}

/// What a subcommand produced.
pub struct Outcome {
    pub json: String,
    pub table: Option<Table>,
    pub status: Status,
    pub message: Option<String>,
}

impl Outcome {
    pub fn new<T: Serialize>(record: &T, table: Option<Table>) -> CliResult<Self> {
        let json = serde_json::to_string_pretty(record).map_err(|e| CliError::input(e.to_string()))?;
        Ok(Outcome {
            json,
            table,
            status: Status::Ok,
            message: None,
        })
    }

    pub fn with_status(mut self, status: Status, message: impl Into<String>) -> Self {
        self.status = status;
        if status != Status::Ok {
            self.message = Some(message.into());
        }
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(CliError::input(format!("unknown format '{s}' (json or csv)"))),
        }
    }
}

pub fn render(outcome: &Outcome, format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Json => {
            let mut v = outcome.json.clone().into_bytes();
            v.push(b'\n');
            Ok(v)
        }
        Format::Csv => {
            let table = outcome
                .table
                .as_ref()
                .ok_or_else(|| CliError::input("this subcommand has no CSV form"))?;
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            let io = |e: csv::Error| CliError::input(e.to_string());
            w.write_record(&table.header).map_err(io)?;
            for row in &table.rows {
                w.write_record(row).map_err(io)?;
            }
            w.into_inner().map_err(|e| CliError::input(e.to_string()))
        }
    }
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, bytes)?,
        None => {
            let mut h = std::io::stdout().lock();
            h.write_all(bytes)?;
            h.flush()?;
        }
    }
    Ok(())
}
