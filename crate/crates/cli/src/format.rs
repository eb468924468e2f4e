//! Result tables and records, and their CSV and JSON renderings.
//!
//! Every float is printed with [`SIG_DIGITS`] significant digits, so loading
//! an emitted file and emitting it again reproduces it byte for byte.

use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

pub const SIG_DIGITS: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// The format implied by a `.csv` or `.json` extension.
    pub fn from_extension(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()? {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// `v` rounded to [`SIG_DIGITS`] significant digits, positional for
/// moderate magnitudes and scientific otherwise.
pub fn fmt_sig(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    // the exponent is read after rounding, so 9.9999999996 lands on 1e1
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

/// `v` as the nearest double to its printed form.
pub fn round_sig(v: f64) -> f64 {
    fmt_sig(v).parse().unwrap_or(v)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_sig(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn parse(s: &str) -> Cell {
        match s {
            "true" => Cell::Bool(true),
            "false" => Cell::Bool(false),
            _ => match (s.parse::<i64>(), s.parse::<f64>()) {
                (Ok(i), _) => Cell::Int(i),
                (_, Ok(v)) => Cell::Num(v),
                _ => Cell::Text(s.to_string()),
            },
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) => json_num(*v),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }

    fn from_json(v: &Value) -> Cell {
        match v {
            Value::Null => Cell::Num(f64::NAN),
            Value::Bool(b) => Cell::Bool(*b),
            Value::Number(n) => match n.as_i64() {
                Some(i) => Cell::Int(i),
                None => Cell::Num(n.as_f64().unwrap_or(f64::NAN)),
            },
            Value::String(s) => Cell::Text(s.clone()),
            other => Cell::Text(other.to_string()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Non-finite values have no JSON spelling and become `null`.
fn json_num(v: f64) -> Value {
    serde_json::Number::from_f64(round_sig(v)).map_or(Value::Null, Value::Number)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let at = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[at]).collect())
    }
}

/// What a command produces: a table for curves and simulations, a nested
/// record for membership verdicts.
#[derive(Clone, Debug, PartialEq)]
pub enum Artifact {
    Table(Table),
    Record(Value),
}

impl Artifact {
    pub fn default_format(&self) -> Format {
        match self {
            Artifact::Table(_) => Format::Csv,
            Artifact::Record(_) => Format::Json,
        }
    }
}

/// Rounds every float in `v` to [`SIG_DIGITS`] digits.
pub fn round_record(v: &Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => json_num(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(items) => Value::Array(items.iter().map(round_record).collect()),
        Value::Object(map) => Value::Object(map.iter().map(|(k, x)| (k.clone(), round_record(x))).collect()),
        other => other.clone(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Table) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        Value::Null => out.push(vec![Cell::Text(prefix.to_string()), Cell::Text(String::new())]),
        leaf => out.push(vec![Cell::Text(prefix.to_string()), Cell::from_json(leaf)]),
    }
}

fn csv_bytes(t: &Table) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let write = |w: &mut csv::Writer<Vec<u8>>| -> csv::Result<()> {
        w.write_record(&t.columns)?;
        for row in &t.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    };
    write(&mut w).expect("writing to memory");
    w.into_inner().expect("in-memory writer")
}

/// The exact bytes [`emit`] writes.
pub fn render(artifact: &Artifact, format: Format) -> Vec<u8> {
    match (artifact, format) {
        (Artifact::Table(t), Format::Csv) => csv_bytes(t),
        (Artifact::Record(r), Format::Csv) => {
            let mut t = Table::new(&["field", "value"]);
            flatten("", &round_record(r), &mut t);
            csv_bytes(&t)
        }
        (Artifact::Table(t), Format::Json) => {
            let mut obj = Map::new();
            obj.insert("columns".into(), Value::from(t.columns.clone()));
            let rows = t.rows.iter().map(|r| Value::Array(r.iter().map(Cell::to_json).collect()));
            obj.insert("rows".into(), Value::Array(rows.collect()));
            pretty(&Value::Object(obj))
        }
        (Artifact::Record(r), Format::Json) => pretty(&round_record(r)),
    }
}

fn pretty(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("serializing a json value");
    s.push('\n');
    s.into_bytes()
}

/// Writes `artifact` to `path`, or to stdout when `path` is `None`.
pub fn emit(artifact: &Artifact, format: Format, path: Option<&Path>) -> Result<()> {
    let bytes = render(artifact, format);
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(CliError::io(p)),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).map_err(CliError::io("<stdout>"))
        }
    }
}

/// Reads back a file written by [`emit`].
pub fn load_artifact(path: &Path, format: Format) -> Result<Artifact> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    match format {
        Format::Csv => {
            let mut r = csv::Reader::from_reader(text.as_bytes());
            let parse_err = |e: csv::Error| CliError::Parse {
                path: path.to_path_buf(),
                line: e.position().map_or(0, |p| p.line() as usize),
                column: 0,
                message: e.to_string(),
            };
            let columns = r.headers().map_err(parse_err)?.iter().map(String::from).collect();
            let mut rows = Vec::new();
            for rec in r.records() {
                rows.push(rec.map_err(parse_err)?.iter().map(Cell::parse).collect());
            }
            Ok(Artifact::Table(Table { columns, rows }))
        }
        Format::Json => {
            let v: Value = serde_json::from_str(&text).map_err(|e| json_error(path, e))?;
            Ok(as_table(&v).unwrap_or(Artifact::Record(v)))
        }
    }
}

fn as_table(v: &Value) -> Option<Artifact> {
    let obj = v.as_object()?;
    if obj.len() != 2 {
        return None;
    }
    let columns =
        obj.get("columns")?.as_array()?.iter().map(|c| c.as_str().map(String::from)).collect::<Option<_>>()?;
    let rows = obj
        .get("rows")?
        .as_array()?
        .iter()
        .map(|r| r.as_array().map(|cells| cells.iter().map(Cell::from_json).collect()))
        .collect::<Option<_>>()?;
    Some(Artifact::Table(Table { columns, rows }))
}

pub(crate) fn json_error(path: &Path, e: serde_json::Error) -> CliError {
    CliError::Parse { path: path.to_path_buf(), line: e.line(), column: e.column(), message: e.to_string() }
}
