//! Deterministic CSV and JSON rendering of command results.

use std::io::Write;

use serde_json::{Map, Number, Value as Json};

use crate::config::Format;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Value {
    pub fn opt_num(v: Option<f64>) -> Self {
        v.map_or(Value::Empty, Value::Num)
    }

    fn to_csv(&self) -> String {
        match self {
            Value::Num(x) => format_float(*x),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Num(x) => Number::from_f64(*x).map_or(Json::Null, Json::Number),
            Value::Int(i) => Json::from(*i),
            Value::Bool(b) => Json::Bool(*b),
            Value::Text(s) => Json::String(s.clone()),
            Value::Empty => Json::Null,
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as i64)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

/// Shortest round-trip decimal form.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        ryu::Buffer::new().format_finite(x).to_string()
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    /// Ordered `field,value` pairs.
    Report(Vec<(String, Value)>),
    Table { columns: Vec<String>, rows: Vec<Vec<Value>> },
}

impl Output {
    pub fn render(&self, format: Format) -> CliResult<Vec<u8>> {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => {
                let mut bytes = serde_json::to_vec_pretty(&self.to_json()).map_err(|e| CliError::Output(e.to_string()))?;
                bytes.push(b'\n');
                Ok(bytes)
            }
        }
    }

    fn render_csv(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let out = |e: csv::Error| CliError::Output(e.to_string());
        match self {
            Output::Report(fields) => {
                w.write_record(["field", "value"]).map_err(out)?;
                for (name, value) in fields {
                    w.write_record([name.as_str(), &value.to_csv()]).map_err(out)?;
                }
            }
            Output::Table { columns, rows } => {
                w.write_record(columns).map_err(out)?;
                for row in rows {
                    w.write_record(row.iter().map(Value::to_csv)).map_err(out)?;
                }
            }
        }
        w.into_inner().map_err(|e| CliError::Output(e.to_string()))
    }

    fn to_json(&self) -> Json {
        match self {
            Output::Report(fields) => {
                let list = fields
                    .iter()
                    .map(|(name, value)| {
                        let mut m = Map::new();
                        m.insert("field".into(), Json::String(name.clone()));
                        m.insert("value".into(), value.to_json());
                        Json::Object(m)
                    })
                    .collect();
                Json::Array(list)
            }
            Output::Table { columns, rows } => Json::Array(
                rows.iter()
                    .map(|row| Json::Object(columns.iter().cloned().zip(row.iter().map(Value::to_json)).collect()))
                    .collect(),
            ),
        }
    }
}

pub fn write_output(bytes: &[u8], path: Option<&std::path::Path>) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Output(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(bytes).map_err(|e| CliError::Output(e.to_string())),
    }
}
