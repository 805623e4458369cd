//! Tabular and JSON report rendering with deterministic byte output.

use serde_json::{Map, Value};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?}, expected csv or json")),
        }
    }
}

/// One finished experiment: a flat table for CSV output plus a richer
/// JSON payload. `failure` marks reports that should exit nonzero after
/// being written (a verification that ran to completion but did not
/// hold).
pub struct Report {
    pub subcommand: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: Map<String, Value>,
    pub failure: Option<String>,
}

impl Report {
    pub fn new(subcommand: &'static str, columns: Vec<&'static str>) -> Self {
        Self {
            subcommand,
            columns,
            rows: Vec::new(),
            json: Map::new(),
            failure: None,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let mut top = Map::new();
                top.insert("schema_version".into(), Value::from(1));
                top.insert("subcommand".into(), Value::from(self.subcommand));
                for (k, v) in &self.json {
                    top.insert(k.clone(), v.clone());
                }
                let mut text = serde_json::to_string_pretty(&Value::Object(top))
                    .expect("report payloads contain only finite numbers");
                text.push('\n');
                text
            }
        }
    }
}

/// Shortest round-trip decimal form, the same notation `parse::<f64>`
/// reads back bit-exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub fn json_f64(v: f64) -> Value {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .expect("finite value")
}
