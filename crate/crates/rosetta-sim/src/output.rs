//! 12-significant-digit numeric formatting and the CSV/JSON emitters shared
//! by every subcommand.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde_json::Value;

/// Round to 12 significant digits; infinities and NaN pass through.
pub(crate) fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("scientific notation round-trips")
}

/// Shortest decimal carrying exactly the 12-significant-digit value.
pub(crate) fn fmt(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        round12(x).to_string()
    }
}

/// JSON number at 12 significant digits; non-finite becomes null.
pub(crate) fn number(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
}

/// Subcommand result in a format-agnostic shape.
#[derive(Debug)]
pub(crate) enum Report {
    /// Flat key → value record.
    Scalars(BTreeMap<String, Value>),
    /// Named columns of equal length plus table-level scalars; `trailer`
    /// is appended to CSV output as a comment line.
    Table {
        columns: Vec<(String, Vec<Value>)>,
        extras: BTreeMap<String, Value>,
        trailer: Option<String>,
    },
}

fn csv_cell(value: &Value) -> String {
    match value {
        Value::Null => "inf".to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub(crate) fn to_csv(report: &Report) -> String {
    let mut lines = Vec::new();
    match report {
        Report::Scalars(map) => {
            lines.push(map.keys().cloned().collect::<Vec<_>>().join(","));
            lines.push(map.values().map(csv_cell).collect::<Vec<_>>().join(","));
        }
        Report::Table { columns, trailer, .. } => {
            lines.push(columns.iter().map(|(name, _)| name.clone()).collect::<Vec<_>>().join(","));
            let rows = columns.first().map_or(0, |(_, values)| values.len());
            for row in 0..rows {
                lines.push(
                    columns.iter().map(|(_, values)| csv_cell(&values[row])).collect::<Vec<_>>().join(","),
                );
            }
            if let Some(trailer) = trailer {
                lines.push(trailer.clone());
            }
        }
    }
    lines.push(String::new());
    lines.join("\n")
}

pub(crate) fn to_json(report: &Report) -> String {
    let mut object = serde_json::Map::new();
    object.insert("schema_version".to_string(), Value::String("1".to_string()));
    match report {
        Report::Scalars(map) => {
            for (key, value) in map {
                object.insert(key.clone(), value.clone());
            }
        }
        Report::Table { columns, extras, .. } => {
            for (key, value) in extras {
                object.insert(key.clone(), value.clone());
            }
            for (name, values) in columns {
                object.insert(name.clone(), Value::Array(values.clone()));
            }
        }
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(object))
        .expect("plain data serializes");
    text.push('\n');
    text
}

pub(crate) fn emit(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}
