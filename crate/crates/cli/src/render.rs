//! Report and value rendering as JSON, CSV or a plain table.

use bettibound::bounds::BoundValue;
use bettibound::verify::Report;
use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

fn csv_text(rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn json_text<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn render_report(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => json_text(report),
        Format::Table => Ok(report.to_table()),
        Format::Csv => {
            let scenario = report.scenario.get("name").and_then(Value::as_str).unwrap_or("").to_string();
            let mut rows = vec![["scenario", "name", "verdict", "lhs", "rhs"].map(String::from).to_vec()];
            for c in &report.checks {
                rows.push(vec![scenario.clone(), c.name.clone(), c.verdict.to_string(), c.lhs.clone(), c.rhs.clone()]);
            }
            csv_text(rows)
        }
    }
}

pub fn render_bound(b: &BoundValue, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => json_text(b),
        Format::Table => Ok(format!("{}\n", b.amount)),
        Format::Csv => csv_text(vec![
            vec!["kind".into(), "value".into()],
            vec![b.kind.clone(), b.amount.to_string()],
        ]),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Renders a JSON object of named results: pretty JSON, `key,value` CSV
/// rows, or `key: value` lines.
pub fn render_value(v: &Value, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => json_text(v),
        Format::Csv => {
            let mut rows = vec![vec!["key".to_string(), "value".to_string()]];
            if let Value::Object(map) = v {
                rows.extend(map.iter().map(|(k, x)| vec![k.clone(), scalar_text(x)]));
            }
            csv_text(rows)
        }
        Format::Table => {
            let mut out = String::new();
            if let Value::Object(map) = v {
                let w = map.keys().map(String::len).max().unwrap_or(0);
                for (k, x) in map {
                    out.push_str(&format!("{k:<w$}  {}\n", scalar_text(x)));
                }
            } else {
                out.push_str(&scalar_text(v));
                out.push('\n');
            }
            Ok(out)
        }
    }
}
