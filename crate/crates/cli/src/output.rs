//! Rendering of command outcomes as JSON, TSV or text.

use serde_json::Value;

use crate::{Format, Outcome};

pub fn render(out: &Outcome, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&out.value).expect("json")),
        Format::Pretty => out.pretty.clone().unwrap_or_else(|| key_values(&out.value, ": ")),
        Format::Tsv => match table_rows(&out.value) {
            Some(rows) => tsv_table(rows),
            None => key_values(&out.value, "\t"),
        },
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn key_values(v: &Value, sep: &str) -> String {
    match v {
        Value::Object(m) => m.iter().map(|(k, v)| format!("{k}{sep}{}\n", scalar(v))).collect(),
        other => format!("{}\n", scalar(other)),
    }
}

/// The array of row objects in a tabular document, if any.
fn table_rows(v: &Value) -> Option<&Vec<Value>> {
    ["rows", "entries"]
        .iter()
        .find_map(|k| v.get(k)?.as_array())
        .filter(|rows| rows.iter().all(Value::is_object))
}

fn tsv_table(rows: &[Value]) -> String {
    let Some(Value::Object(first)) = rows.first() else { return String::new() };
    let header: Vec<&String> = first.keys().collect();
    let mut out = header.iter().map(|h| h.as_str()).collect::<Vec<_>>().join("\t");
    out.push('\n');
    for r in rows {
        let line: Vec<String> = header.iter().map(|h| r.get(h.as_str()).map(scalar).unwrap_or_default()).collect();
        out.push_str(&line.join("\t").replace('\n', " "));
        out.push('\n');
    }
    out
}
