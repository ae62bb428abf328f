use std::io::Write;

use serde_json::Value;

use crate::commands::Report;
use crate::config::Emit;

/// The full JSON document for a report.
pub fn document(command: &str, config: Value, report: &Report) -> Value {
    serde_json::json!({
        "command": command,
        "config": config,
        "ok": report.ok,
        "result": report.result,
    })
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn write_report(mut w: impl Write, format: Emit, doc: &Value, report: &Report) -> std::io::Result<()> {
    match format {
        Emit::Json => {
            serde_json::to_writer_pretty(&mut w, doc)?;
            writeln!(w)
        }
        Emit::Csv => {
            let mut fields = Vec::new();
            flatten("", doc, &mut fields);
            match &report.table {
                Some(table) => {
                    for (k, v) in &fields {
                        writeln!(w, "# {k}={v}")?;
                    }
                    let mut csv = csv::Writer::from_writer(w);
                    csv.write_record(&table.header)?;
                    for row in &table.rows {
                        csv.write_record(row)?;
                    }
                    csv.flush()
                }
                None => {
                    let mut csv = csv::Writer::from_writer(w);
                    csv.write_record(["field", "value"])?;
                    for (k, v) in &fields {
                        csv.write_record([k, v])?;
                    }
                    csv.flush()
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattening_uses_dotted_paths() {
        let mut out = Vec::new();
        flatten("", &json!({ "a": { "b": 1, "c": [1, 2] }, "d": [{ "e": "x" }] }), &mut out);
        assert_eq!(
            out,
            vec![
                ("a.b".to_string(), "1".to_string()),
                ("a.c".to_string(), "[1,2]".to_string()),
                ("d.0.e".to_string(), "x".to_string()),
            ]
        );
    }
}
