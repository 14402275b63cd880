//! Report emission: deterministic text, JSON and CSV renderings of the
//! pipeline reports. Repeated runs with equal inputs produce byte-identical
//! output (sorted keys, no timestamps, exact integers as decimal strings).

use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Emit {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for Emit {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Emit::Text),
            "json" => Ok(Emit::Json),
            "csv" => Ok(Emit::Csv),
            other => Err(format!("unknown format '{other}'")),
        }
    }
}

/// JSON with sorted keys via serde_json's value normalization.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let sorted = sort_value(v);
    serde_json::to_string_pretty(&sorted).expect("serializable") + "\n"
}

fn sort_value(v: serde_json::Value) -> serde_json::Value {
    match v {
        serde_json::Value::Object(map) => {
            let mut sorted: std::collections::BTreeMap<String, serde_json::Value> =
                Default::default();
            for (k, val) in map {
                sorted.insert(k, sort_value(val));
            }
            serde_json::to_value(sorted).unwrap()
        }
        serde_json::Value::Array(items) => {
            serde_json::Value::Array(items.into_iter().map(sort_value).collect())
        }
        other => other,
    }
}

/// Key/value text rendering of any serializable report: nested structures
/// indent, arrays become numbered entries.
pub fn to_text<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let mut out = String::new();
    render_text(&sort_value(v), 0, &mut out);
    out
}

fn render_text(v: &serde_json::Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        serde_json::Value::Object(map) => {
            for (k, val) in map {
                match val {
                    serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(val, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k} = {}\n", scalar(val))),
                }
            }
        }
        serde_json::Value::Array(items) => {
            if items.iter().all(|i| !i.is_object() && !i.is_array()) {
                out.push_str(&format!(
                    "{pad}[{}]\n",
                    items.iter().map(scalar).collect::<Vec<_>>().join(", ")
                ));
            } else {
                for (i, item) in items.iter().enumerate() {
                    out.push_str(&format!("{pad}- [{i}]\n"));
                    render_text(item, indent + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn scalar(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Flat CSV for array-of-rows reports; nested reports fall back to
/// one key,value pair per line.
pub fn to_csv<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let v = sort_value(v);
    let mut out = String::new();
    match &v {
        serde_json::Value::Array(rows) if rows.iter().all(|r| r.is_object()) => {
            if let Some(serde_json::Value::Object(first)) = rows.first() {
                let headers: Vec<&String> = first.keys().collect();
                out.push_str(
                    &headers
                        .iter()
                        .map(|h| h.as_str())
                        .collect::<Vec<_>>()
                        .join(","),
                );
                out.push('\n');
                for row in rows {
                    if let serde_json::Value::Object(m) = row {
                        let cells: Vec<String> = headers
                            .iter()
                            .map(|h| csv_cell(&m.get(*h).cloned().unwrap_or_default()))
                            .collect();
                        out.push_str(&cells.join(","));
                        out.push('\n');
                    }
                }
            }
        }
        _ => {
            out.push_str("key,value\n");
            flatten_csv("", &v, &mut out);
        }
    }
    out
}

fn flatten_csv(prefix: &str, v: &serde_json::Value, out: &mut String) {
    match v {
        serde_json::Value::Object(map) => {
            for (k, val) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_csv(&key, val, out);
            }
        }
        serde_json::Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten_csv(&format!("{prefix}[{i}]"), item, out);
            }
        }
        other => {
            out.push_str(&format!("{prefix},{}\n", csv_cell(other)));
        }
    }
}

fn csv_cell(v: &serde_json::Value) -> String {
    let s = scalar(v);
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

pub fn emit<T: Serialize>(value: &T, how: Emit) -> String {
    match how {
        Emit::Text => to_text(value),
        Emit::Json => to_json(value),
        Emit::Csv => to_csv(value),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Demo {
        b: u32,
        a: Vec<String>,
    }

    #[test]
    fn deterministic_renderings() {
        let d = Demo {
            b: 7,
            a: vec!["x".into(), "y,z".into()],
        };
        let t1 = to_text(&d);
        let t2 = to_text(&d);
        assert_eq!(t1, t2);
        assert!(t1.contains("b = 7"));
        let j = to_json(&d);
        // keys sorted: "a" before "b"
        let ia = j.find("\"a\"").unwrap();
        let ib = j.find("\"b\"").unwrap();
        assert!(ia < ib);
        let c = to_csv(&d);
        assert!(c.contains("\"y,z\""));
    }
}
