//! CSV and JSON rendering. CSV floats use 17 significant digits.

use std::io::Write;

use phaselock_core::io::format_g17;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => format_g17(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(_) | Cell::Empty => Value::Null,
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// What a command produces.
#[derive(Debug, Clone)]
pub enum Payload {
    Table { columns: Vec<String>, rows: Vec<Vec<Cell>> },
    Document(Value),
}

impl Payload {
    pub fn table(columns: &[&str], rows: Vec<Vec<Cell>>) -> Self {
        Payload::Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        }
    }

    pub fn document<T: Serialize>(value: &T) -> Self {
        Payload::Document(serde_json::to_value(value).expect("serializable payload"))
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        Value::Number(n) => {
            let s = n.as_f64().filter(|_| n.is_f64()).map_or(n.to_string(), format_g17);
            out.push((prefix.to_string(), s));
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Null => out.push((prefix.to_string(), String::new())),
    }
}

/// Writes `payload` with the run configuration echoed in front of it.
pub fn render(config: &RunConfig, payload: &Payload, w: &mut dyn Write) -> std::io::Result<()> {
    match config.format {
        Format::Csv => {
            for line in config.header_lines() {
                writeln!(w, "{line}")?;
            }
            let mut csv = csv::Writer::from_writer(w);
            match payload {
                Payload::Table { columns, rows } => {
                    csv.write_record(columns)?;
                    for r in rows {
                        csv.write_record(r.iter().map(Cell::csv))?;
                    }
                }
                Payload::Document(v) => {
                    csv.write_record(["key", "value"])?;
                    let mut pairs = Vec::new();
                    flatten("", v, &mut pairs);
                    for (k, v) in pairs {
                        csv.write_record([k, v])?;
                    }
                }
            }
            csv.flush()?;
        }
        Format::Json => {
            let data = match payload {
                Payload::Table { columns, rows } => Value::Array(
                    rows.iter()
                        .map(|r| Value::Object(columns.iter().cloned().zip(r.iter().map(Cell::json)).collect()))
                        .collect(),
                ),
                Payload::Document(v) => v.clone(),
            };
            let doc = json!({ "config": config, "data": data });
            serde_json::to_writer_pretty(&mut *w, &doc)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(format: Format) -> RunConfig {
        RunConfig::new("test", 7, 1000, format, 1).with("n", 4)
    }

    #[test]
    fn csv_table_has_header_and_quoting() {
        let p = Payload::table(
            &["spec", "volume"],
            vec![vec!["Intersect(C_DB(4),C_CS(4))".into(), 0.1.into()]],
        );
        let mut buf = Vec::new();
        render(&cfg(Format::Csv), &p, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(
            s,
            "# command=test\n# seed=7\n# samples=1000\n# n=4\nspec,volume\n\"Intersect(C_DB(4),C_CS(4))\",0.10000000000000001\n"
        );
    }

    #[test]
    fn json_document_wraps_config() {
        let p = Payload::document(&json!({ "inside": true }));
        let mut buf = Vec::new();
        render(&cfg(Format::Json), &p, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["data"]["inside"], json!(true));
        assert_eq!(v["config"]["seed"], json!(7));
        assert!(v["config"].get("threads").is_none());
    }

    #[test]
    fn documents_flatten_to_key_value_csv() {
        let p = Payload::document(&json!({ "a": { "b": [1.5, 2] }, "c": "x" }));
        let mut buf = Vec::new();
        render(&cfg(Format::Csv), &p, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.ends_with("key,value\na.b.0,1.5\na.b.1,2\nc,x\n"), "{s}");
    }
}
