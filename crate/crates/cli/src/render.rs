//! Deterministic JSON and TSV output.

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum FloatFormat {
    /// Shortest string that parses back to the same double.
    #[default]
    Shortest,
    /// Always 17 significant digits in scientific notation.
    Fixed,
}

impl FloatFormat {
    pub fn format(self, v: f64) -> String {
        if !v.is_finite() {
            return if v.is_nan() {
                "nan".into()
            } else if v > 0.0 {
                "inf".into()
            } else {
                "-inf".into()
            };
        }
        match self {
            FloatFormat::Shortest => format!("{v:?}"),
            FloatFormat::Fixed => format!("{v:.16e}"),
        }
    }
}

pub fn num(v: f64) -> Value {
    Number::from_f64(v)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub fn nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

pub fn object<const N: usize>(entries: [(&str, Value); N]) -> Value {
    let mut map = Map::new();
    for (k, v) in entries {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

/// Pretty-prints with sorted keys and two-space indentation.
pub fn json(value: &Value, floats: FloatFormat) -> String {
    let mut out = String::new();
    write_value(&mut out, value, floats, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, value: &Value, floats: FloatFormat, depth: usize) {
    match value {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&value.to_string()),
        Value::Number(n) => match n.as_f64() {
            Some(v) if n.is_f64() => out.push_str(&floats.format(v)),
            _ => out.push_str(&n.to_string()),
        },
        Value::Array(items) => {
            if items.iter().all(|v| !v.is_array() && !v.is_object()) {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, floats, depth + 1);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                indent(out, depth + 1);
                write_value(out, item, floats, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            indent(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            // serde_json's default map is a BTreeMap, so iteration is sorted.
            for (i, (k, v)) in map.iter().enumerate() {
                indent(out, depth + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, v, floats, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            indent(out, depth);
            out.push('}');
        }
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// Tab-separated table with a header row.
pub struct Tsv {
    out: String,
    floats: FloatFormat,
}

impl Tsv {
    pub fn new(header: &[&str], floats: FloatFormat) -> Self {
        let mut out = header.join("\t");
        out.push('\n');
        Self { out, floats }
    }

    pub fn row(&mut self, text: &[&str], values: &[f64]) {
        let cells: Vec<String> = text
            .iter()
            .map(|s| s.to_string())
            .chain(values.iter().map(|&v| self.floats.format(v)))
            .collect();
        self.out.push_str(&cells.join("\t"));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}
