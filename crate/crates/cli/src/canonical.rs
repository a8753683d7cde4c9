//! Byte-stable JSON: keys sorted, every float printed with 17 significant
//! digits in exponent form, two-space indentation.

use std::fmt::Write;

use serde_json::{Map, Number, Value};

pub fn float(v: f64) -> Value {
    // Non-finite values are rejected before a report is built.
    Value::Number(Number::from_f64(v).expect("report floats are finite"))
}

pub fn to_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_number(out: &mut String, n: &Number) {
    if let Some(i) = n.as_i64() {
        write!(out, "{i}").unwrap();
    } else if let Some(u) = n.as_u64() {
        write!(out, "{u}").unwrap();
    } else {
        let f = n.as_f64().expect("number is a float");
        // −0 and +0 print identically.
        let f = if f == 0.0 { 0.0 } else { f };
        write!(out, "{f:.16e}").unwrap();
    }
}

fn write_map(out: &mut String, m: &Map<String, Value>, level: usize) {
    if m.is_empty() {
        out.push_str("{}");
        return;
    }
    let mut keys: Vec<&String> = m.keys().collect();
    keys.sort();
    out.push_str("{\n");
    for (i, k) in keys.iter().enumerate() {
        indent(out, level + 1);
        out.push_str(&Value::String((*k).clone()).to_string());
        out.push_str(": ");
        write_value(out, &m[*k], level + 1);
        if i + 1 < keys.len() {
            out.push(',');
        }
        out.push('\n');
    }
    indent(out, level);
    out.push('}');
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, v: &Value, level: usize) {
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&v.to_string()),
        Value::Number(n) => write_number(out, n),
        Value::Object(m) => write_map(out, m, level),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        // Short scalar rows such as complex pairs stay on one line.
        Value::Array(items) if items.len() <= 4 && items.iter().all(is_scalar) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, item, level);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                indent(out, level + 1);
                write_value(out, item, level + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, level);
            out.push(']');
        }
    }
}
