//! Plain-text rendering of JSON reports.

use std::fmt::Write;

use serde_json::Value;

/// Magnitudes below this print as 0 in text reports.
const CHOP: f64 = 1e-12;

fn number(x: f64) -> String {
    if x.abs() < CHOP {
        "0".into()
    } else if (1e-4..1e6).contains(&x.abs()) {
        let s = format!("{x:.8}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{x:.4e}")
    }
}

fn numbers(v: &[Value]) -> Option<Vec<f64>> {
    v.iter().map(Value::as_f64).collect()
}

fn quaternion(c: &[f64]) -> String {
    let mut s = number(c[0]);
    for (x, unit) in c[1..].iter().zip(["i", "j", "k"]) {
        let sign = if *x <= -CHOP { '-' } else { '+' };
        write!(s, " {sign} {}{unit}", number(x.abs())).unwrap();
    }
    s
}

/// Fields holding a single quaternion.
const QUATERNION_KEYS: [&str; 3] = ["unit", "q", "value"];

fn scalar(v: &Value, is_quaternion: bool) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(x) => Some(x.as_f64().map(number).unwrap_or_else(|| x.to_string())),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.is_empty() => Some("[]".into()),
        Value::Array(a) => match numbers(a) {
            Some(c) if c.len() == 4 && is_quaternion => Some(quaternion(&c)),
            Some(c) => Some(format!("[{}]", c.into_iter().map(number).collect::<Vec<_>>().join(", "))),
            None => None,
        },
        Value::Object(_) => None,
    }
}

fn matrix_rows(v: &Value) -> Option<Vec<String>> {
    let obj = v.as_object()?;
    if obj.len() != 2 || !obj.contains_key("n") {
        return None;
    }
    obj.get("entries")?
        .as_array()?
        .iter()
        .map(|row| Some(row.as_array()?.iter().map(|e| scalar(e, true).unwrap_or_default()).collect::<Vec<_>>().join(" | ")))
        .collect()
}

fn write_value(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(v, QUATERNION_KEYS.contains(&key)) {
        writeln!(out, "{pad}{key}: {s}").unwrap();
    } else if let Some(rows) = matrix_rows(v) {
        writeln!(out, "{pad}{key}:").unwrap();
        for r in rows {
            writeln!(out, "{pad}  [ {r} ]").unwrap();
        }
    } else if let Value::Array(items) = v {
        writeln!(out, "{pad}{key}:").unwrap();
        for (k, item) in items.iter().enumerate() {
            write_value(out, &format!("[{k}]"), item, depth + 1);
        }
    } else if let Value::Object(obj) = v {
        writeln!(out, "{pad}{key}:").unwrap();
        for (k, item) in obj {
            write_value(out, k, item, depth + 1);
        }
    }
}

pub fn text(report: &Value) -> String {
    let mut out = String::new();
    match report {
        Value::Object(obj) => {
            for (k, v) in obj {
                write_value(&mut out, k, v, 0);
            }
        }
        other => write_value(&mut out, "report", other, 0),
    }
    out
}
