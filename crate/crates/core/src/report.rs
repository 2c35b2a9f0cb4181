//! JSON run reports: 17 significant digits, non-finite numbers as `null`.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub const TOOL_VERSION: &str = concat!("menger ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub params: Value,
    pub results: Value,
    pub diagnostics: Value,
    pub tool_version: String,
    pub timestamp: String,
}

/// Serializes to a JSON value; NaN and ±∞ become `null`.
pub fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))
}

impl Report {
    pub fn new(command: &str, params: Value, results: Value, diagnostics: Value) -> Self {
        Report {
            command: command.to_string(),
            params,
            results,
            diagnostics,
            tool_version: TOOL_VERSION.to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        let fields: [(&str, Value); 6] = [
            ("command", Value::String(self.command.clone())),
            ("params", self.params.clone()),
            ("results", self.results.clone()),
            ("diagnostics", self.diagnostics.clone()),
            ("tool_version", Value::String(self.tool_version.clone())),
            ("timestamp", Value::String(self.timestamp.clone())),
        ];
        for (i, (k, v)) in fields.iter().enumerate() {
            out.push_str("  ");
            write_string(&mut out, k);
            out.push_str(": ");
            write_value(&mut out, v, 1);
            out.push_str(if i + 1 < fields.len() { ",\n" } else { "\n" });
        }
        out.push_str("}\n");
        out
    }
}

/// `x` with 17 significant digits, trailing zeros dropped.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == x.trunc() && x.abs() < 1e15 {
        return format!("{x:.1}");
    }
    let s = format!("{x:.16e}");
    let (mant, exp) = s.split_once('e').expect("exponent form");
    let mant = mant.trim_end_matches('0').trim_end_matches('.');
    let e: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&e) {
        // positional form keeps the same significant digits
        let digits = mant.replace(['.', '-'], "");
        let neg = x < 0.0;
        let mut body = if e >= 0 {
            let e = e as usize;
            if digits.len() > e + 1 {
                format!("{}.{}", &digits[..=e], &digits[e + 1..])
            } else {
                format!("{}{}.0", digits, "0".repeat(e + 1 - digits.len()))
            }
        } else {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), digits)
        };
        if neg {
            body.insert(0, '-');
        }
        body
    } else {
        format!("{mant}e{e}")
    }
}

fn write_string(out: &mut String, s: &str) {
    out.push_str(&serde_json::to_string(s).expect("strings serialize"));
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth + 1);
    let close = "  ".repeat(depth);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                out.push_str(&format_number(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => write_string(out, s),
        Value::Array(a) => {
            if a.is_empty() {
                out.push_str("[]");
            } else if a.iter().all(|x| x.is_number() || x.is_null()) {
                out.push('[');
                for (i, x) in a.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, depth + 1);
                }
                out.push(']');
            } else {
                out.push_str("[\n");
                for (i, x) in a.iter().enumerate() {
                    out.push_str(&pad);
                    write_value(out, x, depth + 1);
                    out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
                }
                out.push_str(&close);
                out.push(']');
            }
        }
        Value::Object(o) => {
            if o.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, x)) in o.iter().enumerate() {
                out.push_str(&pad);
                write_string(out, k);
                out.push_str(": ");
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < o.len() { ",\n" } else { "\n" });
            }
            out.push_str(&close);
            out.push('}');
        }
    }
}

/// The report text with the timestamp line blanked, for determinism comparisons.
pub fn strip_timestamp(json: &str) -> String {
    json.lines()
        .map(|l| if l.trim_start().starts_with("\"timestamp\"") { "  \"timestamp\": \"\"" } else { l })
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn numbers() {
        assert_eq!(format_number(0.1875), "0.1875");
        assert_eq!(format_number(1.0 / 15.0), "0.066666666666666666");
        assert_eq!(format_number(8.0), "8.0");
        assert_eq!(format_number(-2.5e-9), "-2.5000000000000001e-9");
        assert_eq!(format_number(-0.25e-9), "-2.5000000000000002e-10");
        assert_eq!(format_number(1e300), "1.0000000000000001e300");
        assert_eq!(format_number(2f64.powi(-20)), "9.5367431640625e-7");
        assert_eq!(format_number(f64::NAN), "null");
        assert_eq!(format_number(f64::INFINITY), "null");
        for x in [std::f64::consts::PI, -1.0 / 3.0, 123456.789, 6.02e23, 1e-7, 0.000123] {
            let back: f64 = format_number(x).parse().unwrap();
            assert_eq!(back, x, "{x}");
        }
    }

    #[test]
    fn round_trips_as_json() {
        let r = Report {
            command: "energy".into(),
            params: json!({"p": 2.0, "seed": 7}),
            results: json!({"value": 0.1875, "bad": f64::NAN, "list": [1.5, 2.0], "rows": [{"a": 1}]}),
            diagnostics: json!({}),
            tool_version: TOOL_VERSION.into(),
            timestamp: "t".into(),
        };
        let text = r.to_json();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["results"]["value"], json!(0.1875));
        assert_eq!(v["results"]["bad"], Value::Null);
        assert_eq!(v["params"]["seed"], json!(7));
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["command", "params", "results", "diagnostics", "tool_version", "timestamp"]);
        let mut r2 = r.clone();
        r2.timestamp = "other".into();
        assert_ne!(text, r2.to_json());
        assert_eq!(strip_timestamp(&text), strip_timestamp(&r2.to_json()));
    }
}
