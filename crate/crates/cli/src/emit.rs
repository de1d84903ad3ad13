//! Deterministic serialization: JSON with 17 significant digits, CSV with
//! 12, LF line endings, stable key and column order. Identical inputs must
//! produce byte-identical output.

use crate::config::CliError;
use std::fmt::Write as _;
use std::path::Path;

/// JSON value with insertion-ordered object keys.
#[derive(Debug, Clone)]
pub enum Json {
    Bool(bool),
    UInt(u64),
    Float(f64),
    Str(String),
    Array(Vec<Json>),
    Object(Vec<(String, Json)>),
}

impl Json {
    pub fn object() -> Json {
        Json::Object(Vec::new())
    }

    pub fn push(&mut self, key: &str, value: Json) -> &mut Self {
        match self {
            Json::Object(pairs) => pairs.push((key.to_string(), value)),
            _ => unreachable!("push on non-object"),
        }
        self
    }

    /// Renders with two-space indentation and a trailing newline.
    pub fn render(&self) -> Result<String, CliError> {
        let mut out = String::new();
        self.render_into(&mut out, 0)?;
        out.push('\n');
        Ok(out)
    }

    fn render_into(&self, out: &mut String, indent: usize) -> Result<(), CliError> {
        match self {
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::UInt(u) => write!(out, "{u}").unwrap(),
            Json::Float(f) => out.push_str(&json_f64(*f)?),
            Json::Str(s) => {
                out.push('"');
                for c in s.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\t' => out.push_str("\\t"),
                        '\r' => out.push_str("\\r"),
                        c if (c as u32) < 0x20 => write!(out, "\\u{:04x}", c as u32).unwrap(),
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Json::Array(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return Ok(());
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    pad(out, indent + 1);
                    item.render_into(out, indent + 1)?;
                }
                out.push('\n');
                pad(out, indent);
                out.push(']');
            }
            Json::Object(pairs) => {
                if pairs.is_empty() {
                    out.push_str("{}");
                    return Ok(());
                }
                out.push('{');
                for (i, (key, value)) in pairs.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    pad(out, indent + 1);
                    write!(out, "\"{key}\": ").unwrap();
                    value.render_into(out, indent + 1)?;
                }
                out.push('\n');
                pad(out, indent);
                out.push('}');
            }
        }
        Ok(())
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// 17 significant digits; every emitted number must be finite.
pub fn json_f64(value: f64) -> Result<String, CliError> {
    if !value.is_finite() {
        return Err(CliError::Verification(format!(
            "refusing to serialize non-finite value {value}"
        )));
    }
    Ok(format!("{value:.16e}"))
}

/// 12 significant digits for CSV cells.
pub fn csv_f64(value: f64) -> String {
    format!("{value:.11e}")
}

/// Assembles a CSV document: header row plus formatted rows, LF endings.
pub struct Csv {
    buffer: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buffer = header.join(",");
        buffer.push('\n');
        Self {
            buffer,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        assert_eq!(cells.len(), self.columns, "csv row width mismatch");
        self.buffer.push_str(&cells.join(","));
        self.buffer.push('\n');
    }

    pub fn finish(self) -> String {
        self.buffer
    }
}

/// The standard document shape: config, results, provenance.
pub fn document(config: Json, results: Json, seed: Option<u64>) -> Json {
    let mut provenance = Json::object();
    provenance.push(
        "tool_version",
        Json::Str(env!("CARGO_PKG_VERSION").to_string()),
    );
    if let Some(seed) = seed {
        provenance.push("seed", Json::UInt(seed));
    }
    let mut doc = Json::object();
    doc.push("config", config);
    doc.push("results", results);
    doc.push("provenance", provenance);
    doc
}

/// Writes to `--out PATH` or stdout.
pub fn write_output(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Output format of tabular commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formats_pin_significant_digits() {
        assert_eq!(
            json_f64(std::f64::consts::LN_2).unwrap(),
            "6.9314718055994529e-1"
        );
        assert_eq!(csv_f64(std::f64::consts::LN_2), "6.93147180560e-1");
        assert_eq!(csv_f64(0.0), "0.00000000000e0");
        assert!(json_f64(f64::NAN).is_err());
        assert!(json_f64(f64::INFINITY).is_err());
    }

    #[test]
    fn json_rendering_is_stable() {
        let mut obj = Json::object();
        obj.push("name", Json::Str("series".into()));
        obj.push("value", Json::Float(0.5));
        obj.push("flags", Json::Array(vec![Json::Bool(true), Json::UInt(3)]));
        let rendered = obj.render().unwrap();
        assert_eq!(
            rendered,
            "{\n  \"name\": \"series\",\n  \"value\": 5.0000000000000000e-1,\n  \"flags\": [\n    true,\n    3\n  ]\n}\n"
        );
    }

    #[test]
    fn csv_builder_emits_lf_rows() {
        let mut csv = Csv::new(&["a", "b"]);
        csv.row(&["1".into(), csv_f64(2.0)]);
        assert_eq!(csv.finish(), "a,b\n1,2.00000000000e0\n");
    }
}
