//! Shared serialization conventions for every subcommand.
//!
//! * CSV output always starts with a header row; floating-point cells are
//!   written as `{:.16e}` (17 significant digits, enough to round-trip an
//!   `f64`); absent optional values become empty cells.
//! * JSON output is a pretty-printed envelope
//!   `{"schema_version": 1, "command": ..., "data": ...}` whose floats use
//!   serde_json's shortest round-trip encoding (also value-exact).
//!
//! Both encodings are deterministic functions of the payload, which keeps
//! repeated runs byte-identical.

use clap::ValueEnum;
use serde::Serialize;

/// Version stamp carried by every JSON envelope.
pub const SCHEMA_VERSION: u32 = 1;

/// Output encoding selector shared by all subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A float rendered with 17 significant digits.
pub fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

/// An optional float: 17 significant digits or an empty cell.
pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f).unwrap_or_default()
}

/// Quotes a CSV cell that may contain commas or quotes.
pub fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// Wraps `data` in the versioned JSON envelope for `command`.
pub fn json_envelope<T: Serialize>(command: &str, data: &T) -> String {
    let envelope = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "data": data,
    });
    let mut text = serde_json::to_string_pretty(&envelope)
        .expect("JSON serialization of plain data cannot fail");
    text.push('\n');
    text
}
