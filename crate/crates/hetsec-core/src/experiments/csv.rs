//! CSV output of sweep results.
//!
//! Schema: `axis,scheme,method,p_macro,p_small,p_overall,stderr,wall_time_ms,error`.
//! Numbers use decimal notation with 10 significant digits; cells that do
//! not apply (stderr of analytic rows, probabilities a failed point never
//! produced) stay blank.

use super::sweep::ResultRow;
use std::io::{self, Write};

pub const CSV_HEADER: &str = "axis,scheme,method,p_macro,p_small,p_overall,stderr,wall_time_ms,error";

/// Decimal representation with the given number of significant digits.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).clamp(0, 340) as usize;
    format!("{value:.decimals$}")
}

fn cell(value: Option<f64>) -> String {
    value.map(|v| format_significant(v, 10)).unwrap_or_default()
}

/// Write the header plus one line per row.
pub fn emit_csv<W: Write>(rows: &[ResultRow], out: &mut W) -> io::Result<()> {
    if rows.is_empty() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            "refusing to emit an empty result set",
        ));
    }
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        let error = match &row.error {
            // Commas and quotes in error text would break the schema.
            Some(e) => e.replace([',', '"', '\n'], ";"),
            None => String::new(),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            format_significant(row.axis_value, 10),
            row.scheme.label(),
            row.method.label(),
            cell(row.p_macro),
            cell(row.p_small),
            cell(row.p_overall),
            cell(row.stderr),
            cell(row.wall_time_ms),
            error,
        )?;
    }
    Ok(())
}
