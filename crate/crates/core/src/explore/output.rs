use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::ScanRecord;
use crate::error::Result;

pub const CSV_HEADER: &str = "q1,q2,positive,ppt,I,detected,bound_entangled";

/// Significant digits of every float written to CSV.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats like C's `%.{digits}g`: shortest of fixed or scientific
/// notation, trailing zeros removed, exponent with at least two digits.
pub fn format_g(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    // the exponent after rounding decides the notation
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV text for `records`, header first, LF line endings.
pub fn records_to_csv(records: &[ScanRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let g = |v| format_g(v, SIGNIFICANT_DIGITS);
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            g(r.q1),
            g(r.q2),
            r.positive,
            r.ppt,
            g(r.i),
            r.detected,
            r.bound_entangled
        )
        .expect("writing to a String cannot fail");
    }
    out
}

pub fn write_csv(records: &[ScanRecord], path: &Path) -> Result<()> {
    write_bytes(path, records_to_csv(records).as_bytes())
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize + ?Sized>(value: &T, path: &Path) -> Result<()> {
    write_bytes(path, to_json_string(value)?.as_bytes())
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(bytes)?;
    f.flush()?;
    Ok(())
}
