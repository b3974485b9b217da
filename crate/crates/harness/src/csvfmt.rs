//! CSV emission with C-style `%.12e` numeric formatting.

use anyhow::{Context, Result};
use std::fs;
use std::path::Path;

/// Formats a float like C's `%.12e`: 12 fractional digits, a signed
/// exponent of at least two digits.
pub fn fmt_e12(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let s = format!("{x:.12e}");
    let (mantissa, exponent) = s.split_once('e').expect("exponent present");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let sign = if exponent < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exponent.abs())
}

/// Writes a header row plus data rows; every cell is already a string.
pub fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_like_printf() {
        assert_eq!(fmt_e12(0.0), "0.000000000000e+00");
        assert_eq!(fmt_e12(1.0), "1.000000000000e+00");
        assert_eq!(fmt_e12(-0.0015), "-1.500000000000e-03");
        assert_eq!(fmt_e12(9002.0), "9.002000000000e+03");
        assert_eq!(fmt_e12(1.23456789012345e-120), "1.234567890123e-120");
    }

    #[test]
    fn handles_non_finite() {
        assert_eq!(fmt_e12(f64::NAN), "nan");
        assert_eq!(fmt_e12(f64::INFINITY), "inf");
        assert_eq!(fmt_e12(f64::NEG_INFINITY), "-inf");
    }
}
