//! Deterministic CSV emission: 12 significant digits, LF line endings,
//! blank cells for undefined values.

use crate::sweep::SweepRow;
use std::io::{self, Write};

pub const CSV_HEADER: &str = "t,f,h,g,gamma,qfi,qcrb,qfi_flow,concurrence,nm_cumulative";

/// Format with 12 significant digits, trimming trailing zeros; falls back
/// to scientific notation outside a readable magnitude window. Pure
/// function of the bits, so identical inputs yield identical bytes.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let exponent: i32 = {
        let sci = format!("{x:e}");
        sci.split('e').nth(1).expect("e-format always has an exponent").parse().unwrap()
    };
    if (-5..=11).contains(&exponent) {
        let decimals = (11 - exponent) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        let sci = format!("{x:.11e}");
        let (mantissa, exp) = sci.split_once('e').unwrap();
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn cell(value: Option<f64>) -> String {
    value.map(fmt_sig).unwrap_or_default()
}

/// Write header plus one line per row, terminated by `\n`.
pub fn emit_csv<W: Write>(rows: &[SweepRow], out: &mut W) -> io::Result<()> {
    if rows.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "no rows to emit"));
    }
    let mut buffer = String::with_capacity(rows.len() * 96);
    buffer.push_str(CSV_HEADER);
    buffer.push('\n');
    for row in rows {
        buffer.push_str(&fmt_sig(row.t));
        for value in [Some(row.f), Some(row.h), Some(row.g), row.gamma, Some(row.qfi)] {
            buffer.push(',');
            buffer.push_str(&cell(value));
        }
        buffer.push(',');
        buffer.push_str(&cell(row.qcrb));
        buffer.push(',');
        buffer.push_str(&fmt_sig(row.qfi_flow));
        buffer.push(',');
        buffer.push_str(&cell(row.concurrence));
        buffer.push(',');
        buffer.push_str(&cell(row.nm_cumulative));
        buffer.push('\n');
    }
    out.write_all(buffer.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(t: f64) -> SweepRow {
        SweepRow {
            t,
            f: 0.0,
            h: 1.0,
            g: 0.5,
            gamma: Some(1.0),
            qfi: 0.25,
            qcrb: Some(2.0),
            qfi_flow: -0.5,
            concurrence: None,
            nm_cumulative: None,
        }
    }

    #[test]
    fn formatting_significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(64.0), "64");
        assert_eq!(fmt_sig(0.125), "0.125");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(-1.0 / 3.0), "-0.333333333333");
        assert_eq!(fmt_sig(2e-7), "2e-7");
        assert_eq!(fmt_sig(1234.56789012345), "1234.56789012");
        assert_eq!(fmt_sig(1e12), "1e12");
        assert_eq!(fmt_sig(3.5e-300), "3.5e-300");
        // Rounding across a decade boundary keeps the value right.
        assert_eq!(fmt_sig(0.999999999999999), "1");
    }

    #[test]
    fn header_and_row_count() {
        let rows = vec![row(0.0), row(0.5), row(1.0)];
        let mut bytes = Vec::new();
        emit_csv(&rows, &mut bytes).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with(CSV_HEADER));
        assert!(text.ends_with('\n'));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn blank_cells_for_missing_values() {
        let mut r = row(0.0);
        r.gamma = None;
        r.qcrb = None;
        let mut bytes = Vec::new();
        emit_csv(&[r], &mut bytes).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        let data_line = text.lines().nth(1).unwrap();
        let fields: Vec<&str> = data_line.split(',').collect();
        assert_eq!(fields.len(), 10);
        assert_eq!(fields[4], ""); // gamma
        assert_eq!(fields[6], ""); // qcrb
        assert_eq!(fields[8], ""); // concurrence
        assert_eq!(fields[9], ""); // nm_cumulative
    }

    #[test]
    fn empty_rows_rejected() {
        let mut bytes = Vec::new();
        assert!(emit_csv(&[], &mut bytes).is_err());
    }

    #[test]
    fn deterministic_bytes() {
        let rows = vec![row(1.0 / 3.0), row(2.0 / 7.0)];
        let mut first = Vec::new();
        let mut second = Vec::new();
        emit_csv(&rows, &mut first).unwrap();
        emit_csv(&rows, &mut second).unwrap();
        assert_eq!(first, second);
    }
}
