//! Plain-text series formats.
//!
//! Input CSV: comma separated, `.` decimal point, UTF-8. Each record holds
//! either a single value or a `label,value` pair (for example a date and a
//! reading). A first record whose value field is neither a number nor a
//! missing marker is treated as a header. A cell is missing when it is empty
//! or equals `nan` in any letter case.
//!
//! Output CSV: header `index,value,imputed_flag`, one row per sample, with
//! values printed in Rust's shortest round-trip form and the flag `1` at
//! imputed positions.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mask::Mask;

/// A parsed input series.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub header: Option<Vec<String>>,
    /// Row labels when the file has two columns.
    pub labels: Option<Vec<String>>,
    pub values: Vec<Option<f64>>,
}

impl Series {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Keeps only the first `n` records.
    pub fn truncate(&mut self, n: usize) {
        self.values.truncate(n);
        if let Some(l) = self.labels.as_mut() {
            l.truncate(n);
        }
    }

    /// All values, failing if any is missing.
    pub fn complete(&self) -> Result<Vec<f64>> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::data(format!("value at index {i} is missing"))))
            .collect()
    }
}

fn parse_cell(cell: &str) -> std::result::Result<Option<f64>, String> {
    let t = cell.trim();
    if t.is_empty() || t.eq_ignore_ascii_case("nan") {
        return Ok(None);
    }
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        Ok(_) => Err(format!("non-finite value {t:?}")),
        Err(_) => Err(format!("cannot parse {t:?} as a number")),
    }
}

/// Splits one CSV line into trimmed fields, honouring double quotes (`""`
/// inside quotes is a literal quote).
fn split_fields(line: &str) -> std::result::Result<Vec<String>, String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut in_quotes = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match (c, in_quotes) {
            ('"', true) if chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            ('"', _) => in_quotes = !in_quotes,
            (',', false) => fields.push(std::mem::take(&mut cur).trim().to_string()),
            _ => cur.push(c),
        }
    }
    if in_quotes {
        return Err("unterminated quoted field".into());
    }
    fields.push(cur.trim().to_string());
    Ok(fields)
}

/// Parses the input CSV dialect described in the module docs.
///
/// In a single-column file an empty line is a missing value; trailing empty
/// lines at the end of the file are ignored.
pub fn read_series(text: &str) -> Result<Series> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let lines: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).collect();
    let last_nonblank = lines
        .iter()
        .rposition(|l| !l.trim().is_empty())
        .map_or(0, |p| p + 1);

    let mut header = None;
    let mut labels: Vec<String> = Vec::new();
    let mut values = Vec::new();
    let mut width = None;

    for (row, raw) in lines[..last_nonblank].iter().enumerate() {
        let line = row + 1;
        let record = split_fields(raw).map_err(|message| Error::Parse { line, message })?;
        if record.len() > 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 1 or 2 columns, found {}", record.len()),
            });
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {w} columns, found {}", record.len()),
                })
            }
            _ => {}
        }
        match parse_cell(&record[record.len() - 1]) {
            Ok(v) => {
                values.push(v);
                if record.len() == 2 {
                    labels.push(record[0].clone());
                }
            }
            Err(message) => {
                if header.is_none() && values.is_empty() {
                    header = Some(record);
                    width = None;
                } else {
                    return Err(Error::Parse { line, message });
                }
            }
        }
    }
    if values.is_empty() {
        return Err(Error::data("no data rows"));
    }
    let labels = (width == Some(2)).then_some(labels);
    Ok(Series {
        header,
        labels,
        values,
    })
}

/// Writes the imputed series with its imputation flags.
pub fn write_imputed(values: &[f64], mask: &Mask) -> String {
    let flags = mask.membership();
    let mut out = String::from("index,value,imputed_flag\n");
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(out, "{i},{v},{}", u8::from(flags[i]));
    }
    out
}

/// Reads back the output of [`write_imputed`].
pub fn read_imputed(text: &str) -> Result<(Vec<f64>, Mask)> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "index,value,imputed_flag" => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: "missing `index,value,imputed_flag` header".into(),
            })
        }
    }
    let mut values = Vec::new();
    let mut missing = Vec::new();
    for (i, raw) in lines {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
        let bad = |message: String| Error::Parse { line, message };
        if parts.len() != 3 {
            return Err(bad(format!("expected 3 fields, found {}", parts.len())));
        }
        let idx: usize = parts[0]
            .parse()
            .map_err(|e| bad(format!("bad index: {e}")))?;
        if idx != values.len() {
            return Err(bad(format!("index {idx} out of sequence")));
        }
        values.push(
            parts[1]
                .parse::<f64>()
                .map_err(|e| bad(format!("bad value: {e}")))?,
        );
        match parts[2] {
            "1" => missing.push(idx),
            "0" => {}
            other => return Err(bad(format!("bad flag {other:?}"))),
        }
    }
    let mask = Mask::new(values.len().max(1), missing)?;
    Ok((values, mask))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_column_with_gaps() {
        let s = read_series("1.5\n\nNaN\n3\n").unwrap();
        assert_eq!(s.header, None);
        assert_eq!(s.values, vec![Some(1.5), None, None, Some(3.0)]);
    }

    #[test]
    fn labelled_with_header() {
        let text = "\"Month\",\"Monthly beer production\"\n1956-01,93.2\n1956-02,\n1956-03,nan\n";
        let s = read_series(text).unwrap();
        assert_eq!(
            s.header.as_deref(),
            Some(&["Month".to_string(), "Monthly beer production".to_string()][..])
        );
        assert_eq!(s.labels.as_deref().unwrap()[0], "1956-01");
        assert_eq!(s.values, vec![Some(93.2), None, None]);
    }

    #[test]
    fn malformed_rows_are_rejected() {
        assert!(matches!(
            read_series("1\nabc\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(read_series("a,b,c\n1,2,3\n").is_err());
        assert!(read_series("x,1\n2\n").is_err());
        assert!(read_series("value\n").is_err());
        assert!(read_series("inf\n").is_err());
    }

    #[test]
    fn imputed_round_trip() {
        let mask = Mask::new(4, vec![1, 2]).unwrap();
        let values = [0.1, 2.0 / 3.0, -1e-300, 7.0];
        let text = write_imputed(&values, &mask);
        assert!(text.starts_with("index,value,imputed_flag\n0,0.1,0\n1,"));
        let (back, m) = read_imputed(&text).unwrap();
        assert_eq!(back, values);
        assert_eq!(m, mask);
    }
}
