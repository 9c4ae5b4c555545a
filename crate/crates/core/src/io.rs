//! Line-oriented text formats.
//!
//! Datasets hold one interval per line as `s e w`; queries hold one `q k`
//! per line. Fields are whitespace-separated decimal literals, blank lines
//! and lines starting with `#` are skipped. Interval ids are assigned in
//! order of the data lines, starting at 0.

use std::io::{BufRead, Write};

use crate::error::ParseError;
use crate::interval::{IntervalId, WeightedInterval};

fn number(line: usize, field: &'static str, text: &str) -> Result<f64, ParseError> {
    match text.parse::<f64>() {
        Ok(v) if !v.is_nan() => Ok(v),
        _ => Err(ParseError::BadNumber {
            line,
            field,
            text: text.to_string(),
        }),
    }
}

/// Yields `(1-based line number, fields)` for every data line.
fn data_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, Vec<String>), ParseError>> {
    reader.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(e.into())),
        Ok(line) => {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                None
            } else {
                Some(Ok((i + 1, trimmed.split_whitespace().map(str::to_string).collect())))
            }
        }
    })
}

fn expect_fields(line: usize, fields: &[String], expected: usize) -> Result<(), ParseError> {
    if fields.len() == expected {
        Ok(())
    } else {
        Err(ParseError::FieldCount {
            line,
            expected,
            found: fields.len(),
        })
    }
}

pub fn read_dataset<R: BufRead>(reader: R) -> Result<Vec<WeightedInterval>, ParseError> {
    let mut out = Vec::new();
    for item in data_lines(reader) {
        let (line, fields) = item?;
        expect_fields(line, &fields, 3)?;
        let s = number(line, "s", &fields[0])?;
        let e = number(line, "e", &fields[1])?;
        let w = number(line, "w", &fields[2])?;
        if s > e {
            return Err(ParseError::Invalid {
                line,
                msg: format!("left endpoint {s} exceeds right endpoint {e}"),
            });
        }
        out.push(WeightedInterval::new(out.len() as IntervalId, s, e, w));
    }
    Ok(out)
}

pub fn write_dataset<W: Write>(mut writer: W, intervals: &[WeightedInterval]) -> std::io::Result<()> {
    for iv in intervals {
        writeln!(writer, "{} {} {}", iv.s, iv.e, iv.w)?;
    }
    Ok(())
}

pub fn read_queries<R: BufRead>(reader: R) -> Result<Vec<(f64, usize)>, ParseError> {
    let mut out = Vec::new();
    for item in data_lines(reader) {
        let (line, fields) = item?;
        expect_fields(line, &fields, 2)?;
        let q = number(line, "q", &fields[0])?;
        let k = match fields[1].parse::<usize>() {
            Ok(k) if k >= 1 => k,
            _ => {
                return Err(ParseError::Invalid {
                    line,
                    msg: format!("k must be a positive integer, found {:?}", fields[1]),
                })
            }
        };
        out.push((q, k));
    }
    Ok(out)
}

pub fn write_queries<W: Write>(mut writer: W, queries: &[(f64, usize)]) -> std::io::Result<()> {
    for (q, k) in queries {
        writeln!(writer, "{q} {k}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments_and_blank_lines() {
        let text = "# header\n1 5 10\n\n  2 6 20  \n# mid\n4 9 5\n";
        let ivs = read_dataset(text.as_bytes()).unwrap();
        assert_eq!(ivs.len(), 3);
        assert_eq!(ivs[2], WeightedInterval::new(2, 4.0, 9.0, 5.0));
    }

    #[test]
    fn reports_line_numbers() {
        let err = read_dataset("1 2 3\n# c\n1 x 3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::BadNumber { line: 3, field: "e", .. }), "{err}");
        let err = read_dataset("1 2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::FieldCount { line: 1, expected: 3, found: 2 }));
        let err = read_dataset("5 2 1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::Invalid { line: 1, .. }));
        let err = read_dataset("0 1 NaN\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::BadNumber { line: 1, field: "w", .. }));
    }

    #[test]
    fn queries_need_positive_k() {
        assert_eq!(read_queries("4 2\n# x\n0.5 1\n".as_bytes()).unwrap(), [(4.0, 2), (0.5, 1)]);
        let err = read_queries("4 0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::Invalid { line: 1, .. }));
    }

    #[test]
    fn dataset_text_round_trips() {
        let ivs = vec![
            WeightedInterval::new(0, -1.25, 3.0, 0.1),
            WeightedInterval::new(1, 1e-300, 2.5e10, -7.0),
        ];
        let mut buf = Vec::new();
        write_dataset(&mut buf, &ivs).unwrap();
        assert_eq!(read_dataset(buf.as_slice()).unwrap(), ivs);
    }
}
