//! Plain-text matrix files.
//!
//! Format: a header line `k0 n` (two base-10 integers), then exactly `k0`
//! lines of `n` characters from {0,1}. Lines beginning with `#` are comments
//! and ignored anywhere; the line terminator is LF.

use crate::gf2::BitMatrix;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixFileError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing header line")]
    MissingHeader,
}

fn parse_err(line: usize, message: impl Into<String>) -> MatrixFileError {
    MatrixFileError::Parse {
        line,
        message: message.into(),
    }
}

/// Parses matrix text into a [`BitMatrix`]; errors carry 1-based line numbers.
pub fn parse_matrix(text: &str) -> Result<BitMatrix, MatrixFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.starts_with('#'));

    let (header_line, header) = loop {
        match lines.next() {
            Some((no, l)) if l.trim().is_empty() => {
                return Err(parse_err(no, "blank line before header"))
            }
            Some((no, l)) => break (no, l),
            None => return Err(MatrixFileError::MissingHeader),
        }
    };
    let mut parts = header.split_whitespace();
    let k0: usize = parts
        .next()
        .ok_or_else(|| parse_err(header_line, "header needs `k0 n`"))?
        .parse()
        .map_err(|_| parse_err(header_line, "k0 is not an integer"))?;
    let n: usize = parts
        .next()
        .ok_or_else(|| parse_err(header_line, "header needs `k0 n`"))?
        .parse()
        .map_err(|_| parse_err(header_line, "n is not an integer"))?;
    if parts.next().is_some() {
        return Err(parse_err(header_line, "header has trailing tokens"));
    }

    let mut m = BitMatrix::zeros(k0, n);
    let mut row = 0usize;
    for (no, l) in lines {
        if row == k0 {
            if l.trim().is_empty() {
                continue;
            }
            return Err(parse_err(no, format!("expected {k0} rows, found extra data")));
        }
        if l.len() != n {
            return Err(parse_err(
                no,
                format!("row {row} has {} characters, expected {n}", l.len()),
            ));
        }
        for (c, ch) in l.bytes().enumerate() {
            match ch {
                b'0' => {}
                b'1' => m.set(row, c, true),
                _ => {
                    return Err(parse_err(
                        no,
                        format!("invalid character '{}' in column {c}", ch as char),
                    ))
                }
            }
        }
        row += 1;
    }
    if row != k0 {
        return Err(parse_err(0, format!("expected {k0} rows, found {row}")));
    }
    Ok(m)
}

/// Serializes a matrix in the file format, LF-terminated.
pub fn write_matrix(m: &BitMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", m.rows(), m.cols());
    for r in 0..m.rows() {
        let _ = writeln!(out, "{}", m.row(r));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::all_types_matrix;

    #[test]
    fn roundtrip_all_types() {
        let m = all_types_matrix(4);
        let text = write_matrix(&m);
        assert_eq!(parse_matrix(&text).unwrap(), m);
    }

    #[test]
    fn comments_ignored() {
        let text = "# a comment\n2 3\n# another\n101\n011\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m, BitMatrix::from_bit_strs(&["101", "011"]));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "2 3\n101\n01x\n";
        match parse_matrix(text) {
            Err(MatrixFileError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        let text = "2 3\n1011\n011\n";
        match parse_matrix(text) {
            Err(MatrixFileError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch_detected() {
        assert!(parse_matrix("3 3\n111\n111\n").is_err());
        assert!(parse_matrix("1 3\n111\n111\n").is_err());
    }
}
