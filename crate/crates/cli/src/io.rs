//! Point file parsing and formatting.
//!
//! One point per line, coordinates separated by whitespace or commas;
//! lines starting with `#` are comments. The dimension is inferred from
//! the first data line. Duplicate points are rejected at parse time
//! because pair dilation is undefined for coincident leaves.

use dilation_core::{Point, PointSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: cannot parse '{token}' as a number")]
    BadNumber { line: usize, token: String },
    #[error("line {line}: expected {expected} coordinates, found {found}")]
    RaggedDimensions { line: usize, expected: usize, found: usize },
    #[error("line {line}: duplicate of the point on line {first}")]
    DuplicatePoint { line: usize, first: usize },
    #[error("line {line}: {message}")]
    BadPoint { line: usize, message: String },
    #[error("no points found")]
    Empty,
}

/// Parses a point set, reporting the offending line on error.
pub fn parse_points(text: &str) -> Result<PointSet, ParseError> {
    let mut points: Vec<Point> = Vec::new();
    let mut lines: Vec<usize> = Vec::new();
    let mut dim: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut coords = Vec::new();
        for token in line.split(|c: char| c == ',' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            match token.parse::<f64>() {
                Ok(v) => coords.push(v),
                Err(_) => {
                    return Err(ParseError::BadNumber { line: line_no, token: token.to_string() })
                }
            }
        }
        if let Some(d) = dim {
            if coords.len() != d {
                return Err(ParseError::RaggedDimensions {
                    line: line_no,
                    expected: d,
                    found: coords.len(),
                });
            }
        } else {
            dim = Some(coords.len());
        }
        let point = Point::new(coords)
            .map_err(|e| ParseError::BadPoint { line: line_no, message: e.to_string() })?;
        points.push(point);
        lines.push(line_no);
    }

    if points.is_empty() {
        return Err(ParseError::Empty);
    }
    PointSet::new(points).map_err(|e| match e {
        dilation_core::Error::CoincidentPoints(i, j) => {
            ParseError::DuplicatePoint { line: lines[j], first: lines[i] }
        }
        other => ParseError::BadPoint { line: 0, message: other.to_string() },
    })
}

/// Formats a point set in the file format; coordinates round-trip exactly.
pub fn format_points(set: &PointSet) -> String {
    let mut out = String::new();
    for p in set.points() {
        let coords: Vec<String> = p.coords().iter().map(|c| format!("{c}")).collect();
        out.push_str(&coords.join(" "));
        out.push('\n');
    }
    out
}

/// Parses `"x,y"` or `"x,y,z"` style center flags.
pub fn parse_center(text: &str) -> Result<Point, ParseError> {
    let coords: Result<Vec<f64>, _> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| ParseError::BadNumber { line: 0, token: t.to_string() })
        })
        .collect();
    let coords = coords?;
    Point::new(coords).map_err(|e| ParseError::BadPoint { line: 0, message: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_whitespace_and_commas() {
        let set = parse_points("0 0\n1 0\n").unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.dim(), 2);

        let set = parse_points("# hdr\n1,2,3\n4,5,6\n").unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.dim(), 3);
    }

    #[test]
    fn duplicate_reports_line() {
        let err = parse_points("0 0\n0 0\n").unwrap_err();
        match err {
            ParseError::DuplicatePoint { line, first } => {
                assert_eq!(line, 2);
                assert_eq!(first, 1);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn ragged_and_bad_numbers_report_line() {
        match parse_points("0 0\n1 2 3\n").unwrap_err() {
            ParseError::RaggedDimensions { line, expected, found } => {
                assert_eq!((line, expected, found), (2, 2, 3));
            }
            other => panic!("unexpected error {other:?}"),
        }
        match parse_points("0 0\nfoo 1\n").unwrap_err() {
            ParseError::BadNumber { line, token } => {
                assert_eq!(line, 2);
                assert_eq!(token, "foo");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(parse_points("# nothing\n"), Err(ParseError::Empty)));
    }

    #[test]
    fn format_round_trips_exactly() {
        let set = parse_points("0.1 0.2\n-3.25e-7 17\n").unwrap();
        let text = format_points(&set);
        let back = parse_points(&text).unwrap();
        for (a, b) in set.points().iter().zip(back.points()) {
            assert_eq!(a.coords(), b.coords());
        }
    }

    #[test]
    fn parse_center_flag() {
        let p = parse_center("0.5,0.25").unwrap();
        assert_eq!(p.coords(), &[0.5, 0.25]);
        assert!(parse_center("1").is_err());
        assert!(parse_center("a,b").is_err());
    }
}
