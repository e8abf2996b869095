//! The `.plm` map file format.
//!
//! Line-oriented UTF-8:
//!
//! ```text
//! plmap
//! domain 0 1
//! 0 1
//! 1/6 2/3
//! 1/3 1
//! 2/3 0
//! 1 1/3
//! ```
//!
//! or just `staircase` on the first line. `#` starts a comment, blank lines
//! are ignored, rationals use the `p/q` grammar. `parse(print(m)) == m`
//! bit-exactly.

use crate::interval::ClosedInterval;
use crate::rational::Rational;

use super::{MapError, MapKind, MapModel, PLMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParsePlmError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: MapError,
    },
    #[error("empty map file")]
    Empty,
}

fn syntax(line: usize, message: impl Into<String>) -> ParsePlmError {
    ParsePlmError::Syntax { line, message: message.into() }
}

/// Parse a `.plm` document. `name` labels the resulting model.
pub fn parse_plm(text: &str, name: &str) -> Result<MapModel, ParsePlmError> {
    // (1-based line number, content with comments stripped)
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(ParsePlmError::Empty)?;
    match header {
        "staircase" => {
            if let Some((n, _)) = lines.next() {
                return Err(syntax(n, "staircase map takes no further lines"));
            }
            let mut m = MapModel::staircase();
            m.name = name.to_string();
            Ok(m)
        }
        "plmap" => {
            let (domain_line, domain_text) = lines
                .next()
                .ok_or_else(|| syntax(header_line, "missing `domain <lo> <hi>` line"))?;
            let mut parts = domain_text.split_whitespace();
            if parts.next() != Some("domain") {
                return Err(syntax(domain_line, "expected `domain <lo> <hi>`"));
            }
            let lo = parse_rational(parts.next(), domain_line)?;
            let hi = parse_rational(parts.next(), domain_line)?;
            if parts.next().is_some() {
                return Err(syntax(domain_line, "trailing tokens on domain line"));
            }
            let domain = ClosedInterval::new(lo, hi)
                .map_err(|e| syntax(domain_line, e.to_string()))?;

            let mut breakpoints = Vec::new();
            let mut last_line = domain_line;
            for (n, l) in lines {
                let mut parts = l.split_whitespace();
                let x = parse_rational(parts.next(), n)?;
                let y = parse_rational(parts.next(), n)?;
                if parts.next().is_some() {
                    return Err(syntax(n, "expected exactly `<x> <y>`"));
                }
                if let Some((px, _)) = breakpoints.last() {
                    if *px >= x {
                        return Err(ParsePlmError::Invalid {
                            line: n,
                            source: MapError::NonIncreasingBreakpoints { x },
                        });
                    }
                }
                breakpoints.push((x, y));
                last_line = n;
            }
            let map = PLMap::new(domain, breakpoints)
                .map_err(|source| ParsePlmError::Invalid { line: last_line, source })?;
            Ok(MapModel::from_pl(name, map))
        }
        other => Err(syntax(header_line, format!("unknown map kind {other:?}"))),
    }
}

/// Print a model in `.plm` form. Inverse of [`parse_plm`].
pub fn print_plm(m: &MapModel) -> String {
    match &m.kind {
        MapKind::Staircase(_) => "staircase\n".to_string(),
        MapKind::Pl(map) => {
            let mut out = String::from("plmap\n");
            out.push_str(&format!("domain {} {}\n", map.domain().lo(), map.domain().hi()));
            for (x, y) in map.breakpoints() {
                out.push_str(&format!("{x} {y}\n"));
            }
            out
        }
    }
}

fn parse_rational(tok: Option<&str>, line: usize) -> Result<Rational, ParsePlmError> {
    let tok = tok.ok_or_else(|| syntax(line, "missing rational token"))?;
    tok.parse().map_err(|e: crate::rational::ParseRationalError| syntax(line, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::builtin;

    #[test]
    fn parses_example_3_1_layout() {
        let text = "plmap\ndomain 0 1\n0 1\n1/6 2/3\n1/3 1\n2/3 0\n1 1/3\n";
        let m = parse_plm(text, "f").unwrap();
        let expected = builtin("example-3-1", None).unwrap();
        assert_eq!(m.kind, expected.kind);
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "# tent map\nplmap\n\ndomain 0 1  # unit interval\n0 0\n1/2 1 # peak\n1 0\n";
        let m = parse_plm(text, "tent").unwrap();
        assert_eq!(m.kind, builtin("tent", None).unwrap().kind);
    }

    #[test]
    fn staircase_header() {
        let m = parse_plm("staircase\n", "s").unwrap();
        assert!(m.is_staircase());
    }

    #[test]
    fn decreasing_x_reports_line() {
        let text = "plmap\ndomain 0 1\n0 0\n1/2 1\n1/4 0\n1 0\n";
        match parse_plm(text, "bad") {
            Err(ParsePlmError::Invalid { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected line-tagged error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_reports_line() {
        let text = "plmap\ndomain 0 1\n0 zero\n1 0\n";
        match parse_plm(text, "bad") {
            Err(ParsePlmError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn print_parse_round_trip() {
        for name in ["tent", "identity", "example-3-1", "example-3-2"] {
            let m = builtin(name, None).unwrap();
            let text = print_plm(&m);
            let back = parse_plm(&text, &m.name).unwrap();
            assert_eq!(back, m, "round trip failed for {name}");
            // bit-exact: printing again yields the same bytes
            assert_eq!(print_plm(&back), text);
        }
    }
}
