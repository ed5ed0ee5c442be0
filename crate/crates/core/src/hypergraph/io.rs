//! Text format: a header line `n k m`, then `m` lines with the 1-based
//! vertices of one edge in increasing order, separated by single spaces.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use super::Hypergraph;
use crate::error::{Error, Result};
use crate::kset::KSet;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_ints(line_no: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("not a non-negative integer: {tok:?}")))
        })
        .collect()
}

impl Hypergraph {
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + self.len() * self.k() * 4);
        writeln!(out, "{} {} {}", self.n(), self.k(), self.len()).unwrap();
        for e in self.edges() {
            let mut first = true;
            for v in e.iter() {
                if !first {
                    out.push(' ');
                }
                first = false;
                write!(out, "{}", v + 1).unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text format. Blank lines are ignored; vertices within a
    /// line may come in any order. The result is flagged distinct when no
    /// edge repeats.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let h = parse_ints(hline, header)?;
        let [n, k, m] = h[..] else {
            return Err(parse_err(hline, "header must be \"n k m\""));
        };
        if n > crate::kset::MAX_N || k == 0 || k > n {
            return Err(parse_err(hline, format!("unsupported shape n={n} k={k}")));
        }
        let mut edges = Vec::with_capacity(m);
        for (line_no, line) in lines {
            if edges.len() == m {
                return Err(parse_err(line_no, format!("more than {m} edge lines")));
            }
            let vs = parse_ints(line_no, line)?;
            if vs.len() != k {
                return Err(parse_err(
                    line_no,
                    format!("edge has {} vertices, expected {k}", vs.len()),
                ));
            }
            let e = KSet::from_one_based(n, &vs).map_err(|e| parse_err(line_no, e.to_string()))?;
            edges.push(e);
        }
        if edges.len() != m {
            return Err(parse_err(
                text.lines().count().max(1),
                format!("expected {m} edges, found {}", edges.len()),
            ));
        }
        let h = Hypergraph::new(n, k, edges)?;
        let distinct = !h.has_repeats();
        Ok(Hypergraph::from_parts_unchecked(n, k, h.edges, distinct))
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Hypergraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}
