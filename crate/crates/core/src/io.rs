//! Text formats.
//!
//! `SPG1` graph files:
//!
//! ```text
//! SPG1 <n> <nnz>
//! <i> <j> <value>      # nnz lines, upper triangle only, 0-based
//! ```
//!
//! Lines starting with `#` are comments. Writers emit entries in ascending
//! `(i, j)` order with `i < j`. A reader accepts either orientation of an
//! entry but rejects a pair listed twice.
//!
//! `PERM1` permutation files: line 1 `PERM1 <n>`, line 2 the `n` indices.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use crate::error::{Error, ParseErrorKind, Result};
use crate::graph::SparseSymMatrix;

fn parse_err(line: usize, kind: ParseErrorKind) -> Error {
    Error::Parse { line, kind }
}

/// Content lines with their 1-based line numbers, comments and blanks dropped.
fn content_lines<R: BufRead>(reader: R) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push((idx + 1, t.to_string()));
    }
    Ok(out)
}

pub fn read_graph<R: BufRead>(reader: R) -> Result<SparseSymMatrix> {
    let lines = content_lines(reader)?;
    let Some((hline, header)) = lines.first() else {
        return Err(parse_err(1, ParseErrorKind::MalformedHeader("missing header".into())));
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    let bad_header = || parse_err(*hline, ParseErrorKind::MalformedHeader(header.clone()));
    if fields.len() != 3 || fields[0] != "SPG1" {
        return Err(bad_header());
    }
    let n: usize = fields[1].parse().map_err(|_| bad_header())?;
    let declared: usize = fields[2].parse().map_err(|_| bad_header())?;

    let mut entries: BTreeMap<(usize, usize), (f64, usize)> = BTreeMap::new();
    for (line_no, line) in &lines[1..] {
        let f: Vec<&str> = line.split_whitespace().collect();
        let malformed = || parse_err(*line_no, ParseErrorKind::MalformedEntry(line.clone()));
        if f.len() != 3 {
            return Err(malformed());
        }
        let i: usize = f[0].parse().map_err(|_| malformed())?;
        let j: usize = f[1].parse().map_err(|_| malformed())?;
        let v: f64 = f[2].parse().map_err(|_| malformed())?;
        if !v.is_finite() {
            return Err(malformed());
        }
        if i >= n || j >= n {
            return Err(parse_err(*line_no, ParseErrorKind::IndexOutOfRange { i, j, n }));
        }
        if i == j {
            return Err(parse_err(*line_no, ParseErrorKind::DiagonalEntry(i)));
        }
        let key = (i.min(j), i.max(j));
        if let Some(&(prev, _)) = entries.get(&key) {
            let kind = if prev == v {
                ParseErrorKind::DuplicateEntry { i: key.0, j: key.1 }
            } else {
                ParseErrorKind::Asymmetric { i: key.0, j: key.1 }
            };
            return Err(parse_err(*line_no, kind));
        }
        entries.insert(key, (v, *line_no));
    }
    let found = lines.len() - 1;
    if found != declared {
        return Err(parse_err(*hline, ParseErrorKind::CountMismatch { declared, found }));
    }
    let upper: Vec<_> = entries.iter().map(|(&(i, j), &(v, _))| (i, j, v)).collect();
    SparseSymMatrix::from_upper(n, &upper)
}

/// Writes the strict upper triangle. Diagonal entries are not part of the
/// format and are skipped.
pub fn write_graph<W: Write>(m: &SparseSymMatrix, mut w: W) -> Result<()> {
    let entries: Vec<_> = m.upper_entries().filter(|&(i, j, _)| i < j).collect();
    writeln!(w, "SPG1 {} {}", m.n(), entries.len())?;
    for (i, j, v) in entries {
        writeln!(w, "{i} {j} {v}")?;
    }
    Ok(())
}

pub fn graph_to_string(m: &SparseSymMatrix) -> String {
    let mut buf = Vec::new();
    write_graph(m, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ASCII output")
}

pub fn read_permutation<R: BufRead>(reader: R) -> Result<Vec<usize>> {
    let lines = content_lines(reader)?;
    let Some((hline, header)) = lines.first() else {
        return Err(parse_err(1, ParseErrorKind::MalformedHeader("missing header".into())));
    };
    let bad_header = || parse_err(*hline, ParseErrorKind::MalformedHeader(header.clone()));
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 || fields[0] != "PERM1" {
        return Err(bad_header());
    }
    let n: usize = fields[1].parse().map_err(|_| bad_header())?;
    let mut order = Vec::with_capacity(n);
    for (line_no, line) in &lines[1..] {
        for tok in line.split_whitespace() {
            let v: usize = tok
                .parse()
                .map_err(|_| parse_err(*line_no, ParseErrorKind::MalformedEntry(tok.to_string())))?;
            order.push(v);
        }
    }
    if order.len() != n {
        return Err(parse_err(*hline, ParseErrorKind::CountMismatch { declared: n, found: order.len() }));
    }
    let mut seen = vec![false; n];
    for &v in &order {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(parse_err(
                hline + 1,
                ParseErrorKind::InvalidPermutation(format!("index {v} repeated or out of range")),
            ));
        }
    }
    Ok(order)
}

pub fn write_permutation<W: Write>(order: &[usize], mut w: W) -> Result<()> {
    writeln!(w, "PERM1 {}", order.len())?;
    let body: Vec<String> = order.iter().map(|v| v.to_string()).collect();
    writeln!(w, "{}", body.join(" "))?;
    Ok(())
}
