//! Line-oriented text formats. All indices in text are 1-based.

use std::fmt::Write as _;

use thiserror::Error;

use crate::digraph::Digraph;
use crate::matrix::SquareMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct TextError {
    pub line: usize,
    pub message: String,
}

impl TextError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        TextError { line, message: message.into() }
    }
}

/// Strip a `#` comment and surrounding whitespace.
pub fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => line[..k].trim(),
        None => line.trim(),
    }
}

/// Non-empty, comment-stripped lines with their 1-based line numbers.
pub fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, strip_comment(l)))
        .filter(|(_, l)| !l.is_empty())
}

/// True if the first content line is a `vertices` header.
pub fn looks_like_digraph(text: &str) -> bool {
    content_lines(text).next().is_some_and(|(_, l)| l.split_whitespace().next() == Some("vertices"))
}

pub fn parse_digraph(text: &str) -> Result<Digraph, TextError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| TextError::new(1, "missing `vertices <n>` header"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let n = match words.as_slice() {
        ["vertices", n] => n
            .parse::<usize>()
            .map_err(|_| TextError::new(hl, format!("invalid vertex count `{n}`")))?,
        _ => return Err(TextError::new(hl, "expected `vertices <n>`")),
    };
    let mut edges = Vec::new();
    for (ln, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        if words.len() != 2 {
            return Err(TextError::new(ln, "expected `<source> <target>`"));
        }
        let mut ends = [0usize; 2];
        for (slot, w) in ends.iter_mut().zip(&words) {
            let v: usize = w.parse().map_err(|_| TextError::new(ln, format!("invalid vertex `{w}`")))?;
            if v == 0 || v > n {
                return Err(TextError::new(ln, format!("vertex {v} out of range 1..={n}")));
            }
            *slot = v - 1;
        }
        edges.push((ends[0], ends[1]));
    }
    Ok(Digraph::new(n, edges).expect("endpoints checked"))
}

pub fn format_digraph(d: &Digraph) -> String {
    let mut out = format!("vertices {}\n", d.vertex_count());
    for e in d.edges() {
        writeln!(out, "{} {}", e.source + 1, e.target + 1).unwrap();
    }
    out
}

/// Parse rows of integers from numbered lines; all rows must have equal length.
pub fn parse_rows<'a, I>(lines: I) -> Result<Vec<Vec<i64>>, TextError>
where
    I: IntoIterator<Item = (usize, &'a str)>,
{
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (ln, line) in lines {
        let row = line
            .split_whitespace()
            .map(|w| w.parse::<i64>().map_err(|_| TextError::new(ln, format!("invalid integer `{w}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(TextError::new(
                    ln,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// A square integer matrix, one row per line.
pub fn parse_matrix(text: &str) -> Result<SquareMatrix, TextError> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    let last = lines.last().map_or(1, |l| l.0);
    let rows = parse_rows(lines)?;
    SquareMatrix::from_rows(&rows).map_err(|e| TextError::new(last, e.to_string()))
}

pub fn format_matrix(m: &SquareMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.size() {
        let row: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// `v1:c1 v2:c2 ...` over `n` vertices; omitted vertices count zero and
/// repeated vertices accumulate.
pub fn parse_multiset(text: &str, n: usize) -> Result<Vec<u64>, TextError> {
    let mut counts = vec![0u64; n];
    for (ln, line) in content_lines(text) {
        for item in line.split_whitespace() {
            let (v, c) = item
                .split_once(':')
                .ok_or_else(|| TextError::new(ln, format!("expected `vertex:count`, found `{item}`")))?;
            let v: usize = v.parse().map_err(|_| TextError::new(ln, format!("invalid vertex `{v}`")))?;
            let c: u64 = c.parse().map_err(|_| TextError::new(ln, format!("invalid count `{c}`")))?;
            if v == 0 || v > n {
                return Err(TextError::new(ln, format!("vertex {v} out of range 1..={n}")));
            }
            counts[v - 1] += c;
        }
    }
    Ok(counts)
}

pub fn format_multiset(counts: &[u64]) -> String {
    let items: Vec<String> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(v, c)| format!("{}:{c}", v + 1))
        .collect();
    items.join(" ")
}

/// One block per line of 1-based edge indices. Returns 0-based blocks; edges
/// not listed are left out and become singletons in the caller.
pub fn parse_partition(text: &str, edge_count: usize) -> Result<Vec<Vec<usize>>, TextError> {
    let mut seen = vec![false; edge_count];
    let mut blocks = Vec::new();
    for (ln, line) in content_lines(text) {
        let mut block = Vec::new();
        for w in line.split_whitespace() {
            let e: usize = w.parse().map_err(|_| TextError::new(ln, format!("invalid edge `{w}`")))?;
            if e == 0 || e > edge_count {
                return Err(TextError::new(ln, format!("edge {e} out of range 1..={edge_count}")));
            }
            if std::mem::replace(&mut seen[e - 1], true) {
                return Err(TextError::new(ln, format!("edge {e} listed twice")));
            }
            block.push(e - 1);
        }
        blocks.push(block);
    }
    Ok(blocks)
}
