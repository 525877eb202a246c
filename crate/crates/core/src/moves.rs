//! Primitive moves on UDAF relator matrices, their inverses, and the
//! row/column addition macros for nonnegative strongly connected matrices.
//!
//! All positions carried by a [`Move`] are 1-based.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::digraph::{Digraph, FiniteWalk};
use crate::matrix::{check_relator_shape, RelatorMatrix, SquareMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeadSide {
    Row,
    Col,
}

impl fmt::Display for DeadSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeadSide::Row => "row",
            DeadSide::Col => "col",
        })
    }
}

/// Content removed by a dead-index deletion: which side was dead and the
/// off-diagonal entries of the other side, in index order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeadRecord {
    pub side: DeadSide,
    pub entries: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Move {
    AddCross(usize),
    RemoveCross(usize),
    /// `row_i += row_j`, pivot `(i, j)`.
    AddRow(usize, usize),
    SubRow(usize, usize),
    /// `col_j += col_i`, pivot `(i, j)`.
    AddCol(usize, usize),
    SubCol(usize, usize),
    /// `perm[v - 1]` is the new position of index `v`.
    Permute(Vec<usize>),
    /// `record` is filled in when the move is applied.
    DeleteDead { pos: usize, record: Option<DeadRecord> },
    InsertDead { pos: usize, side: DeadSide, entries: Vec<i64> },
}

impl Move {
    pub fn delete_dead(pos: usize) -> Move {
        Move::DeleteDead { pos, record: None }
    }

    pub fn identity_permutation(n: usize) -> Move {
        Move::Permute((1..=n).collect())
    }

    pub fn changes_size(&self) -> bool {
        matches!(
            self,
            Move::AddCross(_)
                | Move::RemoveCross(_)
                | Move::DeleteDead { .. }
                | Move::InsertDead { .. }
        )
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::AddCross(p) => write!(f, "addcross {p}"),
            Move::RemoveCross(p) => write!(f, "rmcross {p}"),
            Move::AddRow(i, j) => write!(f, "addrow {i} {j}"),
            Move::SubRow(i, j) => write!(f, "subrow {i} {j}"),
            Move::AddCol(i, j) => write!(f, "addcol {i} {j}"),
            Move::SubCol(i, j) => write!(f, "subcol {i} {j}"),
            Move::Permute(b) => {
                f.write_str("perm")?;
                for x in b {
                    write!(f, " {x}")?;
                }
                Ok(())
            }
            Move::DeleteDead { pos, .. } => write!(f, "deldead {pos}"),
            Move::InsertDead { pos, side, entries } => {
                write!(f, "insdead {pos} {side}")?;
                for e in entries {
                    write!(f, " {e}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct ParseMoveError(pub String);

impl FromStr for Move {
    type Err = ParseMoveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut words = s.split_whitespace();
        let op = words.next().ok_or_else(|| ParseMoveError("empty move".into()))?;
        let rest: Vec<&str> = words.collect();
        let index = |w: &str| -> Result<usize, ParseMoveError> {
            match w.parse::<usize>() {
                Ok(0) | Err(_) => Err(ParseMoveError(format!("expected a positive index, found `{w}`"))),
                Ok(v) => Ok(v),
            }
        };
        let arity = |k: usize| -> Result<(), ParseMoveError> {
            if rest.len() == k {
                Ok(())
            } else {
                Err(ParseMoveError(format!("`{op}` takes {k} argument(s), found {}", rest.len())))
            }
        };
        match op {
            "addcross" | "rmcross" | "deldead" => {
                arity(1)?;
                let p = index(rest[0])?;
                Ok(match op {
                    "addcross" => Move::AddCross(p),
                    "rmcross" => Move::RemoveCross(p),
                    _ => Move::delete_dead(p),
                })
            }
            "addrow" | "subrow" | "addcol" | "subcol" => {
                arity(2)?;
                let (i, j) = (index(rest[0])?, index(rest[1])?);
                Ok(match op {
                    "addrow" => Move::AddRow(i, j),
                    "subrow" => Move::SubRow(i, j),
                    "addcol" => Move::AddCol(i, j),
                    _ => Move::SubCol(i, j),
                })
            }
            "perm" => {
                if rest.is_empty() {
                    return Err(ParseMoveError("`perm` needs at least one index".into()));
                }
                Ok(Move::Permute(rest.iter().map(|w| index(w)).collect::<Result<_, _>>()?))
            }
            "insdead" => {
                if rest.len() < 2 {
                    return Err(ParseMoveError("`insdead` needs a position and a side".into()));
                }
                let pos = index(rest[0])?;
                let side = match rest[1] {
                    "row" => DeadSide::Row,
                    "col" => DeadSide::Col,
                    other => {
                        return Err(ParseMoveError(format!("expected `row` or `col`, found `{other}`")))
                    }
                };
                let entries = rest[2..]
                    .iter()
                    .map(|w| {
                        w.parse::<i64>()
                            .map_err(|_| ParseMoveError(format!("expected an integer, found `{w}`")))
                    })
                    .collect::<Result<_, _>>()?;
                Ok(Move::InsertDead { pos, side, entries })
            }
            other => Err(ParseMoveError(format!("unknown move `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IllegalReason {
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("row and column indices must differ")]
    RepeatedIndex,
    #[error("zero pivot entry at ({row},{col})")]
    ZeroPivot { row: usize, col: usize },
    #[error("shape violated: {0}")]
    ShapeViolated(String),
    #[error("result is not an UDAF relator matrix")]
    ResultNotUdaf,
    #[error("dead pattern absent at index {0}")]
    DeadPatternAbsent(usize),
    #[error("integer overflow")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("illegal move `{mv}`: {reason}")]
pub struct MoveError {
    pub mv: Move,
    pub reason: IllegalReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveOutcome {
    pub result: RelatorMatrix,
    /// The move as applied; a dead-index deletion carries its record.
    pub applied: Move,
}

fn check_index(p: usize, size: usize) -> Result<usize, IllegalReason> {
    if p == 0 || p > size {
        Err(IllegalReason::IndexOutOfRange { index: p, size })
    } else {
        Ok(p - 1)
    }
}

fn check_pair(i: usize, j: usize, size: usize) -> Result<(usize, usize), IllegalReason> {
    let (a, b) = (check_index(i, size)?, check_index(j, size)?);
    if a == b {
        return Err(IllegalReason::RepeatedIndex);
    }
    Ok((a, b))
}

fn is_cross(m: &SquareMatrix, p: usize) -> bool {
    m.get(p, p) == -1 && (0..m.size()).all(|k| k == p || (m.get(p, k) == 0 && m.get(k, p) == 0))
}

fn row_dead(m: &SquareMatrix, p: usize) -> bool {
    m.get(p, p) == -1 && (0..m.size()).all(|k| k == p || m.get(p, k) == 0)
}

fn col_dead(m: &SquareMatrix, p: usize) -> bool {
    m.get(p, p) == -1 && (0..m.size()).all(|k| k == p || m.get(k, p) == 0)
}

fn dead_record(m: &SquareMatrix, p: usize) -> Option<DeadRecord> {
    let others = (0..m.size()).filter(|&k| k != p);
    if row_dead(m, p) {
        Some(DeadRecord { side: DeadSide::Row, entries: others.map(|k| m.get(k, p)).collect() })
    } else if col_dead(m, p) {
        Some(DeadRecord { side: DeadSide::Col, entries: others.map(|k| m.get(p, k)).collect() })
    } else {
        None
    }
}

fn add_row(m: &SquareMatrix, i: usize, j: usize, sign: i64) -> Result<SquareMatrix, IllegalReason> {
    let mut out = m.clone();
    for k in 0..m.size() {
        let v = m.get(j, k).checked_mul(sign).and_then(|x| m.get(i, k).checked_add(x));
        out.set(i, k, v.ok_or(IllegalReason::Overflow)?);
    }
    Ok(out)
}

fn add_col(m: &SquareMatrix, i: usize, j: usize, sign: i64) -> Result<SquareMatrix, IllegalReason> {
    let mut out = m.clone();
    for k in 0..m.size() {
        let v = m.get(k, i).checked_mul(sign).and_then(|x| m.get(k, j).checked_add(x));
        out.set(k, j, v.ok_or(IllegalReason::Overflow)?);
    }
    Ok(out)
}

fn permutation(b: &[usize], size: usize) -> Result<Vec<usize>, IllegalReason> {
    if b.len() != size {
        return Err(IllegalReason::ShapeViolated(format!(
            "permutation has {} entries for size {size}",
            b.len()
        )));
    }
    let mut seen = vec![false; size];
    let mut out = Vec::with_capacity(size);
    for &x in b {
        let k = check_index(x, size)?;
        if seen[k] {
            return Err(IllegalReason::ShapeViolated(format!("permutation repeats {x}")));
        }
        seen[k] = true;
        out.push(k);
    }
    Ok(out)
}

fn transform(m: &SquareMatrix, mv: &Move) -> Result<(SquareMatrix, Move), IllegalReason> {
    let n = m.size();
    let out = match mv {
        Move::AddCross(p) => {
            if *p == 0 || *p > n + 1 {
                return Err(IllegalReason::IndexOutOfRange { index: *p, size: n + 1 });
            }
            let mut r = m.insert_index(p - 1);
            r.set(p - 1, p - 1, -1);
            r
        }
        Move::RemoveCross(p) => {
            let k = check_index(*p, n)?;
            if !is_cross(m, k) {
                return Err(IllegalReason::ShapeViolated(format!(
                    "row and column {p} are not a cross"
                )));
            }
            m.remove_index(k)
        }
        Move::AddRow(i, j) => {
            let (a, b) = check_pair(*i, *j, n)?;
            if m.get(a, b) == 0 {
                return Err(IllegalReason::ZeroPivot { row: *i, col: *j });
            }
            add_row(m, a, b, 1)?
        }
        Move::SubRow(i, j) => {
            let (a, b) = check_pair(*i, *j, n)?;
            let r = add_row(m, a, b, -1)?;
            if r.get(a, b) == 0 {
                return Err(IllegalReason::ZeroPivot { row: *i, col: *j });
            }
            r
        }
        Move::AddCol(i, j) => {
            let (a, b) = check_pair(*i, *j, n)?;
            if m.get(a, b) == 0 {
                return Err(IllegalReason::ZeroPivot { row: *i, col: *j });
            }
            add_col(m, a, b, 1)?
        }
        Move::SubCol(i, j) => {
            let (a, b) = check_pair(*i, *j, n)?;
            let r = add_col(m, a, b, -1)?;
            if r.get(a, b) == 0 {
                return Err(IllegalReason::ZeroPivot { row: *i, col: *j });
            }
            r
        }
        Move::Permute(b) => m.permuted(&permutation(b, n)?),
        Move::DeleteDead { pos, record } => {
            let k = check_index(*pos, n)?;
            let found = dead_record(m, k).ok_or(IllegalReason::DeadPatternAbsent(*pos))?;
            if let Some(rec) = record {
                let matches = match rec.side {
                    DeadSide::Row => row_dead(m, k),
                    DeadSide::Col => col_dead(m, k),
                };
                let others = (0..n).filter(|&x| x != k);
                let entries: Vec<i64> = match rec.side {
                    DeadSide::Row => others.map(|x| m.get(x, k)).collect(),
                    DeadSide::Col => others.map(|x| m.get(k, x)).collect(),
                };
                if !matches || entries != rec.entries {
                    return Err(IllegalReason::DeadPatternAbsent(*pos));
                }
            }
            let applied = Move::DeleteDead { pos: *pos, record: Some(record.clone().unwrap_or(found)) };
            return Ok((m.remove_index(k), applied));
        }
        Move::InsertDead { pos, side, entries } => {
            if *pos == 0 || *pos > n + 1 {
                return Err(IllegalReason::IndexOutOfRange { index: *pos, size: n + 1 });
            }
            if entries.len() != n {
                return Err(IllegalReason::ShapeViolated(format!(
                    "expected {n} entries, found {}",
                    entries.len()
                )));
            }
            if entries.iter().any(|&e| e < 0) {
                return Err(IllegalReason::ShapeViolated("entries must be nonnegative".into()));
            }
            let k = pos - 1;
            let mut r = m.insert_index(k);
            r.set(k, k, -1);
            for (x, &e) in (0..=n).filter(|&x| x != k).zip(entries) {
                match side {
                    DeadSide::Row => r.set(x, k, e),
                    DeadSide::Col => r.set(k, x, e),
                }
            }
            r
        }
    };
    Ok((out, mv.clone()))
}

/// Apply one move. Every result is checked to be an UDAF relator matrix.
pub fn apply_move(m: &RelatorMatrix, mv: &Move) -> Result<MoveOutcome, MoveError> {
    let err = |reason| MoveError { mv: mv.clone(), reason };
    let (result, applied) = transform(m.matrix(), mv).map_err(err)?;
    check_relator_shape(&result).map_err(|e| err(IllegalReason::ShapeViolated(e.to_string())))?;
    let result = RelatorMatrix::new(result).expect("shape checked");
    if !result.is_udaf() {
        return Err(err(IllegalReason::ResultNotUdaf));
    }
    Ok(MoveOutcome { result, applied })
}

/// Apply moves in order, returning the final matrix and the applied moves.
pub fn apply_moves(m: &RelatorMatrix, moves: &[Move]) -> Result<(RelatorMatrix, Vec<Move>), (usize, MoveError)> {
    let mut cur = m.clone();
    let mut applied = Vec::with_capacity(moves.len());
    for (k, mv) in moves.iter().enumerate() {
        let out = apply_move(&cur, mv).map_err(|e| (k, e))?;
        cur = out.result;
        applied.push(out.applied);
    }
    Ok((cur, applied))
}

/// The move undoing `mv`, which was legally applied to `context`.
pub fn invert_move(mv: &Move, context: &RelatorMatrix) -> Move {
    match mv {
        Move::AddCross(p) => Move::RemoveCross(*p),
        Move::RemoveCross(p) => Move::AddCross(*p),
        Move::AddRow(i, j) => Move::SubRow(*i, *j),
        Move::SubRow(i, j) => Move::AddRow(*i, *j),
        Move::AddCol(i, j) => Move::SubCol(*i, *j),
        Move::SubCol(i, j) => Move::AddCol(*i, *j),
        Move::Permute(b) => {
            let mut inv = vec![0; b.len()];
            for (v, &w) in b.iter().enumerate() {
                inv[w - 1] = v + 1;
            }
            Move::Permute(inv)
        }
        Move::DeleteDead { pos, record } => {
            let rec = record
                .clone()
                .or_else(|| dead_record(context.matrix(), pos - 1))
                .expect("deletion was legal in context");
            Move::InsertDead { pos: *pos, side: rec.side, entries: rec.entries }
        }
        Move::InsertDead { pos, side, entries } => Move::DeleteDead {
            pos: *pos,
            record: Some(DeadRecord { side: *side, entries: entries.clone() }),
        },
    }
}

/// Invert a whole legal sequence applied from `start`: the inverses in
/// reverse order.
pub fn invert_moves(start: &RelatorMatrix, moves: &[Move]) -> Result<Vec<Move>, (usize, MoveError)> {
    let mut contexts = Vec::with_capacity(moves.len());
    let mut cur = start.clone();
    for (k, mv) in moves.iter().enumerate() {
        let out = apply_move(&cur, mv).map_err(|e| (k, e))?;
        contexts.push((cur, out.applied));
        cur = out.result;
    }
    Ok(contexts.iter().rev().map(|(ctx, mv)| invert_move(mv, ctx)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MacroError {
    #[error("matrix has negative entries")]
    NegativeEntries,
    #[error("path is not a walk in the digraph of the matrix")]
    InvalidPath,
    #[error("path visits a vertex twice")]
    PathNotInjective,
    #[error("path must run from vertex {expected_start} to vertex {expected_end}")]
    PathEndpoints { expected_start: usize, expected_end: usize },
    #[error("target and source coincide")]
    SameIndex,
    #[error("no path from vertex {from} to vertex {to}")]
    NoPath { from: usize, to: usize },
}

/// Vertex sequence of `path`, checked against the digraph of `m`.
fn path_vertices(
    m: &RelatorMatrix,
    path: &FiniteWalk,
    start: usize,
    end: usize,
) -> Result<Vec<usize>, MacroError> {
    if m.has_negative_entries() {
        return Err(MacroError::NegativeEntries);
    }
    if start == end {
        return Err(MacroError::SameIndex);
    }
    let d = Digraph::from_relator(m);
    let walk = d.walk(path.start(), path.edges().to_vec()).map_err(|_| MacroError::InvalidPath)?;
    if walk.start() != start || walk.end() != end {
        return Err(MacroError::PathEndpoints { expected_start: start, expected_end: end });
    }
    let verts = walk.vertices(&d);
    let mut seen = vec![false; m.size()];
    for &v in &verts {
        if std::mem::replace(&mut seen[v], true) {
            return Err(MacroError::PathNotInjective);
        }
    }
    Ok(verts)
}

/// Row macro on vertex path `q[0] -> ... -> q[n]` (0-based): forward adds
/// down the path then subtractions restoring every row but `q[0]`, which
/// ends up increased by `row q[1] + ... + row q[n]`.
fn cascade(q: &[usize]) -> Vec<Move> {
    let n = q.len() - 1;
    let mut out = Vec::new();
    for k in (0..n).rev() {
        out.push(Move::AddRow(q[k] + 1, q[k + 1] + 1));
    }
    for k in 1..n {
        out.push(Move::SubRow(q[k] + 1, q[k + 1] + 1));
    }
    out
}

fn invert_row_moves(moves: &[Move]) -> Vec<Move> {
    moves
        .iter()
        .rev()
        .map(|mv| match mv {
            Move::AddRow(i, j) => Move::SubRow(*i, *j),
            Move::SubRow(i, j) => Move::AddRow(*i, *j),
            _ => unreachable!(),
        })
        .collect()
}

fn row_macro_from_vertices(q: &[usize]) -> Vec<Move> {
    let mut out = cascade(q);
    if q.len() > 2 {
        out.extend(invert_row_moves(&cascade(&q[..q.len() - 1])));
    }
    out
}

/// Primitive moves with net effect `row_target += row_source` (0-based
/// indices) on a nonnegative strongly connected UDAF relator matrix.
/// `path` is an injective walk from `target` to `source`: each edge
/// `a -> b` supplies the nonzero pivot `(a, b)` for adding row `b` to row `a`.
pub fn expand_row_macro(
    m: &RelatorMatrix,
    target: usize,
    source: usize,
    path: &FiniteWalk,
) -> Result<Vec<Move>, MacroError> {
    let q = path_vertices(m, path, target, source)?;
    Ok(row_macro_from_vertices(&q))
}

/// Primitive moves with net effect `col_target += col_source` (0-based).
/// `path` is an injective walk from `source` to `target`.
pub fn expand_col_macro(
    m: &RelatorMatrix,
    target: usize,
    source: usize,
    path: &FiniteWalk,
) -> Result<Vec<Move>, MacroError> {
    let mut q = path_vertices(m, path, source, target)?;
    q.reverse();
    Ok(row_macro_from_vertices(&q)
        .into_iter()
        .map(|mv| match mv {
            Move::AddRow(a, b) => Move::AddCol(b, a),
            Move::SubRow(a, b) => Move::SubCol(b, a),
            _ => unreachable!(),
        })
        .collect())
}

/// A shortest walk from `from` to `to` in the digraph of `m`, if any.
pub fn shortest_path(m: &RelatorMatrix, from: usize, to: usize) -> Result<FiniteWalk, MacroError> {
    let d = Digraph::from_relator(m);
    let n = d.vertex_count();
    let mut via: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for e in d.out_edges(v) {
            let w = d.edge(e).target;
            if !seen[w] {
                seen[w] = true;
                via[w] = Some(e);
                queue.push_back(w);
            }
        }
    }
    if !seen[to] {
        return Err(MacroError::NoPath { from, to });
    }
    let mut edges = Vec::new();
    let mut at = to;
    while at != from {
        let e = via[at].expect("reached vertices have a parent edge");
        edges.push(e);
        at = d.edge(e).source;
    }
    edges.reverse();
    Ok(d.walk(from, edges).expect("parent edges form a walk"))
}

/// [`expand_row_macro`] along a shortest path.
pub fn row_macro(m: &RelatorMatrix, target: usize, source: usize) -> Result<Vec<Move>, MacroError> {
    let path = shortest_path(m, target, source)?;
    expand_row_macro(m, target, source, &path)
}

/// [`expand_col_macro`] along a shortest path.
pub fn col_macro(m: &RelatorMatrix, target: usize, source: usize) -> Result<Vec<Move>, MacroError> {
    let path = shortest_path(m, source, target)?;
    expand_col_macro(m, target, source, &path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(rows: &[&[i64]]) -> RelatorMatrix {
        RelatorMatrix::from_rows(rows).unwrap()
    }

    fn apply(m: &RelatorMatrix, mv: Move) -> Result<RelatorMatrix, IllegalReason> {
        apply_move(m, &mv).map(|o| o.result).map_err(|e| e.reason)
    }

    #[test]
    fn add_cross_on_rose() {
        assert_eq!(apply(&rel(&[&[1]]), Move::AddCross(2)).unwrap(), rel(&[&[1, 0], &[0, -1]]));
        assert_eq!(apply(&rel(&[&[1]]), Move::AddCross(1)).unwrap(), rel(&[&[-1, 0], &[0, 1]]));
        assert!(matches!(
            apply(&rel(&[&[1]]), Move::AddCross(3)),
            Err(IllegalReason::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn golden_mean_steps() {
        let g = rel(&[&[0, 1], &[1, -1]]);
        let a = apply(&g, Move::AddRow(1, 2)).unwrap();
        assert_eq!(a, rel(&[&[1, 0], &[1, -1]]));
        let b = apply(&a, Move::AddCol(2, 1)).unwrap();
        assert_eq!(b, rel(&[&[1, 0], &[0, -1]]));
        assert_eq!(apply(&b, Move::RemoveCross(2)).unwrap(), rel(&[&[1]]));
        assert_eq!(apply(&a, Move::delete_dead(2)).unwrap(), rel(&[&[1]]));
    }

    #[test]
    fn add_row_into_the_other_index() {
        let g = rel(&[&[0, 1], &[1, -1]]);
        assert_eq!(apply(&g, Move::AddRow(2, 1)).unwrap(), rel(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn zero_pivots_rejected() {
        let a = rel(&[&[1, 0], &[1, -1]]);
        assert_eq!(apply(&a, Move::AddRow(1, 2)), Err(IllegalReason::ZeroPivot { row: 1, col: 2 }));
        // row 2 minus row 1 leaves (2,1) = 0
        assert_eq!(apply(&a, Move::SubRow(2, 1)), Err(IllegalReason::ZeroPivot { row: 2, col: 1 }));
        assert_eq!(apply(&a, Move::AddRow(1, 1)), Err(IllegalReason::RepeatedIndex));
    }

    #[test]
    fn non_udaf_results_rejected() {
        assert_eq!(apply(&rel(&[&[0]]), Move::AddCross(2)), Err(IllegalReason::ResultNotUdaf));
        let g = rel(&[&[0, 1], &[1, -1]]);
        assert!(matches!(
            apply(&g, Move::InsertDead { pos: 1, side: DeadSide::Row, entries: vec![-1, 0] }),
            Err(IllegalReason::ShapeViolated(_))
        ));
    }

    #[test]
    fn dead_deletion_and_inverse() {
        let a = rel(&[&[1, 0], &[1, -1]]);
        let out = apply_move(&a, &Move::delete_dead(2)).unwrap();
        let inv = invert_move(&out.applied, &a);
        assert_eq!(inv, Move::InsertDead { pos: 2, side: DeadSide::Col, entries: vec![1] });
        assert_eq!(apply(&out.result, inv).unwrap(), a);
        assert_eq!(apply(&a, Move::delete_dead(1)), Err(IllegalReason::DeadPatternAbsent(1)));
    }

    #[test]
    fn remove_cross_needs_cross() {
        let a = rel(&[&[1, 0], &[1, -1]]);
        assert!(matches!(apply(&a, Move::RemoveCross(2)), Err(IllegalReason::ShapeViolated(_))));
    }

    #[test]
    fn permute_semantics() {
        let m = rel(&[&[0, 2, 0], &[0, 0, 1], &[1, 0, 1]]);
        let p = apply(&m, Move::Permute(vec![2, 3, 1])).unwrap();
        assert_eq!(p.get(1, 2), 2);
        assert_eq!(p.get(2, 0), 1);
        assert_eq!(p.get(0, 1), 1);
        assert_eq!(p.get(0, 0), 1);
        assert_eq!(apply(&m, Move::identity_permutation(3)).unwrap(), m);
        let inv = invert_move(&Move::Permute(vec![2, 3, 1]), &m);
        assert_eq!(apply(&p, inv).unwrap(), m);
        assert!(apply(&m, Move::Permute(vec![1, 1, 2])).is_err());
    }

    #[test]
    fn move_text_round_trip() {
        for text in [
            "addcross 2",
            "rmcross 1",
            "addrow 1 2",
            "subrow 3 1",
            "addcol 2 1",
            "subcol 1 4",
            "perm 2 3 1",
            "deldead 4",
            "insdead 2 col 1 0 3",
            "insdead 1 row",
        ] {
            assert_eq!(text.parse::<Move>().unwrap().to_string(), text);
        }
        for bad in ["addrow 1", "addrow 0 1", "frob 1", "insdead 1 up 2", "perm"] {
            assert!(bad.parse::<Move>().is_err(), "{bad}");
        }
    }

    fn direct_row_add(m: &RelatorMatrix, target: usize, source: usize) -> RelatorMatrix {
        let mut out = m.matrix().clone();
        for k in 0..m.size() {
            out.set(target, k, m.get(target, k) + m.get(source, k));
        }
        RelatorMatrix::new(out).unwrap()
    }

    fn direct_col_add(m: &RelatorMatrix, target: usize, source: usize) -> RelatorMatrix {
        let mut out = m.matrix().clone();
        for k in 0..m.size() {
            out.set(k, target, m.get(k, target) + m.get(k, source));
        }
        RelatorMatrix::new(out).unwrap()
    }

    #[test]
    fn row_macro_single_edge() {
        let m = rel(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        // (3,1) is nonzero: one primitive move.
        let moves = row_macro(&m, 2, 0).unwrap();
        assert_eq!(moves, vec![Move::AddRow(3, 1)]);
    }

    #[test]
    fn row_macro_two_step_path() {
        let m = rel(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let d = Digraph::from_relator(&m);
        let e01 = d.edges().iter().position(|e| e.source == 0 && e.target == 1).unwrap();
        let e12 = d.edges().iter().position(|e| e.source == 1 && e.target == 2).unwrap();
        let path = d.walk(0, vec![e01, e12]).unwrap();
        let moves = expand_row_macro(&m, 0, 2, &path).unwrap();
        assert_eq!(
            moves,
            vec![Move::AddRow(2, 3), Move::AddRow(1, 2), Move::SubRow(2, 3), Move::SubRow(1, 2)]
        );
        let (end, _) = apply_moves(&m, &moves).unwrap();
        assert_eq!(end, direct_row_add(&m, 0, 2));
    }

    #[test]
    fn col_macro_two_step_path() {
        let m = rel(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        // col_1 += col_2 needs a path 2 -> 3 -> 1.
        let moves = col_macro(&m, 0, 1).unwrap();
        assert_eq!(moves.len(), 4);
        let (end, _) = apply_moves(&m, &moves).unwrap();
        assert_eq!(end, direct_col_add(&m, 0, 1));
    }

    #[test]
    fn macro_errors() {
        let m = rel(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let d = Digraph::from_relator(&m);
        let path = d.walk(0, vec![]).unwrap();
        assert_eq!(expand_row_macro(&m, 0, 0, &path), Err(MacroError::SameIndex));
        assert!(matches!(
            expand_row_macro(&m, 0, 2, &path),
            Err(MacroError::PathEndpoints { .. })
        ));
        let g = rel(&[&[0, 1], &[1, -1]]);
        assert_eq!(row_macro(&g, 0, 1), Err(MacroError::NegativeEntries));
        // a walk that returns to its start
        let loop_edges: Vec<usize> = [(0, 1), (1, 2), (2, 0)]
            .iter()
            .map(|&(s, t)| d.edges().iter().position(|e| e.source == s && e.target == t).unwrap())
            .collect();
        let w = d.walk(0, loop_edges.clone()).unwrap();
        assert_eq!(expand_row_macro(&m, 0, 0, &w), Err(MacroError::SameIndex));
        let mut twice = loop_edges.clone();
        twice.push(loop_edges[0]);
        let w = d.walk(0, twice).unwrap();
        assert_eq!(expand_row_macro(&m, 0, 1, &w), Err(MacroError::PathNotInjective));
    }

    #[test]
    fn long_macros_on_a_cycle() {
        // A five-cycle with a loop at every vertex: paths are forced.
        let n = 5;
        let mut a = SquareMatrix::zeros(n);
        for v in 0..n {
            a.set(v, (v + 1) % n, 1);
        }
        let m = RelatorMatrix::new(a).unwrap();
        for t in 0..n {
            for s in 0..n {
                if t == s {
                    continue;
                }
                let moves = row_macro(&m, t, s).unwrap();
                let (end, _) = apply_moves(&m, &moves).unwrap();
                assert_eq!(end, direct_row_add(&m, t, s));
                let moves = col_macro(&m, t, s).unwrap();
                let (end, _) = apply_moves(&m, &moves).unwrap();
                assert_eq!(end, direct_col_add(&m, t, s));
            }
        }
    }
}
