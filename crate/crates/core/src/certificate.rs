//! Replayable move scripts certifying strong UDAF equivalence.

use std::fmt::Write as _;

use num_bigint::BigInt;
use thiserror::Error;

use crate::matrix::RelatorMatrix;
use crate::moves::{apply_move, invert_move, Move, MoveError};
use crate::text::{content_lines, format_matrix, parse_rows, TextError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveScript {
    pub initial: RelatorMatrix,
    pub moves: Vec<Move>,
    pub claimed_final: RelatorMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureReason {
    Illegal(MoveError),
    FinalMismatch { reached: RelatorMatrix },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerificationStatus {
    Verified,
    /// `step` is the 1-based index of the offending move, or the number of
    /// moves when only the final comparison fails.
    Failed { step: usize, reason: FailureReason },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub status: VerificationStatus,
    /// Matrices reached, starting with the initial matrix.
    pub intermediates: Vec<RelatorMatrix>,
    /// `(-1)^size * det` of each intermediate.
    pub invariant_trace: Vec<BigInt>,
    /// Moves as applied, dead-index deletions with their records.
    pub applied: Vec<Move>,
}

impl VerificationReport {
    pub fn is_verified(&self) -> bool {
        self.status == VerificationStatus::Verified
    }
}

pub fn verify_script(s: &MoveScript) -> VerificationReport {
    let mut cur = s.initial.clone();
    let mut intermediates = vec![cur.clone()];
    let mut invariant_trace = vec![cur.signed_determinant()];
    let mut applied = Vec::with_capacity(s.moves.len());
    for (k, mv) in s.moves.iter().enumerate() {
        match apply_move(&cur, mv) {
            Ok(out) => {
                cur = out.result;
                applied.push(out.applied);
                invariant_trace.push(cur.signed_determinant());
                intermediates.push(cur.clone());
            }
            Err(e) => {
                return VerificationReport {
                    status: VerificationStatus::Failed { step: k + 1, reason: FailureReason::Illegal(e) },
                    intermediates,
                    invariant_trace,
                    applied,
                }
            }
        }
    }
    let status = if cur == s.claimed_final {
        VerificationStatus::Verified
    } else {
        VerificationStatus::Failed {
            step: s.moves.len(),
            reason: FailureReason::FinalMismatch { reached: cur },
        }
    };
    VerificationReport { status, intermediates, invariant_trace, applied }
}

impl MoveScript {
    /// The script run backwards, from `claimed_final` to `initial`.
    /// `None` if this script does not verify.
    pub fn reversed(&self) -> Option<MoveScript> {
        let report = verify_script(self);
        if !report.is_verified() {
            return None;
        }
        let moves = report
            .applied
            .iter()
            .zip(&report.intermediates)
            .rev()
            .map(|(mv, ctx)| invert_move(mv, ctx))
            .collect();
        Some(MoveScript {
            initial: self.claimed_final.clone(),
            moves,
            claimed_final: self.initial.clone(),
        })
    }

    /// `self` followed by `next`; `None` unless the endpoints match.
    pub fn concat(&self, next: &MoveScript) -> Option<MoveScript> {
        if self.claimed_final != next.initial {
            return None;
        }
        let mut moves = self.moves.clone();
        moves.extend(next.moves.iter().cloned());
        Some(MoveScript { initial: self.initial.clone(), moves, claimed_final: next.claimed_final.clone() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("syntax error at line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("dimension error at line {line}: {message}")]
    Dimension { line: usize, message: String },
}

fn syntax(line: usize, message: impl Into<String>) -> ScriptError {
    ScriptError::Syntax { line, message: message.into() }
}

fn dimension(line: usize, message: impl Into<String>) -> ScriptError {
    ScriptError::Dimension { line, message: message.into() }
}

fn relator_block(lines: &[(usize, &str)], header_line: usize) -> Result<RelatorMatrix, ScriptError> {
    let rows = parse_rows(lines.iter().copied()).map_err(|TextError { line, message }| {
        if message.starts_with("row has") {
            dimension(line, message)
        } else {
            syntax(line, message)
        }
    })?;
    let at = lines.last().map_or(header_line, |l| l.0);
    RelatorMatrix::from_rows(&rows).map_err(|e| dimension(at, e.to_string()))
}

/// Largest 1-based index mentioned by a move, and the size change it causes.
fn move_extent(mv: &Move) -> (usize, isize) {
    match mv {
        Move::AddCross(p) => (p.saturating_sub(1), 1),
        Move::RemoveCross(p) | Move::DeleteDead { pos: p, .. } => (*p, -1),
        Move::AddRow(i, j) | Move::SubRow(i, j) | Move::AddCol(i, j) | Move::SubCol(i, j) => (*i.max(j), 0),
        Move::Permute(b) => (b.iter().copied().max().unwrap_or(0).max(b.len()), 0),
        Move::InsertDead { pos, .. } => (pos.saturating_sub(1), 1),
    }
}

pub fn parse_script(text: &str) -> Result<MoveScript, ScriptError> {
    #[derive(PartialEq)]
    enum Section {
        Preamble,
        Matrix,
        Moves,
        Target,
    }
    let mut section = Section::Preamble;
    let mut header_lines = [0usize; 3];
    let mut matrix_lines = Vec::new();
    let mut move_lines = Vec::new();
    let mut target_lines = Vec::new();
    for (ln, line) in content_lines(text) {
        let next = match line {
            "matrix" => Some((Section::Preamble, Section::Matrix, 0)),
            "moves" => Some((Section::Matrix, Section::Moves, 1)),
            "target" => Some((Section::Moves, Section::Target, 2)),
            _ => None,
        };
        if let Some((expected, to, slot)) = next {
            if section != expected {
                return Err(syntax(ln, format!("unexpected section header `{line}`")));
            }
            section = to;
            header_lines[slot] = ln;
            continue;
        }
        match section {
            Section::Preamble => return Err(syntax(ln, "expected `matrix`")),
            Section::Matrix => matrix_lines.push((ln, line)),
            Section::Moves => move_lines.push((ln, line)),
            Section::Target => target_lines.push((ln, line)),
        }
    }
    if section != Section::Target {
        let last = text.lines().count().max(1);
        return Err(syntax(last, "script needs `matrix`, `moves` and `target` sections"));
    }
    let initial = relator_block(&matrix_lines, header_lines[0])?;
    let claimed_final = relator_block(&target_lines, header_lines[2])?;
    let mut moves = Vec::with_capacity(move_lines.len());
    let mut size = initial.size() as isize;
    for (ln, line) in move_lines {
        let mv: Move = line.parse().map_err(|e: crate::moves::ParseMoveError| syntax(ln, e.0))?;
        let (extent, delta) = move_extent(&mv);
        if extent as isize > size {
            return Err(dimension(ln, format!("index {extent} exceeds matrix size {size}")));
        }
        if let Move::Permute(b) = &mv {
            if b.len() as isize != size {
                return Err(dimension(ln, format!("permutation of length {} for size {size}", b.len())));
            }
        }
        if let Move::InsertDead { entries, .. } = &mv {
            if entries.len() as isize != size {
                return Err(dimension(ln, format!("{} entries for size {size}", entries.len())));
            }
        }
        size += delta;
        moves.push(mv);
    }
    if size != claimed_final.size() as isize {
        return Err(dimension(
            header_lines[2],
            format!("moves end at size {size} but the target has size {}", claimed_final.size()),
        ));
    }
    Ok(MoveScript { initial, moves, claimed_final })
}

pub fn serialize_script(s: &MoveScript) -> String {
    let mut out = String::from("matrix\n");
    out.push_str(&format_matrix(s.initial.matrix()));
    out.push_str("moves\n");
    for mv in &s.moves {
        writeln!(out, "{mv}").unwrap();
    }
    out.push_str("target\n");
    out.push_str(&format_matrix(s.claimed_final.matrix()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: &str = "# golden mean to R_2\nmatrix\n0 1\n1 -1\nmoves\naddrow 1 2\naddcol 2 1\nrmcross 2\ntarget\n1\n";

    #[test]
    fn golden_script_verifies() {
        let s = parse_script(GOLDEN).unwrap();
        let r = verify_script(&s);
        assert!(r.is_verified());
        assert_eq!(r.intermediates.len(), 4);
        assert_eq!(r.intermediates[1], RelatorMatrix::from_rows(&[[1, 0], [1, -1]]).unwrap());
        assert_eq!(r.intermediates[2], RelatorMatrix::from_rows(&[[1, 0], [0, -1]]).unwrap());
        assert!(r.invariant_trace.iter().all(|d| *d == BigInt::from(-1)));
    }

    #[test]
    fn reordered_golden_script() {
        // the (2,1) pivot is already nonzero, so this order is legal too
        let mut s = parse_script(GOLDEN).unwrap();
        s.moves.swap(0, 1);
        let r = verify_script(&s);
        assert!(r.is_verified());
        assert_eq!(r.intermediates[1], RelatorMatrix::from_rows(&[[1, 1], [0, -1]]).unwrap());
    }

    #[test]
    fn zero_pivot_pinpointed() {
        let mut s = parse_script(GOLDEN).unwrap();
        s.moves[1] = Move::AddRow(1, 2);
        let r = verify_script(&s);
        match r.status {
            VerificationStatus::Failed { step: 2, reason: FailureReason::Illegal(e) } => {
                assert_eq!(e.reason, crate::moves::IllegalReason::ZeroPivot { row: 1, col: 2 })
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(r.intermediates.len(), 2);
        assert_eq!(r.invariant_trace.len(), 2);
    }

    #[test]
    fn empty_script() {
        let m = RelatorMatrix::from_rows(&[[1]]).unwrap();
        let s = MoveScript { initial: m.clone(), moves: vec![], claimed_final: m };
        assert!(verify_script(&s).is_verified());
    }

    #[test]
    fn final_mismatch_is_reported() {
        let mut s = parse_script(GOLDEN).unwrap();
        s.claimed_final = RelatorMatrix::from_rows(&[[2]]).unwrap();
        let r = verify_script(&s);
        assert!(matches!(r.status, VerificationStatus::Failed { step: 3, reason: FailureReason::FinalMismatch { .. } }));
    }

    #[test]
    fn round_trip_text() {
        let s = parse_script(GOLDEN).unwrap();
        let text = serialize_script(&s);
        assert_eq!(parse_script(&text).unwrap(), s);
        let stripped: Vec<&str> = content_lines(GOLDEN).map(|l| l.1).collect();
        let out: Vec<&str> = content_lines(&text).map(|l| l.1).collect();
        assert_eq!(stripped, out);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let bad = GOLDEN.replace("addcol 2 1", "addrow 1");
        assert!(matches!(parse_script(&bad), Err(ScriptError::Syntax { line: 7, .. })));
        let ragged = GOLDEN.replace("1 -1\n", "1\n");
        assert!(matches!(parse_script(&ragged), Err(ScriptError::Dimension { .. })));
        let out_of_range = GOLDEN.replace("addcol 2 1", "addcol 3 1");
        assert!(matches!(parse_script(&out_of_range), Err(ScriptError::Dimension { line: 7, .. })));
        let wrong_target = GOLDEN.replace("target\n1\n", "target\n1 0\n0 1\n");
        assert!(matches!(parse_script(&wrong_target), Err(ScriptError::Dimension { .. })));
        assert!(matches!(parse_script("moves\n"), Err(ScriptError::Syntax { line: 1, .. })));
    }

    #[test]
    fn reversal_and_concatenation() {
        let s = parse_script(GOLDEN).unwrap();
        let back = s.reversed().unwrap();
        assert_eq!(back.moves, vec![Move::AddCross(2), Move::SubCol(2, 1), Move::SubRow(1, 2)]);
        assert!(verify_script(&back).is_verified());
        let there_and_back = s.concat(&back).unwrap();
        assert!(verify_script(&there_and_back).is_verified());
        assert!(s.concat(&s).is_none());
    }
}
