//! Square integer matrices and the two matrix views of a digraph.
//!
//! Indices are 0-based here. Text formats and move scripts use 1-based
//! positions and convert at the boundary.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix rows have unequal lengths (row {row} has {found} entries, expected {expected})")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("off-diagonal entry ({row},{col}) = {value} is negative")]
    NegativeOffDiagonal { row: usize, col: usize, value: i64 },
    #[error("diagonal entry ({index},{index}) = {value} is below -1")]
    DiagonalBelowMinusOne { index: usize, value: i64 },
    #[error("adjacency entry ({row},{col}) = {value} is negative")]
    NegativeAdjacency { row: usize, col: usize, value: i64 },
}

/// Dense square matrix of `i64`, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<i64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                if r == 0 || rows[0].as_ref().len() == row.len() {
                    return Err(MatrixError::NotSquare { rows: n, cols: row.len() });
                }
                return Err(MatrixError::Ragged {
                    row: r,
                    expected: rows[0].as_ref().len(),
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[i64] {
        &self.data
    }

    pub fn max_abs_entry(&self) -> u64 {
        self.data.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Entrywise sum, or `None` if any entry overflows.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()?;
        Some(SquareMatrix { n: self.n, data })
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()?;
        Some(SquareMatrix { n: self.n, data })
    }

    /// Conjugation by a permutation: entry `(v, w)` of `self` becomes entry
    /// `(perm[v], perm[w])` of the result.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut out = Self::zeros(self.n);
        for v in 0..self.n {
            for w in 0..self.n {
                out.set(perm[v], perm[w], self.get(v, w));
            }
        }
        out
    }

    /// Insert a new row and column at `pos`, filled with zeros.
    pub fn insert_index(&self, pos: usize) -> Self {
        assert!(pos <= self.n);
        let n = self.n + 1;
        let mut out = Self::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                let ii = if i >= pos { i + 1 } else { i };
                let jj = if j >= pos { j + 1 } else { j };
                out.set(ii, jj, self.get(i, j));
            }
        }
        out
    }

    /// Delete row `pos` and column `pos`.
    pub fn remove_index(&self, pos: usize) -> Self {
        assert!(pos < self.n);
        let n = self.n - 1;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let ii = if i >= pos { i + 1 } else { i };
                let jj = if j >= pos { j + 1 } else { j };
                out.set(i, j, self.get(ii, jj));
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// `(-1)^n * det`, the quantity preserved by every strong-equivalence move.
    pub fn signed_determinant(&self) -> BigInt {
        let d = self.determinant();
        if self.n % 2 == 1 {
            -d
        } else {
            d
        }
    }

    /// Lexicographically least (row-major) matrix among all simultaneous
    /// row/column permutations, together with a permutation that realizes it:
    /// `self.permuted(&perm) == canonical`.
    pub fn canonical_form_with_perm(&self) -> (SquareMatrix, Vec<usize>) {
        let n = self.n;
        if n <= 1 {
            return (self.clone(), (0..n).collect());
        }
        // Row 0 of the result is (diagonal of the chosen first vertex, its
        // other entries sorted ascending). Keep only first vertices for which
        // that row is least.
        let first_row = |v: usize| -> Vec<i64> {
            let mut rest: Vec<i64> = (0..n).filter(|&w| w != v).map(|w| self.get(v, w)).collect();
            rest.sort_unstable();
            let mut r = vec![self.get(v, v)];
            r.extend(rest);
            r
        };
        let rows0: Vec<Vec<i64>> = (0..n).map(first_row).collect();
        let best_row0 = rows0.iter().min().unwrap().clone();

        let mut search = CanonSearch {
            m: self,
            order: Vec::with_capacity(n),
            used: vec![false; n],
            best: None,
        };
        for v in 0..n {
            if rows0[v] == best_row0 {
                search.order.push(v);
                search.used[v] = true;
                search.extend();
                search.used[v] = false;
                search.order.pop();
            }
        }
        let (canon, order) = search.best.unwrap();
        // order[k] = original vertex placed at position k; perm maps original -> position.
        let mut perm = vec![0; n];
        for (pos, &v) in order.iter().enumerate() {
            perm[v] = pos;
        }
        (canon, perm)
    }

    pub fn canonical_form(&self) -> SquareMatrix {
        self.canonical_form_with_perm().0
    }
}

struct CanonSearch<'a> {
    m: &'a SquareMatrix,
    order: Vec<usize>,
    used: Vec<bool>,
    best: Option<(SquareMatrix, Vec<usize>)>,
}

impl CanonSearch<'_> {
    fn extend(&mut self) {
        let n = self.m.n;
        let k = self.order.len();
        if k == n {
            let mut cand = SquareMatrix::zeros(n);
            for (i, &vi) in self.order.iter().enumerate() {
                for (j, &vj) in self.order.iter().enumerate() {
                    cand.set(i, j, self.m.get(vi, vj));
                }
            }
            let better = match &self.best {
                None => true,
                Some((b, _)) => cand.data < b.data,
            };
            if better {
                self.best = Some((cand, self.order.clone()));
            }
            return;
        }
        let head = self.order[0];
        // Positions 1.. of row 0 must be ascending, so only the least
        // remaining value of the first vertex's row may come next.
        let min_val = (0..n)
            .filter(|&w| !self.used[w])
            .map(|w| self.m.get(head, w))
            .min()
            .unwrap();
        for w in 0..n {
            if self.used[w] || self.m.get(head, w) != min_val {
                continue;
            }
            self.order.push(w);
            if self.prefix_ok() {
                self.used[w] = true;
                self.extend();
                self.used[w] = false;
            }
            self.order.pop();
        }
    }

    // Row 0 is identical across all surviving branches, so the known prefix
    // of row 1 decides whether this branch can still beat the incumbent.
    fn prefix_ok(&self) -> bool {
        let Some((best, _)) = &self.best else {
            return true;
        };
        let k = self.order.len();
        if k < 2 {
            return true;
        }
        let n = self.m.n;
        let v1 = self.order[1];
        for c in 0..k {
            let x = self.m.get(v1, self.order[c]);
            let y = best.data[n + c];
            if x != y {
                return x < y;
            }
        }
        true
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl fmt::Display for SquareMatrix {
    /// One row per line, entries separated by single spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let line: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Adjacency matrix of a digraph: entry `(v, w)` counts edges from `v` to `w`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AdjacencyMatrix(SquareMatrix);

impl AdjacencyMatrix {
    pub fn new(m: SquareMatrix) -> Result<Self, MatrixError> {
        for i in 0..m.size() {
            for j in 0..m.size() {
                if m.get(i, j) < 0 {
                    return Err(MatrixError::NegativeAdjacency { row: i, col: j, value: m.get(i, j) });
                }
            }
        }
        Ok(AdjacencyMatrix(m))
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, MatrixError> {
        Self::new(SquareMatrix::from_rows(rows)?)
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }

    pub fn to_relator(&self) -> RelatorMatrix {
        let m = self.0.checked_sub(&SquareMatrix::identity(self.size())).expect("overflow");
        RelatorMatrix(m)
    }
}

/// Adjacency minus identity. Off-diagonal entries are `>= 0` and diagonal
/// entries `>= -1`, so adding the identity back always gives a valid
/// adjacency matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RelatorMatrix(SquareMatrix);

impl RelatorMatrix {
    pub fn new(m: SquareMatrix) -> Result<Self, MatrixError> {
        check_relator_shape(&m)?;
        Ok(RelatorMatrix(m))
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, MatrixError> {
        Self::new(SquareMatrix::from_rows(rows)?)
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> SquareMatrix {
        self.0
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.0.get(i, j)
    }

    pub fn to_adjacency(&self) -> AdjacencyMatrix {
        let m = self.0.checked_add(&SquareMatrix::identity(self.size())).expect("overflow");
        AdjacencyMatrix(m)
    }

    pub fn determinant(&self) -> BigInt {
        self.0.determinant()
    }

    pub fn signed_determinant(&self) -> BigInt {
        self.0.signed_determinant()
    }

    /// Shape invariants plus the UDAF condition on the digraph it describes.
    pub fn is_udaf(&self) -> bool {
        crate::digraph::adjacency_is_udaf(self.to_adjacency().matrix())
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        RelatorMatrix(self.0.permuted(perm))
    }

    pub fn canonical_form(&self) -> RelatorMatrix {
        RelatorMatrix(self.0.canonical_form())
    }

    pub fn canonical_form_with_perm(&self) -> (RelatorMatrix, Vec<usize>) {
        let (m, p) = self.0.canonical_form_with_perm();
        (RelatorMatrix(m), p)
    }

    pub fn has_negative_entries(&self) -> bool {
        self.0.entries().iter().any(|&x| x < 0)
    }
}

impl fmt::Display for RelatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for AdjacencyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub(crate) fn check_relator_shape(m: &SquareMatrix) -> Result<(), MatrixError> {
    for i in 0..m.size() {
        for j in 0..m.size() {
            let v = m.get(i, j);
            if i == j && v < -1 {
                return Err(MatrixError::DiagonalBelowMinusOne { index: i, value: v });
            }
            if i != j && v < 0 {
                return Err(MatrixError::NegativeOffDiagonal { row: i, col: j, value: v });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> SquareMatrix {
        SquareMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(m(&[]).determinant(), BigInt::one());
        assert_eq!(m(&[&[5]]).determinant(), BigInt::from(5));
        assert_eq!(m(&[&[0, 1], &[1, -1]]).determinant(), BigInt::from(-1));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), BigInt::from(-1));
        assert_eq!(m(&[&[2, 1], &[1, 1]]).determinant(), BigInt::from(1));
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).determinant(), BigInt::from(-3));
        assert_eq!(m(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]).determinant(), BigInt::from(-1));
    }

    #[test]
    fn ragged_and_non_square_rejected() {
        let rows: Vec<Vec<i64>> = vec![vec![1, 2], vec![3]];
        assert!(matches!(SquareMatrix::from_rows(&rows), Err(MatrixError::Ragged { .. })));
        let rows: Vec<Vec<i64>> = vec![vec![1, 2, 3], vec![3, 4, 5]];
        assert!(matches!(SquareMatrix::from_rows(&rows), Err(MatrixError::NotSquare { .. })));
    }

    #[test]
    fn relator_shape() {
        assert!(RelatorMatrix::from_rows(&[[0, 1], [1, -1]]).is_ok());
        assert!(matches!(
            RelatorMatrix::from_rows(&[[0, -1], [1, -1]]),
            Err(MatrixError::NegativeOffDiagonal { .. })
        ));
        assert!(matches!(
            RelatorMatrix::from_rows(&[[-2]]),
            Err(MatrixError::DiagonalBelowMinusOne { .. })
        ));
    }

    #[test]
    fn insert_and_remove_index() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = a.insert_index(1);
        assert_eq!(b, m(&[&[1, 0, 2], &[0, 0, 0], &[3, 0, 4]]));
        assert_eq!(b.remove_index(1), a);
        assert_eq!(a.insert_index(2).remove_index(2), a);
    }

    #[test]
    fn canonical_form_swap_orbit() {
        let a = m(&[&[-1, 0], &[1, 1]]);
        let b = m(&[&[1, 1], &[0, -1]]);
        assert_eq!(a.canonical_form(), b.canonical_form());
        assert_eq!(a.canonical_form(), a);
    }

    #[test]
    fn canonical_perm_realizes_form() {
        let a = m(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0]]);
        let (c, p) = a.canonical_form_with_perm();
        assert_eq!(a.permuted(&p), c);
    }
}
