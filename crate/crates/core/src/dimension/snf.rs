//! Smith normal form over the integers with unimodular transforms, and
//! integer row-lattice membership built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// `left * input * right = diag(diagonal)` (padded with zero rows/columns),
/// `left` and `right` unimodular, each diagonal entry dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    pub rows: usize,
    pub cols: usize,
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn to_big(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

struct Reducer {
    a: IntMatrix,
    left: IntMatrix,
    right: IntMatrix,
    rows: usize,
    cols: usize,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.left.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.right.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// `row_i -= q * row_j`
    fn row_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.left] {
            let src = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(src) {
                *x -= q * y;
            }
        }
    }

    /// `col_i -= q * col_j`
    fn col_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.right] {
            for row in m.iter_mut() {
                let y = row[j].clone();
                row[i] -= q * y;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.left] {
            for x in m[i].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
    }

    /// Position of a nonzero entry of least absolute value in the trailing block.
    fn smallest(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                if self.a[i][j].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| self.a[i][j].abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let steps = self.rows.min(self.cols);
        for t in 0..steps {
            loop {
                let Some((i, j)) = self.smallest(t) else { return };
                self.swap_rows(t, i);
                self.swap_cols(t, j);
                let mut clean = true;
                for r in t + 1..self.rows {
                    if !self.a[r][t].is_zero() {
                        let q = self.a[r][t].div_floor(&self.a[t][t]);
                        self.row_sub(r, t, &q);
                        clean &= self.a[r][t].is_zero();
                    }
                }
                for c in t + 1..self.cols {
                    if !self.a[t][c].is_zero() {
                        let q = self.a[t][c].div_floor(&self.a[t][t]);
                        self.col_sub(c, t, &q);
                        clean &= self.a[t][c].is_zero();
                    }
                }
                if !clean {
                    continue;
                }
                // Divisibility: fold an offending row into row t and retry.
                let pivot = self.a[t][t].clone();
                let offending = (t + 1..self.rows)
                    .find(|&r| (t + 1..self.cols).any(|c| !self.a[r][c].is_multiple_of(&pivot)));
                match offending {
                    Some(r) => self.row_sub(t, r, &BigInt::from(-1)),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

pub fn smith_normal_form(input: &IntMatrix) -> Smith {
    let rows = input.len();
    let cols = input.first().map_or(0, Vec::len);
    let mut r = Reducer { a: input.clone(), left: identity(rows), right: identity(cols), rows, cols };
    r.run();
    let diagonal = (0..rows.min(cols)).map(|k| r.a[k][k].clone()).collect();
    Smith { rows, cols, diagonal, left: r.left, right: r.right }
}

/// Some integer row vector `y` with `y * rows = x`, if one exists.
pub fn solve_row_combination(rows: &IntMatrix, x: &[BigInt]) -> Option<Vec<BigInt>> {
    let smith = smith_normal_form(rows);
    let (m, n) = (smith.rows, smith.cols);
    assert_eq!(x.len(), n);
    // y L^-1 D = x R, so z = y L^-1 solves z D = x R and y = z L.
    let xr: Vec<BigInt> =
        (0..n).map(|j| (0..n).fold(BigInt::zero(), |acc, k| acc + &x[k] * &smith.right[k][j])).collect();
    let mut z = vec![BigInt::zero(); m];
    for j in 0..n {
        let d = smith.diagonal.get(j).cloned().unwrap_or_default();
        if d.is_zero() {
            if !xr[j].is_zero() {
                return None;
            }
        } else {
            let (q, rem) = xr[j].div_rem(&d);
            if !rem.is_zero() {
                return None;
            }
            z[j] = q;
        }
    }
    Some((0..m).map(|j| (0..m).fold(BigInt::zero(), |acc, k| acc + &z[k] * &smith.left[k][j])).collect())
}
