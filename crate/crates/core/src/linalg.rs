//! Dense matrices over a [`Field`] and Gaussian elimination.

use std::fmt;

use crate::field::{Elem, Field};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>, // row-major
}

/// Outcome of solving `A x = b` when no unique solution exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveError {
    Inconsistent,
    Underdetermined,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { Elem::ONE } else { Elem::ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, cols.len(), |r, c| self.get(r, cols[c]))
    }

    /// `x A` for a row vector `x` of length `rows`.
    pub fn left_mul(&self, field: &Field, x: &[Elem]) -> Vec<Elem> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![Elem::ZERO; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            if xr.is_zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(r)) {
                *o = field.add(*o, field.mul(xr, a));
            }
        }
        out
    }

    /// `A x` for a column vector `x` of length `cols`.
    pub fn mul_vec(&self, field: &Field, x: &[Elem]) -> Vec<Elem> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| field.sum(self.row(r).iter().zip(x).map(|(&a, &b)| field.mul(a, b))))
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduces to reduced row echelon form in place, scanning columns in
    /// ascending order; returns the pivot columns.
    pub fn rref(&mut self, field: &Field) -> Vec<usize> {
        let order: Vec<usize> = (0..self.cols).collect();
        self.rref_with_order(field, &order)
    }

    /// Reduced row echelon form with pivots searched in the given column order.
    pub fn rref_with_order(&mut self, field: &Field, column_order: &[usize]) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for &col in column_order {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = field.inv(self.get(row, col));
            for c in 0..self.cols {
                let v = self.get(row, c);
                self.set(row, c, field.mul(v, inv));
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                let nf = field.neg(factor);
                for c in 0..self.cols {
                    let pv = self.get(row, c);
                    if !pv.is_zero() {
                        let v = field.add(self.get(r, c), field.mul(nf, pv));
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.clone().rref(field).len()
    }

    /// A basis of `{x : A x = 0}`.
    pub fn nullspace(&self, field: &Field) -> Vec<Vec<Elem>> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![Elem::ZERO; self.cols];
            v[free] = Elem::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// The unique solution of `A x = b`.
    pub fn solve(&self, field: &Field, b: &[Elem]) -> Result<Vec<Elem>, SolveError> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                b[r]
            }
        });
        let pivots = aug.rref(field);
        if pivots.last() == Some(&self.cols) {
            return Err(SolveError::Inconsistent);
        }
        if pivots.len() < self.cols {
            return Err(SolveError::Underdetermined);
        }
        let mut x = vec![Elem::ZERO; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Ok(x)
    }

    pub fn inverse(&self, field: &Field) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c)
            } else if c - n == r {
                Elem::ONE
            } else {
                Elem::ZERO
            }
        });
        let pivots = aug.rref(field);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Matrix::from_fn(n, n, |r, c| aug.get(r, n + c)))
    }
}
