//! Matrices with entries in a [`LocalAlgebra`].

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{LocalAlgebra, RingElement};

/// Row-major matrix of normal-form ring elements. Columns are images of
/// source basis vectors, so a `g × h` matrix maps `R^h → R^g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RingElement>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix { rows, cols, entries: vec![RingElement::zero(); rows * cols] }
    }

    pub fn identity(alg: &LocalAlgebra, n: usize) -> Self {
        let mut m = RMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, alg.one());
        }
        m
    }

    pub fn from_columns(rows: usize, columns: Vec<Vec<RingElement>>) -> Self {
        let cols = columns.len();
        let mut m = RMatrix::zeros(rows, cols);
        for (j, col) in columns.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, e) in col.into_iter().enumerate() {
                m.set(i, j, e);
            }
        }
        m
    }

    pub fn from_polys(alg: &LocalAlgebra, rows: &[Vec<Poly>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        let mut m = RMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::Shape("ragged rows".into()));
            }
            for (j, p) in row.iter().enumerate() {
                m.set(i, j, alg.nf(p));
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: RingElement) {
        self.entries[i * self.cols + j] = e;
    }

    pub fn column(&self, j: usize) -> Vec<RingElement> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<RingElement>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &RingElement> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RingElement::is_zero)
    }

    /// Nonzero entries of column `j` as `(row, entry)`.
    pub fn column_support(&self, j: usize) -> Vec<(usize, &RingElement)> {
        (0..self.rows).map(|i| (i, self.get(i, j))).filter(|(_, e)| !e.is_zero()).collect()
    }

    pub fn map(&self, mut f: impl FnMut(&RingElement) -> RingElement) -> RMatrix {
        RMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(&mut f).collect() }
    }

    /// `self * v` for a column vector `v` over R.
    pub fn apply(&self, alg: &LocalAlgebra, v: &[RingElement]) -> Vec<RingElement> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![RingElement::zero(); self.rows];
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            for (i, slot) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *slot = alg.add(slot, &alg.mul(a, vj));
                }
            }
        }
        out
    }

    pub fn mul(&self, alg: &LocalAlgebra, other: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, other.rows);
        let cols: Vec<Vec<RingElement>> = (0..other.cols).map(|j| self.apply(alg, &other.column(j))).collect();
        RMatrix::from_columns(self.rows, cols)
    }

    /// True when `self * other = 0`, checked column by column.
    pub fn composes_to_zero(&self, alg: &LocalAlgebra, other: &RMatrix) -> bool {
        (0..other.cols).all(|j| self.apply(alg, &other.column(j)).iter().all(RingElement::is_zero))
    }

    /// Every entry lies in the maximal ideal.
    pub fn entries_in_maximal_ideal(&self, alg: &LocalAlgebra) -> bool {
        self.entries.iter().all(|e| alg.in_maximal_ideal(e))
    }

    pub fn format(&self, alg: &LocalAlgebra) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let row: Vec<String> = (0..self.cols).map(|j| alg.format(self.get(i, j))).collect();
                format!("[{}]", row.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }

    /// Degree shifts making every nonzero entry `(i, j)` homogeneous of degree
    /// `col[j] - row[i]`. `rows` may be fixed in advance; otherwise they are
    /// inferred (each connected block anchored at 0). Returns `None` if the
    /// matrix is not graded.
    pub fn grading(&self, alg: &LocalAlgebra, rows: Option<&[i64]>) -> Option<(Vec<i64>, Vec<i64>)> {
        if !alg.is_homogeneous() {
            return None;
        }
        let mut row_shift: Vec<Option<i64>> = match rows {
            Some(r) => r.iter().map(|&s| Some(s)).collect(),
            None => vec![None; self.rows],
        };
        let mut col_shift: Vec<Option<i64>> = vec![None; self.cols];
        let mut degree = vec![None; self.rows * self.cols];
        for (k, e) in self.entries.iter().enumerate() {
            if !e.is_zero() {
                if !alg.is_homogeneous_element(e) {
                    return None;
                }
                degree[k] = alg.degree(e).map(|d| d as i64);
            }
        }
        loop {
            let mut changed = false;
            for i in 0..self.rows {
                for j in 0..self.cols {
                    let Some(d) = degree[i * self.cols + j] else { continue };
                    match (row_shift[i], col_shift[j]) {
                        (Some(r), Some(c)) => {
                            if c - r != d {
                                return None;
                            }
                        }
                        (Some(r), None) => {
                            col_shift[j] = Some(r + d);
                            changed = true;
                        }
                        (None, Some(c)) => {
                            row_shift[i] = Some(c - d);
                            changed = true;
                        }
                        (None, None) => {}
                    }
                }
            }
            if !changed {
                match row_shift.iter().position(Option::is_none) {
                    Some(i) if (0..self.cols).any(|j| degree[i * self.cols + j].is_some()) => {
                        row_shift[i] = Some(0);
                    }
                    Some(i) => row_shift[i] = Some(0),
                    None => break,
                }
            }
        }
        let rows: Vec<i64> = row_shift.into_iter().map(|s| s.unwrap()).collect();
        let top = rows.iter().copied().max().unwrap_or(0) + 1;
        let cols = col_shift.into_iter().map(|s| s.unwrap_or(top)).collect();
        Some((rows, cols))
    }
}
