//! Exact linear algebra over F_p.
//!
//! [`MatrixFp`] is the dense carrier with row reduction, kernels and images.
//! [`Echelon`] is an incremental sparse semi-echelon basis used for the large
//! k-linear expansions of module maps, where almost every column has a handful
//! of nonzeros.

use crate::error::{Error, Result};
use crate::field::Fp;

/// Sparse vector: `(index, nonzero value)` pairs sorted by index.
pub type SparseVec = Vec<(u32, u32)>;

/// `a + c*b` for sparse vectors.
pub fn axpy(f: &Fp, a: &[(u32, u32)], c: u32, b: &[(u32, u32)]) -> SparseVec {
    if c == 0 {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f.mul(c, b[j].1)));
            j += 1;
        } else {
            let v = f.add(a[i].1, f.mul(c, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(f: &Fp, a: &[(u32, u32)], c: u32) -> SparseVec {
    if c == 0 {
        return Vec::new();
    }
    a.iter().map(|&(i, v)| (i, f.mul(v, c))).collect()
}

/// Sorts and merges duplicate indices, dropping zeros.
pub fn normalize(f: &Fp, mut v: Vec<(u32, u32)>) -> SparseVec {
    v.sort_unstable_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = f.add(last.1, c),
            _ => out.push((i, c)),
        }
        if out.last().map(|l| l.1 == 0).unwrap_or(false) {
            out.pop();
        }
    }
    out
}

/// Incremental semi-echelon basis of a subspace of F_p^n.
///
/// Each stored row has leading coefficient 1 at a distinct pivot column.
/// Optionally tracks, for every stored row, the combination of inserted
/// vectors that produced it; a vector that reduces to zero then yields a
/// linear relation among the inputs.
#[derive(Debug, Clone)]
pub struct Echelon {
    f: Fp,
    pivot_row: Vec<u32>,
    rows: Vec<SparseVec>,
    combos: Option<Vec<SparseVec>>,
    inserted: u32,
}

const NO_PIVOT: u32 = u32::MAX;

impl Echelon {
    pub fn new(f: Fp, ncols: usize) -> Self {
        Echelon { f, pivot_row: vec![NO_PIVOT; ncols], rows: Vec::new(), combos: None, inserted: 0 }
    }

    pub fn tracked(f: Fp, ncols: usize) -> Self {
        let mut e = Echelon::new(f, ncols);
        e.combos = Some(Vec::new());
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_with(&self, mut v: SparseVec, mut combo: Option<SparseVec>) -> (SparseVec, Option<SparseVec>) {
        while let Some(&(lead, c)) = v.first() {
            let r = self.pivot_row[lead as usize];
            if r == NO_PIVOT {
                break;
            }
            let neg = self.f.neg(c);
            v = axpy(&self.f, &v, neg, &self.rows[r as usize]);
            if let (Some(cb), Some(all)) = (combo.as_mut(), self.combos.as_ref()) {
                *cb = axpy(&self.f, cb, neg, &all[r as usize]);
            }
        }
        (v, combo)
    }

    /// True if `v` lies in the span.
    pub fn contains(&self, v: &[(u32, u32)]) -> bool {
        self.reduce_with(v.to_vec(), None).0.is_empty()
    }

    /// Inserts `v`. Returns `true` if it enlarged the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        self.insert_inner(v).is_ok()
    }

    /// Inserts `v` as input number `k` (in insertion order). If `v` depends on
    /// earlier inputs, returns `Err` carrying the relation `e_k - sum c_i e_i`
    /// over input indices (empty when untracked).
    pub fn insert_inner(&mut self, v: SparseVec) -> std::result::Result<(), SparseVec> {
        let k = self.inserted;
        self.inserted += 1;
        let combo = self.combos.as_ref().map(|_| vec![(k, 1)]);
        let (v, combo) = self.reduce_with(v, combo);
        match v.first() {
            None => Err(combo.unwrap_or_default()),
            Some(&(lead, c)) => {
                let inv = self.f.inv(c);
                let v = scale(&self.f, &v, inv);
                self.pivot_row[lead as usize] = self.rows.len() as u32;
                self.rows.push(v);
                if let (Some(all), Some(cb)) = (self.combos.as_mut(), combo) {
                    all.push(scale(&self.f, &cb, inv));
                }
                Ok(())
            }
        }
    }
}

/// Rank of a family of sparse vectors of length `ncols`.
pub fn sparse_rank(f: Fp, ncols: usize, vecs: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new(f, ncols);
    for v in vecs {
        e.insert(v);
    }
    e.rank()
}

/// Relations among the inputs: a basis of `{c : sum c_i v_i = 0}`, each
/// relation expressed over input indices.
pub fn sparse_relations(f: Fp, ncols: usize, vecs: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let mut e = Echelon::tracked(f, ncols);
    let mut out = Vec::new();
    for v in vecs {
        if let Err(rel) = e.insert_inner(v) {
            out.push(rel);
        }
    }
    out
}

/// Dense matrix over F_p, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFp {
    f: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl MatrixFp {
    pub fn zeros(f: Fp, rows: usize, cols: usize) -> Self {
        MatrixFp { f, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(f: Fp, n: usize) -> Self {
        let mut m = MatrixFp::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from integer rows, reducing entries mod p.
    pub fn from_rows(f: Fp, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        let mut m = MatrixFp::zeros(f, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, f.from_i64(v));
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(f: Fp, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = MatrixFp::zeros(f, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v % f.p());
            }
        }
        m
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0, |acc, j| self.f.add(acc, self.f.mul(self.get(i, j), v[j])))
            })
            .collect()
    }

    pub fn mul(&self, other: &MatrixFp) -> MatrixFp {
        assert_eq!(self.cols, other.rows);
        let mut out = MatrixFp::zeros(self.f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = self.f.add(out.get(i, j), self.f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Reduced row-echelon form and its pivot columns. Pivots are taken as the
    /// first nonzero entry scanning columns left to right.
    pub fn rref(&self) -> (MatrixFp, Vec<usize>) {
        let f = self.f;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(src) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if src != r {
                for j in 0..m.cols {
                    m.data.swap(src * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref();
        let f = self.f;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(row, free));
                }
                v
            })
            .collect()
    }

    /// Basis of the column space: the pivot columns of the original matrix.
    pub fn image_basis(&self) -> Vec<Vec<u32>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.column(c)).collect()
    }
}

/// `dim span(big) - dim span(small)`, after checking `span(small) ⊆ span(big)`.
pub fn quotient_dim(f: Fp, big: &[Vec<u32>], small: &[Vec<u32>]) -> Result<usize> {
    let n = big.first().or(small.first()).map(Vec::len).unwrap_or(0);
    let to_sparse = |v: &Vec<u32>| -> SparseVec {
        v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i as u32, *c)).collect()
    };
    let mut e = Echelon::new(f, n);
    for v in big {
        e.insert(to_sparse(v));
    }
    let dim_big = e.rank();
    for v in small {
        if !e.contains(&to_sparse(v)) {
            return Err(Error::ContainmentViolation);
        }
    }
    let dim_small = sparse_rank(f, n, small.iter().map(to_sparse));
    Ok(dim_big - dim_small)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Fp {
        Fp::new(2).unwrap()
    }

    #[test]
    fn rref_examples() {
        let id = MatrixFp::identity(f2(), 3);
        let (r, piv) = id.rref();
        assert_eq!(r, id);
        assert_eq!(piv.len(), 3);

        let z = MatrixFp::zeros(f2(), 2, 5);
        assert_eq!(z.rref(), (z.clone(), vec![]));

        let m = MatrixFp::from_rows(f2(), &[vec![1, 1], vec![1, 1]]);
        let (r, piv) = m.rref();
        assert_eq!(r, MatrixFp::from_rows(f2(), &[vec![1, 1], vec![0, 0]]));
        assert_eq!(piv, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        assert!(MatrixFp::identity(f2(), 4).kernel_basis().is_empty());
        let k = MatrixFp::zeros(f2(), 2, 3).kernel_basis();
        assert_eq!(k, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let k = MatrixFp::from_rows(f2(), &[vec![1, 1]]).kernel_basis();
        assert_eq!(k, vec![vec![1, 1]]);
    }

    #[test]
    fn image_examples() {
        assert_eq!(MatrixFp::identity(f2(), 3).image_basis().len(), 3);
        assert!(MatrixFp::zeros(f2(), 3, 2).image_basis().is_empty());
        let m = MatrixFp::from_rows(f2(), &[vec![1, 0], vec![1, 0]]);
        assert_eq!(m.image_basis(), vec![vec![1, 1]]);
    }

    #[test]
    fn quotient_dim_examples() {
        let f = f2();
        let e3 = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(quotient_dim(f, &e3, &[]).unwrap(), 3);
        assert_eq!(quotient_dim(f, &e3, &e3).unwrap(), 0);
        let big = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(quotient_dim(f, &big, &[vec![1, 1]]).unwrap(), 1);
        let line = vec![vec![1, 0]];
        assert!(matches!(
            quotient_dim(f, &line, &[vec![0, 1]]),
            Err(Error::ContainmentViolation)
        ));
    }

    #[test]
    fn sparse_relations_match_dense_kernel_dim() {
        let f = Fp::new(3).unwrap();
        // columns (1,2), (2,1), (0,0), (1,1) over F_3
        let cols: Vec<SparseVec> = vec![vec![(0, 1), (1, 2)], vec![(0, 2), (1, 1)], vec![], vec![(0, 1), (1, 1)]];
        let rels = sparse_relations(f, 2, cols.clone());
        assert_eq!(rels.len(), 2);
        for rel in rels {
            let mut acc: SparseVec = Vec::new();
            for &(k, c) in &rel {
                acc = axpy(&f, &acc, c, &cols[k as usize]);
            }
            assert!(acc.is_empty());
        }
    }
}
