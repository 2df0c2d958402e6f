//! k-linear expansion of free modules and matrices over an algebra.
//!
//! A [`Block`] is a finite set of coordinates `(row, basis monomial)` in a free
//! module `R^g`: either everything (finite algebras) or one internal degree
//! of a graded free module with given shifts.

use crate::error::{Error, Result};
use crate::linalg::{self, SparseVec};
use crate::matrix::RMatrix;
use crate::ring::{LocalAlgebra, RingElement};

#[derive(Debug, Clone)]
pub(crate) struct Part {
    pub start: u32,
    pub len: u32,
    pub offset: u32,
}

#[derive(Debug, Clone)]
pub(crate) struct Block {
    pub parts: Vec<Part>,
    pub dim: usize,
}

impl Block {
    /// All of `R^rows` over a finite basis.
    pub fn finite(alg: &LocalAlgebra, rows: usize) -> Block {
        let n = alg.dim() as u32;
        let parts = (0..rows as u32).map(|i| Part { start: 0, len: n, offset: i * n }).collect();
        Block { parts, dim: rows * n as usize }
    }

    /// Degree-`t` part of `⊕ R(-s_i)`.
    pub fn graded(alg: &LocalAlgebra, shifts: &[i64], t: i64) -> Block {
        let mut offset = 0u32;
        let parts = shifts
            .iter()
            .map(|&s| {
                let d = t - s;
                let range = if d < 0 { 0..0 } else { alg.degree_range(d as u32) };
                let part = Part { start: range.start as u32, len: (range.end - range.start) as u32, offset };
                offset += part.len;
                part
            })
            .collect();
        Block { parts, dim: offset as usize }
    }

    #[inline]
    pub fn local(&self, row: usize, basis: u32) -> Option<u32> {
        let p = &self.parts[row];
        if basis >= p.start && basis < p.start + p.len {
            Some(p.offset + basis - p.start)
        } else {
            None
        }
    }

    /// `(row, basis index)` of every coordinate, in coordinate order.
    pub fn coords(&self) -> Vec<(usize, u32)> {
        let mut out = Vec::with_capacity(self.dim);
        for (i, p) in self.parts.iter().enumerate() {
            for k in p.start..p.start + p.len {
                out.push((i, k));
            }
        }
        out
    }

    /// Column vector over R to block coordinates. Terms outside the block
    /// make this fail (the vector is not homogeneous of this degree).
    pub fn encode(&self, v: &[RingElement]) -> Result<SparseVec> {
        let mut out = Vec::new();
        for (i, e) in v.iter().enumerate() {
            for &(k, c) in &e.terms {
                let idx = self.local(i, k).ok_or(Error::NotGraded)?;
                out.push((idx, c));
            }
        }
        out.sort_unstable_by_key(|e| e.0);
        Ok(out)
    }

    pub fn decode(&self, v: &[(u32, u32)]) -> Vec<RingElement> {
        let mut cols: Vec<Vec<(u32, u32)>> = vec![Vec::new(); self.parts.len()];
        for &(idx, c) in v {
            let row = self.parts.partition_point(|p| p.offset + p.len <= idx);
            let p = &self.parts[row];
            cols[row].push((p.start + idx - p.offset, c));
        }
        cols.into_iter()
            .map(|mut t| {
                t.sort_unstable_by_key(|e| e.0);
                RingElement { terms: t, truncated: false }
            })
            .collect()
    }
}

/// Nonzero entries of each column of a matrix.
pub(crate) fn column_supports(a: &RMatrix) -> Vec<Vec<(usize, RingElement)>> {
    (0..a.ncols())
        .map(|j| a.column_support(j).into_iter().map(|(i, e)| (i, e.clone())).collect())
        .collect()
}

/// Image of the source coordinate `(j, basis k)` under `a`, in target block
/// coordinates. Terms that fall outside the target block are dropped (they
/// lie above the represented degrees).
pub(crate) fn image_of(
    alg: &LocalAlgebra,
    supports: &[Vec<(usize, RingElement)>],
    tgt: &Block,
    j: usize,
    k: u32,
) -> SparseVec {
    let f = alg.field();
    let mut acc: Vec<(u32, u32)> = Vec::new();
    for (i, e) in &supports[j] {
        for &(a, ca) in &e.terms {
            for (b, cb) in alg.mul_basis(a, k) {
                if let Some(idx) = tgt.local(*i, b) {
                    acc.push((idx, f.mul(ca, cb)));
                }
            }
        }
    }
    linalg::normalize(&f, acc)
}


/// `x_var * v` where `v` is in block `from` and the result in block `to`.
pub(crate) fn mul_var(alg: &LocalAlgebra, var: usize, v: &[(u32, u32)], from: &Block, to: &Block) -> SparseVec {
    let f = alg.field();
    let mut acc = Vec::with_capacity(v.len());
    for &(idx, c) in v {
        let row = from.parts.partition_point(|p| p.offset + p.len <= idx);
        let p = &from.parts[row];
        let k = p.start + idx - p.offset;
        for &(b, cb) in alg.mul_var(var, k) {
            if let Some(t) = to.local(row, b) {
                acc.push((t, f.mul(c, cb)));
            }
        }
    }
    linalg::normalize(&f, acc)
}

/// `basis[m] * v` for a block vector, result in block `to`.
pub(crate) fn mul_monomial(alg: &LocalAlgebra, m: u32, v: &[(u32, u32)], from: &Block, to: &Block) -> SparseVec {
    let f = alg.field();
    let mut acc = Vec::with_capacity(v.len());
    for &(idx, c) in v {
        let row = from.parts.partition_point(|p| p.offset + p.len <= idx);
        let p = &from.parts[row];
        let k = p.start + idx - p.offset;
        for (b, cb) in alg.mul_basis(m, k) {
            if let Some(t) = to.local(row, b) {
                acc.push((t, f.mul(c, cb)));
            }
        }
    }
    linalg::normalize(&f, acc)
}
