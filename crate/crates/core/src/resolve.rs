//! Finitely presented modules, syzygies and minimal free resolutions.
//!
//! Everything is reduced to F_p-linear algebra on the standard-monomial
//! expansion. When the algebra is homogeneous and the matrix admits degree
//! shifts, the expansion is split by internal degree; this is the only route
//! over non-Artinian graded algebras, where kernels are computed degree by
//! degree up to the working cap.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expand::{self, Block};
use crate::linalg::{self, Echelon, SparseVec};
use crate::matrix::RMatrix;
use crate::parse::ModuleSpec;
use crate::ring::{AlgebraKind, LocalAlgebra, RingElement};

/// Degree shifts of a graded map `⊕ R(-cols) → ⊕ R(-rows)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Grading {
    pub rows: Vec<i64>,
    pub cols: Vec<i64>,
}

/// `M = coker(relations)`, always stored minimized: relation entries lie in
/// `m` and the columns minimally generate the relation module.
#[derive(Debug, Clone)]
pub struct ModulePresentation {
    relations: RMatrix,
    grading: Option<Grading>,
    minimal: bool,
}

impl ModulePresentation {
    /// Cokernel of `relations` (rows = generators), minimized.
    pub fn new(alg: &LocalAlgebra, relations: RMatrix) -> Result<Self> {
        let grading = relations.grading(alg, None).map(|(rows, cols)| Grading { rows, cols });
        if grading.is_none() && !alg.is_finite() {
            return Err(Error::NotGraded);
        }
        let (relations, grading) = strip_units(alg, relations, grading)?;
        let cols = relations.columns();
        let keep = match &grading {
            Some(gr) => select_graded(alg, &gr.rows, &cols, &gr.cols)?,
            None => select_finite(alg, relations.nrows(), &cols),
        };
        let relations = RMatrix::from_columns(relations.nrows(), keep.iter().map(|&k| cols[k].clone()).collect());
        let grading = grading.map(|g| Grading { cols: keep.iter().map(|&k| g.cols[k]).collect(), rows: g.rows });
        Ok(ModulePresentation { relations, grading, minimal: true })
    }

    /// Builds a declared module (`k`, `free n` or `coker [[...]]`).
    pub fn from_spec(alg: &LocalAlgebra, spec: &ModuleSpec) -> Result<Self> {
        match spec {
            ModuleSpec::Residue => Ok(Self::residue_field(alg)),
            ModuleSpec::Free(n) => Ok(Self::free(alg, *n)),
            ModuleSpec::Coker(rows) => Self::new(alg, RMatrix::from_polys(alg, rows)?),
        }
    }

    /// The residue field `k = R/m`.
    pub fn residue_field(alg: &LocalAlgebra) -> Self {
        let n = alg.nvars();
        let row: Vec<Vec<RingElement>> = (0..n).map(|i| vec![alg.var(i)]).collect();
        let relations = RMatrix::from_columns(1, row);
        Self::new(alg, relations).expect("the variables form a graded row")
    }

    /// `R^n`.
    pub fn free(alg: &LocalAlgebra, n: usize) -> Self {
        ModulePresentation {
            relations: RMatrix::zeros(n, 0),
            grading: alg.is_homogeneous().then(|| Grading { rows: vec![0; n], cols: vec![] }),
            minimal: true,
        }
    }

    pub fn generators(&self) -> usize {
        self.relations.nrows()
    }

    pub fn relations(&self) -> &RMatrix {
        &self.relations
    }

    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    /// Over a local ring projective means free: the minimized presentation
    /// has no relations.
    pub fn is_free(&self) -> bool {
        self.relations.ncols() == 0
    }
}

/// Removes unit entries: the generator of the pivot row is eliminated
/// together with the pivot relation.
fn strip_units(alg: &LocalAlgebra, mut a: RMatrix, mut grading: Option<Grading>) -> Result<(RMatrix, Option<Grading>)> {
    loop {
        let pivot = (0..a.nrows())
            .flat_map(|i| (0..a.ncols()).map(move |j| (i, j)))
            .find(|&(i, j)| !alg.in_maximal_ideal(a.get(i, j)));
        let Some((pi, pj)) = pivot else { return Ok((a, grading)) };
        let uinv = alg.inverse(a.get(pi, pj)).ok_or(Error::NotGraded)?;
        let rows: Vec<usize> = (0..a.nrows()).filter(|&i| i != pi).collect();
        let cols: Vec<usize> = (0..a.ncols()).filter(|&j| j != pj).collect();
        let mut b = RMatrix::zeros(rows.len(), cols.len());
        for (bi, &k) in rows.iter().enumerate() {
            let factor = alg.mul(a.get(k, pj), &uinv);
            for (bj, &l) in cols.iter().enumerate() {
                let v = if factor.is_zero() {
                    a.get(k, l).clone()
                } else {
                    alg.sub(a.get(k, l), &alg.mul(&factor, a.get(pi, l)))
                };
                b.set(bi, bj, v);
            }
        }
        grading = grading.map(|g| Grading {
            rows: rows.iter().map(|&i| g.rows[i]).collect(),
            cols: cols.iter().map(|&j| g.cols[j]).collect(),
        });
        a = b;
    }
}

/// Indices of a minimal generating subset, greedy in input order, for
/// homogeneous vectors of the given degrees.
fn select_graded(alg: &LocalAlgebra, rows: &[i64], vecs: &[Vec<RingElement>], degs: &[i64]) -> Result<Vec<usize>> {
    let f = alg.field();
    let mut levels: Vec<i64> = degs.to_vec();
    levels.sort_unstable();
    levels.dedup();
    let encoded: Vec<(Block, SparseVec)> = vecs
        .iter()
        .zip(degs)
        .map(|(v, &d)| {
            let b = Block::graded(alg, rows, d);
            let e = b.encode(v)?;
            Ok((b, e))
        })
        .collect::<Result<_>>()?;
    let mut keep = Vec::new();
    for &e in &levels {
        let block = Block::graded(alg, rows, e);
        let mut ech = Echelon::new(f, block.dim);
        for (k, (from, v)) in encoded.iter().enumerate() {
            let gap = e - degs[k];
            if gap <= 0 || v.is_empty() {
                continue;
            }
            for m in alg.degree_range(gap as u32) {
                ech.insert(expand::mul_monomial(alg, m as u32, v, from, &block));
            }
        }
        for (k, (_, v)) in encoded.iter().enumerate() {
            if degs[k] == e && ech.insert(v.clone()) {
                keep.push(k);
            }
        }
    }
    keep.sort_unstable();
    Ok(keep)
}

/// Same over a finite algebra without grading: `mW` is spanned by all
/// non-constant monomial multiples.
fn select_finite(alg: &LocalAlgebra, rows: usize, vecs: &[Vec<RingElement>]) -> Vec<usize> {
    let block = Block::finite(alg, rows);
    let encoded: Vec<SparseVec> = vecs.iter().map(|v| block.encode(v).expect("finite block")).collect();
    let mut ech = Echelon::new(alg.field(), block.dim);
    for v in &encoded {
        for m in 1..alg.dim() as u32 {
            ech.insert(expand::mul_monomial(alg, m, v, &block, &block));
        }
    }
    (0..encoded.len()).filter(|&k| ech.insert(encoded[k].clone())).collect()
}

/// Vectors of `R^g` whose images form a k-basis of `span / m·span`, chosen
/// greedily in input order.
pub fn minimal_generators(alg: &LocalAlgebra, vectors: &[Vec<RingElement>]) -> Result<Vec<Vec<RingElement>>> {
    let Some(first) = vectors.first() else { return Ok(Vec::new()) };
    let g = first.len();
    if vectors.iter().any(|v| v.len() != g) {
        return Err(Error::Shape("vectors of different lengths".into()));
    }
    let m = RMatrix::from_columns(g, vectors.to_vec());
    let keep = match m.grading(alg, None) {
        Some((rows, cols)) => select_graded(alg, &rows, vectors, &cols)?,
        None if alg.is_finite() => select_finite(alg, g, vectors),
        None => return Err(Error::NotGraded),
    };
    Ok(keep.into_iter().map(|k| vectors[k].clone()).collect())
}

/// Minimal generators of `{v : mat·v = 0}` as the columns of a matrix.
pub fn syzygy(alg: &LocalAlgebra, mat: &RMatrix) -> Result<RMatrix> {
    match mat.grading(alg, None) {
        Some((rows, cols)) => Ok(syzygy_graded(alg, mat, &rows, &cols)?.0),
        None if alg.is_finite() => {
            let s = syzygy_finite(alg, mat);
            if alg.kind() == AlgebraKind::Truncated {
                let big = alg.at_cap(alg.stable_cap())?;
                let lifted = mat.map(|e| big.transfer(alg, e));
                if syzygy_finite(&big, &lifted).ncols() != s.ncols() {
                    return Err(Error::CapUnstable);
                }
            }
            Ok(s)
        }
        None => Err(Error::NotGraded),
    }
}

/// Graded syzygy with known shifts; also returns the shifts of the new
/// generators. Over a non-Artinian algebra generators are searched up to the
/// working cap and any generator above the trusted range of the cap `D`
/// makes the answer cap dependent.
pub(crate) fn syzygy_graded(alg: &LocalAlgebra, mat: &RMatrix, rows: &[i64], cols: &[i64]) -> Result<(RMatrix, Vec<i64>)> {
    let h = mat.ncols();
    if h == 0 {
        return Ok((RMatrix::zeros(0, 0), Vec::new()));
    }
    if mat.nrows() == 0 || mat.is_zero() {
        return Ok((RMatrix::identity(alg, h), cols.to_vec()));
    }
    let f = alg.field();
    let supports = expand::column_supports(mat);
    let min_r = *rows.iter().min().unwrap();
    let min_c = *cols.iter().min().unwrap();
    let max_c = *cols.iter().max().unwrap();
    let top = alg.top_degree() as i64;
    let (t_hi, trusted) = if alg.is_finite() {
        (max_c + top, i64::MAX)
    } else {
        (top + min_r, alg.cap() as i64 - 1 + min_r)
    };
    let mut gens = Vec::new();
    let mut shifts = Vec::new();
    let mut prev: Option<(Block, Vec<SparseVec>)> = None;
    for t in min_c..=t_hi {
        let src = Block::graded(alg, cols, t);
        let tgt = Block::graded(alg, rows, t);
        let imgs = src.coords().into_iter().map(|(j, k)| expand::image_of(alg, &supports, &tgt, j, k));
        let kernel = linalg::sparse_relations(f, tgt.dim, imgs);
        if !kernel.is_empty() {
            let mut ech = Echelon::new(f, src.dim);
            if let Some((pb, pk)) = &prev {
                for v in pk {
                    for i in 0..alg.nvars() {
                        ech.insert(expand::mul_var(alg, i, v, pb, &src));
                    }
                }
            }
            if ech.rank() < kernel.len() {
                for v in &kernel {
                    if ech.insert(v.clone()) {
                        if t > trusted {
                            return Err(Error::CapUnstable);
                        }
                        gens.push(src.decode(v));
                        shifts.push(t);
                    }
                }
            }
        }
        prev = Some((src, kernel));
    }
    Ok((RMatrix::from_columns(mat.ncols(), gens), shifts))
}

/// Syzygy over a finite algebra by expanding all of `R^h`. Source
/// coordinates are visited by increasing monomial degree.
fn syzygy_finite(alg: &LocalAlgebra, mat: &RMatrix) -> RMatrix {
    let h = mat.ncols();
    if h == 0 {
        return RMatrix::zeros(0, 0);
    }
    let f = alg.field();
    let src = Block::finite(alg, h);
    let tgt = Block::finite(alg, mat.nrows());
    let supports = expand::column_supports(mat);
    let mut order = src.coords();
    order.sort_by_key(|&(j, k)| (alg.basis_degree(k), j, k));
    let imgs = order.iter().map(|&(j, k)| expand::image_of(alg, &supports, &tgt, j, k));
    let kernel: Vec<SparseVec> = linalg::sparse_relations(f, tgt.dim, imgs)
        .into_iter()
        .map(|rel| {
            let mut v: SparseVec = rel
                .into_iter()
                .map(|(i, c)| {
                    let (j, k) = order[i as usize];
                    (src.local(j, k).unwrap(), c)
                })
                .collect();
            v.sort_unstable_by_key(|e| e.0);
            v
        })
        .collect();
    let mut ech = Echelon::new(f, src.dim);
    for v in &kernel {
        for i in 0..alg.nvars() {
            ech.insert(expand::mul_var(alg, i, v, &src, &src));
        }
    }
    let gens: Vec<Vec<RingElement>> =
        kernel.iter().filter(|v| ech.insert((*v).clone())).map(|v| src.decode(v)).collect();
    RMatrix::from_columns(h, gens)
}

/// A complex of finite free modules `F_N → … → F_0`.
#[derive(Debug, Clone)]
pub struct FreeComplex {
    ranks: Vec<usize>,
    differentials: Vec<RMatrix>,
    shifts: Option<Vec<Vec<i64>>>,
    minimal: bool,
}

impl FreeComplex {
    /// Builds a complex from `d_1, …, d_N` (`d_n` is `l_{n-1} × l_n`).
    /// Shapes must chain; `d² = 0` is not checked here.
    pub fn new(alg: &LocalAlgebra, l0: usize, differentials: Vec<RMatrix>, shifts: Option<Vec<Vec<i64>>>) -> Result<Self> {
        let mut ranks = vec![l0];
        for (n, d) in differentials.iter().enumerate() {
            if d.nrows() != ranks[n] {
                return Err(Error::Shape(format!("d_{} has {} rows, expected {}", n + 1, d.nrows(), ranks[n])));
            }
            ranks.push(d.ncols());
        }
        if let Some(s) = &shifts {
            if s.len() != ranks.len() || s.iter().zip(&ranks).any(|(s, &l)| s.len() != l) {
                return Err(Error::Shape("shift lists do not match ranks".into()));
            }
        }
        let minimal = differentials.iter().all(|d| d.entries_in_maximal_ideal(alg));
        Ok(FreeComplex { ranks, differentials, shifts, minimal })
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Largest homological index `N`.
    pub fn len(&self) -> usize {
        self.differentials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.iter().all(|&l| l == 0)
    }

    /// `d_n` for `1 ≤ n ≤ N`.
    pub fn differential(&self, n: usize) -> &RMatrix {
        &self.differentials[n - 1]
    }

    pub fn differentials(&self) -> &[RMatrix] {
        &self.differentials
    }

    /// Internal degree shifts of each `F_n`, when graded.
    pub fn shifts(&self) -> Option<&[Vec<i64>]> {
        self.shifts.as_deref()
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    /// `d_n ∘ d_{n+1} = 0` for all `n`.
    pub fn is_complex(&self, alg: &LocalAlgebra) -> bool {
        self.differentials.windows(2).all(|w| w[0].composes_to_zero(alg, &w[1]))
    }

    /// Same complex with every entry replaced by `f(entry)` and new shifts.
    pub fn map_entries(&self, alg: &LocalAlgebra, f: impl Fn(&RingElement) -> RingElement, shifts: Option<Vec<Vec<i64>>>) -> FreeComplex {
        let differentials: Vec<RMatrix> = self.differentials.iter().map(|d| d.map(&f)).collect();
        let minimal = differentials.iter().all(|d| d.entries_in_maximal_ideal(alg));
        FreeComplex { ranks: self.ranks.clone(), differentials, shifts, minimal }
    }
}

/// Minimal free resolution `F_N → … → F_0 → M`.
pub fn minimal_free_resolution(alg: &LocalAlgebra, m: &ModulePresentation, n: usize) -> Result<FreeComplex> {
    match partial_resolution(alg, m, n) {
        (res, None) => Ok(res),
        (_, Some(e)) => Err(e),
    }
}

/// Like [`minimal_free_resolution`] but returns the longest prefix that
/// could be computed together with the error that stopped it.
pub fn partial_resolution(alg: &LocalAlgebra, m: &ModulePresentation, n: usize) -> (FreeComplex, Option<Error>) {
    let (res, err) = resolve_core(alg, m, n);
    if err.is_some() || alg.kind() != AlgebraKind::Truncated || n < 2 {
        return (res, err);
    }
    let check = alg.at_cap(alg.stable_cap()).and_then(|big| {
        let lifted = m.relations.map(|e| big.transfer(alg, e));
        let mb = ModulePresentation { relations: lifted, grading: None, minimal: true };
        match resolve_core(&big, &mb, n) {
            (other, None) if other.ranks == res.ranks => Ok(()),
            (_, Some(e)) => Err(e),
            _ => Err(Error::CapUnstable),
        }
    });
    (res, check.err())
}

fn resolve_core(alg: &LocalAlgebra, m: &ModulePresentation, n: usize) -> (FreeComplex, Option<Error>) {
    let mut ranks = vec![m.generators()];
    let mut diffs: Vec<RMatrix> = Vec::new();
    let mut shifts = m.grading.as_ref().map(|g| vec![g.rows.clone()]);
    let mut err = None;
    if n >= 1 {
        ranks.push(m.relations.ncols());
        diffs.push(m.relations.clone());
        if let (Some(s), Some(g)) = (shifts.as_mut(), m.grading.as_ref()) {
            s.push(g.cols.clone());
        }
    }
    for k in 2..=n {
        let prev = &diffs[k - 2];
        let next = if prev.ncols() == 0 {
            if let Some(s) = shifts.as_mut() {
                s.push(Vec::new());
            }
            RMatrix::zeros(0, 0)
        } else if let Some(s) = shifts.as_mut() {
            match syzygy_graded(alg, prev, &s[k - 2], &s[k - 1]) {
                Ok((syz, sh)) => {
                    s.push(sh);
                    syz
                }
                Err(e) => {
                    err = Some(e);
                    break;
                }
            }
        } else {
            syzygy_finite(alg, prev)
        };
        ranks.push(next.ncols());
        diffs.push(next);
    }
    (FreeComplex { ranks, differentials: diffs, shifts, minimal: m.minimal }, err)
}

/// `(l_0, …, l_N)`.
pub fn betti_numbers(alg: &LocalAlgebra, m: &ModulePresentation, n: usize) -> Result<Vec<usize>> {
    Ok(minimal_free_resolution(alg, m, n)?.ranks)
}

pub fn is_free(m: &ModulePresentation) -> bool {
    m.is_free()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, parse_presentation};
    use crate::poly::Poly;
    use crate::ring::build_algebra;

    fn alg(src: &str) -> LocalAlgebra {
        build_algebra(&parse_presentation(src).unwrap()).unwrap()
    }

    fn mat(a: &LocalAlgebra, rows: &[&[&str]]) -> RMatrix {
        let polys: Vec<Vec<Poly>> =
            rows.iter().map(|r| r.iter().map(|s| parse_poly(a.presentation(), s).unwrap()).collect()).collect();
        RMatrix::from_polys(a, &polys).unwrap()
    }

    fn col(a: &LocalAlgebra, c: &[&str]) -> Vec<RingElement> {
        c.iter().map(|s| a.nf(&parse_poly(a.presentation(), s).unwrap())).collect()
    }

    const R1: &str = "ring F 2 [x,y] / (x^2, x*y, y^2) cap 8";
    const R2: &str = "ring F 2 [x,y] / (x*y, x^2) cap 8";

    #[test]
    fn residue_field_over_r1_doubles() {
        let a = alg(R1);
        let k = ModulePresentation::residue_field(&a);
        assert_eq!(betti_numbers(&a, &k, 4).unwrap(), vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn residue_field_over_dual_numbers() {
        let a = alg("ring F 2 [x] / (x^2)");
        let k = ModulePresentation::residue_field(&a);
        let res = minimal_free_resolution(&a, &k, 5).unwrap();
        assert_eq!(res.ranks(), &[1, 1, 1, 1, 1, 1]);
        for d in res.differentials() {
            assert_eq!(d, &mat(&a, &[&["x"]]));
        }
    }

    #[test]
    fn coker_x_over_r2() {
        let a = alg(R2);
        let m = ModulePresentation::new(&a, mat(&a, &[&["x"]])).unwrap();
        assert_eq!(betti_numbers(&a, &m, 3).unwrap(), vec![1, 1, 2, 3]);
    }

    #[test]
    fn syzygy_of_the_maximal_ideal_row() {
        let a = alg(R1);
        let s = syzygy(&a, &mat(&a, &[&["x", "y"]])).unwrap();
        assert_eq!(s.ncols(), 4);
        let mut got = s.columns();
        got.sort_by_key(|c| format!("{c:?}"));
        let mut want = vec![col(&a, &["x", "0"]), col(&a, &["y", "0"]), col(&a, &["0", "x"]), col(&a, &["0", "y"])];
        want.sort_by_key(|c| format!("{c:?}"));
        assert_eq!(got, want);
        let d = alg("ring F 2 [x] / (x^2)");
        assert_eq!(syzygy(&d, &mat(&d, &[&["x"]])).unwrap(), mat(&d, &[&["x"]]));
        let id = RMatrix::identity(&a, 2);
        assert_eq!(syzygy(&a, &id).unwrap().ncols(), 0);
    }

    #[test]
    fn minimal_generator_selection() {
        let a = alg(R1);
        let input = vec![col(&a, &["x", "0", "0"]), col(&a, &["y", "0", "0"]), col(&a, &["x + y", "0", "0"])];
        assert_eq!(minimal_generators(&a, &input).unwrap(), input[..2].to_vec());
        assert!(minimal_generators(&a, &[]).unwrap().is_empty());
        let unit = vec![col(&a, &["1", "0"])];
        assert_eq!(minimal_generators(&a, &unit).unwrap(), unit);
    }

    #[test]
    fn units_are_stripped() {
        let a = alg(R1);
        let m = ModulePresentation::new(&a, mat(&a, &[&["1", "x"], &["y", "x"]])).unwrap();
        // e1 = -y e2, leaving coker[x + y^2] = coker[x]
        assert_eq!(m.generators(), 1);
        assert_eq!(m.relations(), &mat(&a, &[&["x"]]));
        let free = ModulePresentation::free(&a, 3);
        assert_eq!(betti_numbers(&a, &free, 2).unwrap(), vec![3, 0, 0]);
        assert!(free.is_free());
        assert!(!ModulePresentation::residue_field(&a).is_free());
    }

    #[test]
    fn non_graded_input_over_graded_ring_is_rejected() {
        let a = alg(R2);
        assert_eq!(ModulePresentation::new(&a, mat(&a, &[&["x + y^2"]])).unwrap_err(), Error::NotGraded);
    }

    #[test]
    fn finite_and_graded_routes_agree() {
        let a = alg("ring F 3 [x,y] / (x^2, y^3) cap 8");
        let cases: [&[&[&str]]; 3] = [&[&["x", "y^2"]], &[&["x*y"], &["y^2"]], &[&["x", "0"], &["y", "x"]]];
        for rel in cases {
            let m = ModulePresentation::new(&a, mat(&a, rel)).unwrap();
            let graded = minimal_free_resolution(&a, &m, 5).unwrap();
            let plain = ModulePresentation { grading: None, ..m.clone() };
            let finite = minimal_free_resolution(&a, &plain, 5).unwrap();
            assert_eq!(graded.ranks(), finite.ranks());
            assert!(finite.is_complex(&a) && graded.is_complex(&a));
        }
        let m = ModulePresentation::new(&a, mat(&a, &[&["x + y^2"]])).unwrap();
        let res = minimal_free_resolution(&a, &m, 4).unwrap();
        assert!(res.is_complex(&a));
        assert!(res.is_minimal());
    }
}
