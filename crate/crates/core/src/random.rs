//! Seeded random rings, modules and complexes for the property suites and
//! the witness search.
//!
//! Everything here is graded: rings are presented by homogeneous monomial or
//! binomial relations and matrices have homogeneous entries, so non-Artinian
//! members never need the truncation fallback.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::matrix::RMatrix;
use crate::poly::{Monomial, Poly};
use crate::resolve::{syzygy, FreeComplex, ModulePresentation};
use crate::ring::{LocalAlgebra, RingElement, RingPresentation};

const VARS: [&str; 3] = ["x", "y", "z"];

fn var_names(n: usize) -> Vec<String> {
    VARS[..n].iter().map(|s| s.to_string()).collect()
}

fn monomial(exps: &[u32]) -> Poly {
    Poly::term(Monomial(exps.to_vec()), 1)
}

/// Uniform random element of the degree-`d` graded piece (possibly zero).
/// Degree 0 gives a nonzero scalar.
pub fn random_homogeneous<R: Rng>(alg: &LocalAlgebra, rng: &mut R, d: i64) -> RingElement {
    let p = alg.p();
    if d < 0 || d as u32 > alg.top_degree() {
        return RingElement::zero();
    }
    if d == 0 {
        return alg.constant(rng.gen_range(1..p));
    }
    let range = alg.degree_range(d as u32);
    let terms = range
        .filter_map(|k| {
            let c = rng.gen_range(0..p);
            (c != 0).then_some((k as u32, c))
        })
        .collect();
    RingElement { terms, truncated: false }
}

/// Nonzero random element of degree `d`, if that piece is nonzero.
pub fn random_nonzero_homogeneous<R: Rng>(alg: &LocalAlgebra, rng: &mut R, d: i64) -> Option<RingElement> {
    if d < 0 || d as u32 > alg.top_degree() || alg.degree_range(d as u32).is_empty() {
        return None;
    }
    loop {
        let e = random_homogeneous(alg, rng, d);
        if !e.is_zero() {
            return Some(e);
        }
    }
}

/// `F_p[x_1..x_n]/m^2` with `n ∈ 1..=3`, `p ∈ {2, 3}`.
pub fn random_m2_ring<R: Rng>(rng: &mut R) -> RingPresentation {
    let p = *[2, 3].choose(rng).unwrap();
    let n = rng.gen_range(1..=3);
    let rels = Monomial::all_of_degree(n, 2).into_iter().map(|m| Poly::term(m, 1)).collect();
    RingPresentation::new(p, var_names(n), rels, None).expect("valid presentation")
}

/// Artinian quotient by pure powers of degree 2 or 3 plus up to two extra
/// homogeneous monomial or binomial relations of degree ≤ 3.
pub fn random_artinian_ring<R: Rng>(rng: &mut R) -> RingPresentation {
    let p: u32 = *[2, 3].choose(rng).unwrap();
    let n = rng.gen_range(1..=3);
    let f = crate::field::Fp::new(p as u64).unwrap();
    let mut rels = Vec::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = rng.gen_range(2..=3);
        rels.push(monomial(&e));
    }
    if n > 1 {
        for _ in 0..rng.gen_range(0..=2) {
            let d = rng.gen_range(2..=3);
            let all = Monomial::all_of_degree(n, d);
            let a = all.choose(rng).unwrap().clone();
            let mut rel = Poly::term(a.clone(), 1);
            if rng.gen_bool(0.5) {
                let b = all.choose(rng).unwrap().clone();
                if b != a {
                    rel = rel.add(&f, &Poly::term(b, rng.gen_range(1..p)));
                }
            }
            rels.push(rel);
        }
    }
    RingPresentation::new(p, var_names(n), rels, None).expect("valid presentation")
}

/// `F_p[x,y]/(x^a)`, depth 1, with a cap large enough for twists with
/// `r ≤ r_max`.
pub fn random_depth1_ring<R: Rng>(rng: &mut R, r_max: u32) -> RingPresentation {
    let p: u32 = *[2, 3].choose(rng).unwrap();
    let a = rng.gen_range(2..=3);
    depth1_ring(p, a, r_max)
}

pub fn depth1_ring(p: u32, a: u32, r_max: u32) -> RingPresentation {
    let cap = p.pow(r_max) * a + 2;
    RingPresentation::new(p, var_names(2), vec![monomial(&[a, 0])], Some(cap)).expect("valid presentation")
}

/// A minimized graded module: 1–2 generators in degree 0 or 1 and 1–3
/// homogeneous relation columns of degree 1 or 2 above the lowest generator.
/// Degree-0 entries are units and get stripped by minimization.
pub fn random_module<R: Rng>(alg: &LocalAlgebra, rng: &mut R) -> Result<ModulePresentation> {
    let g = rng.gen_range(1..=2);
    let rows: Vec<i64> = (0..g).map(|_| rng.gen_range(0..=1)).collect();
    let ncols = rng.gen_range(1..=3);
    let columns = (0..ncols)
        .map(|_| {
            let t = rows.iter().min().unwrap() + rng.gen_range(1..=2);
            rows.iter().map(|&s| random_homogeneous(alg, rng, t - s)).collect()
        })
        .collect();
    ModulePresentation::new(alg, RMatrix::from_columns(g, columns))
}

/// Random homogeneous column of degree `t` against row shifts `rows`, with
/// entries in `m` (rows at or above `t` get zero).
fn random_column<R: Rng>(alg: &LocalAlgebra, rng: &mut R, rows: &[i64], t: i64) -> Vec<RingElement> {
    rows.iter().map(|&s| if t - s >= 1 { random_homogeneous(alg, rng, t - s) } else { RingElement::zero() }).collect()
}

/// A random minimal graded free complex `F_0 ← F_1 ← … ← F_len` over a
/// homogeneous algebra. Ranks lie in `0..=3` (so some `F_j` may vanish);
/// columns of `d_{j+1}` are homogeneous combinations of syzygies of `d_j`
/// with entries in `m`.
pub fn random_complex<R: Rng>(alg: &LocalAlgebra, rng: &mut R, len: usize) -> Result<FreeComplex> {
    let l0 = rng.gen_range(1..=2);
    let mut shifts: Vec<Vec<i64>> = vec![vec![0; l0]];
    let mut diffs: Vec<RMatrix> = Vec::new();
    for j in 0..len {
        let rows = shifts[j].clone();
        let want = rng.gen_range(0..=3);
        let mut columns = Vec::new();
        let mut col_shifts = Vec::new();
        if j == 0 || rows.is_empty() || diffs[j - 1].ncols() == 0 {
            let base = rows.iter().copied().max().unwrap_or(j as i64);
            for _ in 0..want {
                for _ in 0..10 {
                    let t = base + rng.gen_range(1..=2);
                    let col = random_column(alg, rng, &rows, t);
                    if rows.is_empty() || col.iter().any(|e| !e.is_zero()) {
                        columns.push(col);
                        col_shifts.push(t);
                        break;
                    }
                }
            }
        } else {
            let prev = &diffs[j - 1];
            let k = syzygy(alg, prev)?;
            let (_, kdeg) = k.grading(alg, Some(&rows)).expect("syzygies of a graded map are graded");
            let kcols = k.columns();
            for _ in 0..want {
                if kcols.is_empty() {
                    break;
                }
                for _ in 0..10 {
                    let pick: Vec<usize> = (0..kcols.len()).filter(|_| rng.gen_bool(0.5)).collect();
                    if pick.is_empty() {
                        continue;
                    }
                    let t = pick.iter().map(|&i| kdeg[i]).max().unwrap() + rng.gen_range(0..=1);
                    let mut col = vec![RingElement::zero(); rows.len()];
                    for &i in &pick {
                        let a = random_homogeneous(alg, rng, t - kdeg[i]);
                        for (c, e) in col.iter_mut().zip(&kcols[i]) {
                            *c = alg.add(c, &alg.mul(&a, e));
                        }
                    }
                    if col.iter().any(|e| !e.is_zero()) && col.iter().all(|e| alg.in_maximal_ideal(e)) {
                        columns.push(col);
                        col_shifts.push(t);
                        break;
                    }
                }
            }
        }
        diffs.push(RMatrix::from_columns(rows.len(), columns));
        shifts.push(col_shifts);
    }
    FreeComplex::new(alg, l0, diffs, Some(shifts))
}

/// A module of projective dimension ≤ 1 over `F_p[x,y]/(x^a)`: cokernel of an
/// upper-triangular matrix whose diagonal entries `y^b + c·x·y^(b-1)` are
/// non-zerodivisors, optionally padded with a unit column on an extra
/// generator so that minimization has something to strip.
pub fn random_finite_pd_module<R: Rng>(alg: &LocalAlgebra, rng: &mut R) -> Result<ModulePresentation> {
    let p = alg.p();
    let size = rng.gen_range(1..=3);
    let degs: Vec<u32> = (0..size).map(|_| rng.gen_range(1..=2)).collect();
    let mut cols: Vec<Vec<RingElement>> = Vec::new();
    for (k, &b) in degs.iter().enumerate() {
        let c = rng.gen_range(0..p);
        let mut diag = monomial(&[0, b]);
        if c != 0 {
            diag = diag.add(&alg.field(), &Poly::term(Monomial(vec![1, b - 1]), c));
        }
        let mut col = Vec::with_capacity(size);
        for i in 0..size {
            col.push(match i.cmp(&k) {
                std::cmp::Ordering::Less => random_homogeneous(alg, rng, b as i64),
                std::cmp::Ordering::Equal => alg.nf(&diag),
                std::cmp::Ordering::Greater => RingElement::zero(),
            });
        }
        cols.push(col);
    }
    let mut rows = size;
    if rng.gen_bool(0.5) {
        rows += 1;
        for col in &mut cols {
            col.push(RingElement::zero());
        }
        let mut unit: Vec<RingElement> = (0..size).map(|_| random_homogeneous(alg, rng, 1)).collect();
        unit.push(alg.one());
        cols.push(unit);
    }
    // The extra generator sits in degree 1 so the unit column is graded.
    ModulePresentation::new(alg, RMatrix::from_columns(rows, cols))
}
