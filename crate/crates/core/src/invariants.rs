//! Socles, colon ideals, condition (1), the invariants `c` and `c_y`, and
//! regular sequences of linear forms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner;
use crate::linalg::{self, SparseVec};
use crate::poly::{Monomial, Poly};
use crate::ring::{AlgebraKind, LocalAlgebra, RingElement};

/// Kernel of `x ↦ (x g_1, …, x g_k)` on the span of the given basis indices.
fn annihilated(alg: &LocalAlgebra, source: impl Iterator<Item = u32>, gens: &[RingElement]) -> Vec<SparseVec> {
    let n = alg.dim() as u32;
    let source: Vec<u32> = source.collect();
    let imgs = source.iter().map(|&k| {
        let mut v: Vec<(u32, u32)> = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            for (b, c) in alg.mul_wide(&[(k, 1)], &g.terms) {
                v.push((i as u32 * n + b, c));
            }
        }
        v
    });
    linalg::sparse_relations(alg.field(), gens.len() * alg.dim(), imgs)
        .into_iter()
        .map(|rel| {
            let mut v: SparseVec = rel.into_iter().map(|(i, c)| (source[i as usize], c)).collect();
            v.sort_unstable_by_key(|e| e.0);
            v
        })
        .collect()
}

/// A k-basis of `(0 : J)` for `J` generated by `gens`.
///
/// Over a graded non-Artinian algebra the generators must be homogeneous;
/// the colon is computed degree by degree and any element found above the
/// cap `D` but within the working range makes the answer cap dependent.
pub fn colon_into_zero(alg: &LocalAlgebra, gens: &[RingElement]) -> Result<Vec<RingElement>> {
    let gens: Vec<RingElement> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let wrap = |v: SparseVec| RingElement { terms: v, truncated: false };
    match alg.kind() {
        AlgebraKind::Artinian => Ok(annihilated(alg, 0..alg.dim() as u32, &gens).into_iter().map(wrap).collect()),
        AlgebraKind::Truncated => {
            let small = annihilated(alg, 0..alg.dim() as u32, &gens);
            let big = alg.at_cap(alg.stable_cap())?;
            let lifted: Vec<RingElement> = gens.iter().map(|g| big.transfer(alg, g)).collect();
            if annihilated(&big, 0..big.dim() as u32, &lifted).len() != small.len() {
                return Err(Error::CapUnstable);
            }
            Ok(small.into_iter().map(wrap).collect())
        }
        AlgebraKind::Graded => {
            if gens.iter().any(|g| !alg.is_homogeneous_element(g)) {
                return Err(Error::NotGraded);
            }
            let maxdeg = gens.iter().filter_map(|g| alg.degree(g)).max().unwrap_or(0);
            let top = alg.top_degree() as i64 - maxdeg as i64;
            let trusted = alg.cap() as i64 - 1;
            let mut out = Vec::new();
            for d in 0..=top {
                let range = alg.degree_range(d as u32);
                let ker = annihilated(alg, range.start as u32..range.end as u32, &gens);
                if ker.is_empty() {
                    continue;
                }
                if d > trusted {
                    return Err(Error::CapUnstable);
                }
                out.extend(ker.into_iter().map(wrap));
            }
            if top < trusted {
                return Err(Error::CapTooSmall {
                    cap: alg.cap(),
                    reason: format!("generators of degree {maxdeg} leave no room for stabilization"),
                });
            }
            Ok(out)
        }
    }
}

/// The socle `(0 : m)`.
pub fn socle(alg: &LocalAlgebra) -> Result<Vec<RingElement>> {
    let vars: Vec<RingElement> = (0..alg.nvars()).map(|i| alg.var(i)).collect();
    colon_into_zero(alg, &vars)
}

/// Generators of `m^s` as ring elements.
pub fn power_generators(alg: &LocalAlgebra, s: u32) -> Vec<RingElement> {
    Monomial::all_of_degree(alg.nvars(), s)
        .into_iter()
        .map(|m| alg.nf(&Poly::term(m, 1)))
        .filter(|e| !e.is_zero())
        .collect()
}

/// Gröbner basis of `I + m^s`.
fn power_ideal_basis(alg: &LocalAlgebra, s: u32) -> Vec<Poly> {
    let mut gens: Vec<Poly> = alg.groebner_basis().to_vec();
    gens.extend(Monomial::all_of_degree(alg.nvars(), s).into_iter().map(|m| Poly::term(m, 1)));
    groebner::groebner_basis(&alg.field(), &gens)
}

/// `e ∈ m^s`, by ideal membership in `I + m^s`.
pub fn in_power_of_maximal_ideal(alg: &LocalAlgebra, e: &RingElement, s: u32) -> bool {
    let gb = power_ideal_basis(alg, s);
    groebner::reduce(&alg.field(), &alg.to_poly(e), &gb).is_zero()
}

/// `m^s = 0`.
pub fn power_vanishes(alg: &LocalAlgebra, s: u32) -> bool {
    if alg.kind() == AlgebraKind::Graded && s >= alg.cap() {
        return false;
    }
    power_generators(alg, s).is_empty()
}

/// Least `s` with `m^s = 0`, for Artinian algebras.
pub fn nilpotency_index(alg: &LocalAlgebra) -> Option<u32> {
    if !alg.is_artinian() {
        return None;
    }
    (1..=alg.top_degree() + 1).find(|&s| power_vanishes(alg, s))
}

/// Condition (1): `(0 : m^p) ⊄ m^p`. Fields report `false` with a note.
pub fn condition1(alg: &LocalAlgebra) -> Result<(bool, Option<String>)> {
    if alg.is_field() {
        return Ok((false, Some("regular ring (field): condition (1) is not applied".into())));
    }
    let p = alg.p();
    let colon = colon_into_zero(alg, &power_generators(alg, p))?;
    let gb = power_ideal_basis(alg, p);
    let f = alg.field();
    Ok((colon.iter().any(|e| !groebner::reduce(&f, &alg.to_poly(e), &gb).is_zero()), None))
}

/// `c(R)`: least `s ≥ 1` with the socle not contained in `m^s`.
pub fn c_invariant(alg: &LocalAlgebra) -> Result<u32> {
    let soc = socle(alg)?;
    if soc.is_empty() {
        return Err(Error::PositiveDepth);
    }
    let f = alg.field();
    let polys: Vec<Poly> = soc.iter().map(|e| alg.to_poly(e)).collect();
    for s in 1.. {
        let gb = power_ideal_basis(alg, s);
        if polys.iter().any(|p| !groebner::reduce(&f, p, &gb).is_zero()) {
            return Ok(s);
        }
    }
    unreachable!()
}

/// Injectivity of multiplication by `y` on the span of basis monomials of
/// degree below `below`.
fn injective_below(alg: &LocalAlgebra, y: &RingElement, below: i64) -> bool {
    if below <= 0 {
        return true;
    }
    let end = alg.degree_range((below - 1) as u32).end;
    let imgs = (0..end as u32).map(|k| alg.mul_wide(&[(k, 1)], &y.terms));
    linalg::sparse_rank(alg.field(), alg.dim(), imgs) == end
}

/// Whether `y` is a non-zero-divisor. Units are regular; over a non-Artinian
/// algebra multiplication by `y` is tested on the truncation below
/// `D - deg(y)` and again with the stabilization cap.
pub fn is_regular(alg: &LocalAlgebra, y: &RingElement) -> Result<bool> {
    if y.is_zero() {
        return Ok(false);
    }
    if !alg.in_maximal_ideal(y) {
        return Ok(true);
    }
    let deg = alg.degree(y).unwrap() as i64;
    match alg.kind() {
        AlgebraKind::Artinian => Ok(false),
        AlgebraKind::Graded => {
            let small = injective_below(alg, y, alg.cap() as i64 - deg);
            let big = injective_below(alg, y, alg.stable_cap() as i64 - deg);
            if small != big {
                return Err(Error::CapUnstable);
            }
            Ok(small)
        }
        AlgebraKind::Truncated => {
            let small = injective_below(alg, y, alg.cap() as i64 - deg);
            let big_alg = alg.at_cap(alg.stable_cap())?;
            let yb = big_alg.transfer(alg, y);
            let big = injective_below(&big_alg, &yb, big_alg.cap() as i64 - deg);
            if small != big {
                return Err(Error::CapUnstable);
            }
            Ok(small)
        }
    }
}

/// `R/(y)` with the same cap, after checking that `y` is a regular sequence.
pub fn reduce_regular(alg: &LocalAlgebra, ys: &[RingElement]) -> Result<LocalAlgebra> {
    let mut current = alg.clone();
    for y in ys {
        let yc = current.transfer(alg, y);
        if !is_regular(&current, &yc)? {
            return Err(Error::NotRegular);
        }
        current = LocalAlgebra::new(&current.presentation().with_relations(&[alg.to_poly(y)]))?;
    }
    Ok(current)
}

/// Linear forms in the order tried: variables, then every other
/// combination with leading coefficient 1.
fn linear_candidates(alg: &LocalAlgebra) -> Vec<Poly> {
    let n = alg.nvars();
    let p = alg.p() as u64;
    let f = alg.field();
    let mut out: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
    let total = p.saturating_pow(n as u32).min(1 << 16);
    for code in 1..total {
        let mut coeffs = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            coeffs.push((c % p) as u32);
            c /= p;
        }
        let nonzero = coeffs.iter().filter(|&&c| c != 0).count();
        if nonzero < 2 || coeffs.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        let mut poly = Poly::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                poly.add_term(&f, Monomial::var(n, i), c);
            }
        }
        out.push(poly);
    }
    out
}

/// Greedy maximal regular sequence of linear forms (at most `d_max` long).
pub fn find_regular_sequence(alg: &LocalAlgebra, d_max: usize) -> Result<Vec<RingElement>> {
    let mut seq: Vec<RingElement> = Vec::new();
    let mut current = alg.clone();
    let candidates = linear_candidates(alg);
    while seq.len() < d_max {
        let mut found = None;
        for cand in &candidates {
            let y = current.nf(cand);
            if y.is_zero() || !current.in_maximal_ideal(&y) {
                continue;
            }
            if is_regular(&current, &y)? {
                found = Some(cand.clone());
                break;
            }
        }
        let Some(cand) = found else { break };
        seq.push(alg.nf(&cand));
        current = LocalAlgebra::new(&current.presentation().with_relations(&[cand]))?;
    }
    Ok(seq)
}

/// Least `r ≥ 1` with `p^r > c`.
pub fn min_r_threshold(c: u32, p: u32) -> u32 {
    let mut r = 1;
    let mut q = p as u64;
    while q <= c as u64 {
        q *= p as u64;
        r += 1;
    }
    r
}

/// Everything the rigidity statements need to know about a ring.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub ring: String,
    pub kind: AlgebraKind,
    pub local_semantics_approximate: bool,
    pub length: Option<usize>,
    pub condition1: bool,
    pub note: Option<String>,
    pub depth: usize,
    pub depth_at_cap: bool,
    pub regular_sequence: Vec<String>,
    pub c: Option<u32>,
    pub c_y: Option<u32>,
    pub r_threshold: Option<u32>,
    pub socle_dim: Option<usize>,
    pub nilpotency_index: Option<u32>,
    pub mp_zero: bool,
}

impl InvariantReport {
    pub fn compute(alg: &LocalAlgebra) -> Result<Self> {
        let (cond, note) = condition1(alg)?;
        let seq = find_regular_sequence(alg, alg.nvars())?;
        let depth = seq.len();
        let (c, c_y, socle_dim) = if depth == 0 {
            let soc = socle(alg)?;
            (Some(c_invariant(alg)?), None, Some(soc.len()))
        } else {
            let bar = reduce_regular(alg, &seq)?;
            (None, c_invariant(&bar).ok(), None)
        };
        let r_threshold = c.or(c_y).map(|c| min_r_threshold(c, alg.p()));
        Ok(InvariantReport {
            ring: alg.presentation().to_string(),
            kind: alg.kind(),
            local_semantics_approximate: alg.local_semantics_approximate(),
            length: alg.algebra_length().ok(),
            condition1: cond,
            note,
            depth,
            depth_at_cap: !alg.is_artinian(),
            regular_sequence: seq.iter().map(|y| alg.format(y)).collect(),
            c,
            c_y,
            r_threshold,
            socle_dim,
            nilpotency_index: nilpotency_index(alg),
            mp_zero: power_vanishes(alg, alg.p()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, parse_presentation};
    use crate::ring::build_algebra;

    fn alg(src: &str) -> LocalAlgebra {
        build_algebra(&parse_presentation(src).unwrap()).unwrap()
    }

    fn el(a: &LocalAlgebra, s: &str) -> RingElement {
        a.nf(&parse_poly(a.presentation(), s).unwrap())
    }

    const R1: &str = "ring F 2 [x,y] / (x^2, x*y, y^2) cap 8";
    const R2: &str = "ring F 2 [x,y] / (x*y, x^2) cap 8";

    #[test]
    fn colon_examples() {
        let r1 = alg(R1);
        assert_eq!(colon_into_zero(&r1, &power_generators(&r1, 2)).unwrap().len(), 3);
        let r2 = alg(R2);
        let col = colon_into_zero(&r2, &power_generators(&r2, 2)).unwrap();
        assert_eq!(col, vec![el(&r2, "x")]);
        let k = alg("ring F 5 [x] / (x)");
        assert_eq!(colon_into_zero(&k, &[]).unwrap().len(), 1);
    }

    #[test]
    fn condition1_examples() {
        assert!(condition1(&alg(R2)).unwrap().0);
        assert!(condition1(&alg("ring F 2 [x,y,z] / (x^2, x*y, x*z) cap 10")).unwrap().0);
        let (v, note) = condition1(&alg("ring F 2 [x] / (x)")).unwrap();
        assert!(!v);
        assert!(note.unwrap().contains("regular"));
    }

    #[test]
    fn c_examples() {
        assert_eq!(c_invariant(&alg(R1)).unwrap(), 2);
        assert_eq!(c_invariant(&alg(R2)).unwrap(), 2);
        let ex33 = alg("ring F 2 [x,y,z] / (x^2, y^2, x*z, y*z, x*y + z^2, z^3)");
        assert_eq!(socle(&ex33).unwrap().len(), 1);
        assert_eq!(c_invariant(&ex33).unwrap(), 3);
        assert_eq!(c_invariant(&alg("ring F 2 [x,y] / (x^2) cap 8")), Err(Error::PositiveDepth));
    }

    #[test]
    fn regularity_examples() {
        let a = alg("ring F 2 [x,y] / (x^2) cap 8");
        assert!(is_regular(&a, &el(&a, "y")).unwrap());
        assert!(!is_regular(&a, &el(&a, "x")).unwrap());
        let r2 = alg(R2);
        assert!(!is_regular(&r2, &el(&r2, "y")).unwrap());
        let r1 = alg(R1);
        assert!(!is_regular(&r1, &el(&r1, "x")).unwrap());
    }

    #[test]
    fn regular_sequences() {
        assert!(find_regular_sequence(&alg(R1), 2).unwrap().is_empty());
        let a = alg("ring F 2 [x,y] / (x^2) cap 8");
        let seq = find_regular_sequence(&a, 2).unwrap();
        assert_eq!(seq, vec![el(&a, "y")]);
        let bar = reduce_regular(&a, &seq).unwrap();
        assert_eq!(bar.dim(), 2);
        assert_eq!(c_invariant(&bar).unwrap(), 2);
        assert!(find_regular_sequence(&alg("ring F 2 [x,y,z] / (x^2, x*y, x*z) cap 10"), 3).unwrap().is_empty());
        let b = alg("ring F 3 [x,y] / (x^3) cap 8");
        let bar = reduce_regular(&b, &[el(&b, "y")]).unwrap();
        assert_eq!(c_invariant(&bar).unwrap(), 3);
        assert_eq!(reduce_regular(&a, &[el(&a, "x")]).unwrap_err(), Error::NotRegular);
        assert_eq!(reduce_regular(&a, &[]).unwrap().dim(), a.dim());
    }

    #[test]
    fn thresholds() {
        assert_eq!(min_r_threshold(2, 2), 2);
        assert_eq!(min_r_threshold(1, 5), 1);
        assert_eq!(min_r_threshold(3, 2), 2);
        assert_eq!(min_r_threshold(4, 2), 3);
    }

    #[test]
    fn report_for_r2() {
        let rep = InvariantReport::compute(&alg(R2)).unwrap();
        assert!(rep.condition1);
        assert_eq!(rep.depth, 0);
        assert_eq!(rep.c, Some(2));
        assert_eq!(rep.r_threshold, Some(2));
    }
}
