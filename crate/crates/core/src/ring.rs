//! Ring presentations and exact arithmetic in `R = F_p[x_1..x_n]/I`.
//!
//! Elements are stored as normal forms over the standard monomials of the
//! reduced Gröbner basis. Non-Artinian algebras keep a finite view: the
//! standard monomials of degree below a working cap.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::groebner;
use crate::linalg::{self, SparseVec};
use crate::parse::DEFAULT_CAP;
use crate::poly::{Monomial, Poly};

/// A ring presentation `F_p[vars]/(relations)` with degree cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    pub p: u32,
    pub vars: Vec<String>,
    pub relations: Vec<Poly>,
    pub cap: u32,
}

impl RingPresentation {
    pub fn new(p: u32, vars: Vec<String>, relations: Vec<Poly>, cap: Option<u32>) -> Result<Self> {
        Fp::new(p as u64).ok_or(Error::NotPrime(p as u64))?;
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::DuplicateVariable(v.clone()));
            }
        }
        let relations: Vec<Poly> = relations.into_iter().filter(|r| !r.is_zero()).collect();
        for r in &relations {
            if r.constant_term() != 0 {
                return Err(Error::UnitRelation(r.format(&vars)));
            }
        }
        let cap = cap.unwrap_or(DEFAULT_CAP);
        if cap < 2 {
            return Err(Error::CapTooSmall { cap, reason: "the cap must be at least 2".into() });
        }
        Ok(RingPresentation { p, vars, relations, cap })
    }

    pub fn field(&self) -> Fp {
        Fp::new(self.p as u64).expect("validated at construction")
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn with_cap(&self, cap: u32) -> RingPresentation {
        RingPresentation { cap, ..self.clone() }
    }

    pub fn with_relations(&self, extra: &[Poly]) -> RingPresentation {
        let mut relations = self.relations.clone();
        relations.extend(extra.iter().filter(|r| !r.is_zero()).cloned());
        RingPresentation { relations, ..self.clone() }
    }

    pub fn max_relation_degree(&self) -> u32 {
        self.relations.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relations.iter().map(|r| r.format(&self.vars)).collect();
        write!(f, "ring F {} [{}] / ({}) cap {}", self.p, self.vars.join(","), rels.join(", "), self.cap)
    }
}

/// How the finite basis of an algebra relates to the ring it models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlgebraKind {
    /// Finite-dimensional quotient; the basis is complete.
    Artinian,
    /// Homogeneous relations, infinite-dimensional; computations run degree
    /// by degree and only degrees below the working cap are represented.
    Graded,
    /// Non-homogeneous, infinite-dimensional; replaced by the Artinian
    /// truncation `R/(I + m^D)`. Local semantics are approximate.
    Truncated,
}

/// A normal-form element: sparse coefficients over the standard monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RingElement {
    pub terms: SparseVec,
    /// Set when monomials at or above the degree cap were dropped.
    pub truncated: bool,
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn from_terms(terms: SparseVec) -> Self {
        RingElement { terms, truncated: false }
    }
}

/// `R = F_p[x_1..x_n]/I` with its Gröbner data and standard-monomial basis.
#[derive(Debug, Clone)]
pub struct LocalAlgebra {
    pres: RingPresentation,
    f: Fp,
    gb: Vec<Poly>,
    leads: Vec<Monomial>,
    kind: AlgebraKind,
    homogeneous: bool,
    cap: u32,
    work_cap: u32,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
    /// `degree_start[d]..degree_start[d+1]` are the basis indices of degree `d`.
    degree_start: Vec<usize>,
    var_mult: Vec<Vec<SparseVec>>,
    table: Option<Vec<Vec<SparseVec>>>,
}

const TABLE_LIMIT: usize = 400;

impl LocalAlgebra {
    /// Builds the algebra: reduced Gröbner basis, standard monomials and the
    /// Artinian flag.
    pub fn new(pres: &RingPresentation) -> Result<Self> {
        let f = pres.field();
        let n = pres.nvars();
        let cap = pres.cap;
        let maxdeg = pres.max_relation_degree();
        if maxdeg >= cap {
            return Err(Error::CapTooSmall {
                cap,
                reason: format!("it must exceed the maximum relation degree {maxdeg}"),
            });
        }
        let gb = groebner::groebner_basis(&f, &pres.relations);
        if gb.iter().any(|g| g.degree() == Some(0)) {
            return Err(Error::ZeroRing);
        }
        let leads = groebner::leading_monomials(&gb);
        let homogeneous = gb.iter().all(Poly::is_homogeneous);
        let artinian = (0..n).all(|i| leads.iter().any(|m| m.pure_power_var() == Some(i)));

        let (kind, gb, leads, work_cap) = if artinian {
            (AlgebraKind::Artinian, gb, leads, u32::MAX)
        } else if homogeneous {
            (AlgebraKind::Graded, gb, leads, 2 * cap - 2)
        } else {
            let mut gens = pres.relations.clone();
            gens.extend(Monomial::all_of_degree(n, cap).into_iter().map(|m| Poly::term(m, 1)));
            let gb = groebner::groebner_basis(&f, &gens);
            let leads = groebner::leading_monomials(&gb);
            (AlgebraKind::Truncated, gb, leads, u32::MAX)
        };

        // standard monomials form an order ideal: grow them degree by degree
        let mut basis = vec![Monomial::one(n)];
        let mut degree_start = vec![0, 1];
        let mut current = vec![Monomial::one(n)];
        let mut d = 0u32;
        while !current.is_empty() && d + 1 < work_cap {
            let mut next: Vec<Monomial> = Vec::new();
            for m in &current {
                for i in 0..n {
                    let mut e = m.clone();
                    e.0[i] += 1;
                    if !leads.iter().any(|l| l.divides(&e)) && !next.contains(&e) {
                        next.push(e);
                    }
                }
            }
            next.sort();
            basis.extend(next.iter().cloned());
            degree_start.push(basis.len());
            current = next;
            d += 1;
        }
        // trailing empty degrees are dropped so `top_degree` is meaningful
        while degree_start.len() > 2 && degree_start[degree_start.len() - 1] == degree_start[degree_start.len() - 2] {
            degree_start.pop();
        }
        let index: HashMap<Monomial, u32> =
            basis.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();

        let mut alg = LocalAlgebra {
            pres: pres.clone(),
            f,
            gb,
            leads,
            kind,
            homogeneous,
            cap,
            work_cap,
            basis,
            index,
            degree_start,
            var_mult: Vec::new(),
            table: None,
        };
        alg.var_mult = (0..n)
            .map(|i| {
                let x = Monomial::var(n, i);
                (0..alg.basis.len()).map(|k| alg.reduce_monomial(&alg.basis[k].mul(&x))).collect()
            })
            .collect();
        if alg.basis.len() <= TABLE_LIMIT {
            let dim = alg.basis.len();
            let table = (0..dim)
                .map(|a| (0..dim).map(|b| alg.reduce_monomial(&alg.basis[a].mul(&alg.basis[b]))).collect())
                .collect();
            alg.table = Some(table);
        }
        Ok(alg)
    }

    pub fn presentation(&self) -> &RingPresentation {
        &self.pres
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    pub fn p(&self) -> u32 {
        self.f.p()
    }

    pub fn nvars(&self) -> usize {
        self.pres.nvars()
    }

    pub fn groebner_basis(&self) -> &[Poly] {
        &self.gb
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn is_artinian(&self) -> bool {
        self.kind == AlgebraKind::Artinian
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    /// Whether the algebra's local behavior may differ from the polynomial
    /// quotient it is built from (non-homogeneous relations).
    pub fn local_semantics_approximate(&self) -> bool {
        !self.homogeneous
    }

    /// Whether the finite basis is the whole algebra (possibly after the
    /// documented truncation), so computations need no degree windows.
    pub fn is_finite(&self) -> bool {
        self.kind != AlgebraKind::Graded
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// Stabilization cap `2D - 2`.
    pub fn stable_cap(&self) -> u32 {
        2 * self.cap - 2
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// Standard monomials of degree below the cap `D` (the whole basis when
    /// the algebra is finite).
    pub fn standard_monomials(&self) -> &[Monomial] {
        match self.kind {
            AlgebraKind::Graded => &self.basis[..self.degree_range(self.cap.saturating_sub(1)).end.min(self.basis.len())],
            _ => &self.basis,
        }
    }

    /// Largest degree with a basis monomial.
    pub fn top_degree(&self) -> u32 {
        (self.degree_start.len() - 2) as u32
    }

    /// Basis indices of the given degree (empty beyond the represented range).
    pub fn degree_range(&self, d: u32) -> std::ops::Range<usize> {
        let d = d as usize;
        if d + 1 >= self.degree_start.len() {
            let end = *self.degree_start.last().unwrap();
            return end..end;
        }
        self.degree_start[d]..self.degree_start[d + 1]
    }

    pub fn basis_degree(&self, k: u32) -> u32 {
        self.basis[k as usize].degree()
    }

    pub fn monomial_index(&self, m: &Monomial) -> Option<u32> {
        self.index.get(m).copied()
    }

    /// Normal form of a monomial as a sparse vector over the basis.
    fn reduce_monomial(&self, m: &Monomial) -> SparseVec {
        if self.kind == AlgebraKind::Graded && m.degree() >= self.work_cap {
            return Vec::new();
        }
        if let Some(&i) = self.index.get(m) {
            return vec![(i, 1)];
        }
        if self.leads.iter().any(|l| l.divides(m)) && self.gb.iter().all(|g| g.terms.len() == 1) {
            return Vec::new();
        }
        let r = groebner::reduce(&self.f, &Poly::term(m.clone(), 1), &self.gb);
        self.poly_terms(&r, self.work_cap).0
    }

    fn poly_terms(&self, p: &Poly, below: u32) -> (SparseVec, bool) {
        let mut dropped = false;
        let mut v: Vec<(u32, u32)> = Vec::new();
        for (m, c) in &p.terms {
            if m.degree() >= below {
                dropped = true;
                continue;
            }
            match self.index.get(m) {
                Some(&i) => v.push((i, *c)),
                None => dropped = true,
            }
        }
        (linalg::normalize(&self.f, v), dropped)
    }

    /// Product of two basis monomials.
    pub fn mul_basis(&self, a: u32, b: u32) -> SparseVec {
        if let Some(t) = &self.table {
            return t[a as usize][b as usize].clone();
        }
        self.reduce_monomial(&self.basis[a as usize].mul(&self.basis[b as usize]))
    }

    /// `x_i * basis[k]`.
    pub fn mul_var(&self, i: usize, k: u32) -> &SparseVec {
        &self.var_mult[i][k as usize]
    }

    /// Unique normal form of a polynomial. In non-Artinian algebras monomials
    /// of degree at least `D` are dropped and the element is flagged.
    pub fn nf(&self, p: &Poly) -> RingElement {
        let r = groebner::reduce(&self.f, p, &self.gb);
        let below = match self.kind {
            AlgebraKind::Graded => self.cap,
            _ => u32::MAX,
        };
        let (terms, truncated) = self.poly_terms(&r, below);
        RingElement { terms, truncated }
    }

    /// Like [`nf`](Self::nf) but keeps degrees up to the working cap.
    pub(crate) fn nf_wide(&self, p: &Poly) -> RingElement {
        let r = groebner::reduce(&self.f, p, &self.gb);
        let (terms, truncated) = self.poly_terms(&r, self.work_cap);
        RingElement { terms, truncated }
    }

    pub fn to_poly(&self, e: &RingElement) -> Poly {
        let mut p = Poly::zero();
        for &(i, c) in &e.terms {
            p.add_term(&self.f, self.basis[i as usize].clone(), c);
        }
        p
    }

    pub fn format(&self, e: &RingElement) -> String {
        self.to_poly(e).format(&self.pres.vars)
    }

    pub fn one(&self) -> RingElement {
        RingElement::from_terms(vec![(0, 1)])
    }

    pub fn constant(&self, c: u32) -> RingElement {
        let c = c % self.f.p();
        if c == 0 {
            RingElement::zero()
        } else {
            RingElement::from_terms(vec![(0, c)])
        }
    }

    pub fn var(&self, i: usize) -> RingElement {
        self.nf(&Poly::var(self.nvars(), i))
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement { terms: linalg::axpy(&self.f, &a.terms, 1, &b.terms), truncated: a.truncated || b.truncated }
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement {
            terms: linalg::axpy(&self.f, &a.terms, self.f.neg(1), &b.terms),
            truncated: a.truncated || b.truncated,
        }
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        self.scale(a, self.f.neg(1))
    }

    pub fn scale(&self, a: &RingElement, c: u32) -> RingElement {
        RingElement { terms: linalg::scale(&self.f, &a.terms, c % self.f.p()), truncated: a.truncated }
    }

    /// Product, truncated below `D` in non-Artinian algebras.
    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let wide = self.mul_wide(&a.terms, &b.terms);
        self.clip(wide, a.truncated || b.truncated)
    }

    fn clip(&self, terms: SparseVec, truncated: bool) -> RingElement {
        if self.kind != AlgebraKind::Graded {
            return RingElement { terms, truncated };
        }
        let limit = self.degree_range(self.cap).start as u32;
        let before = terms.len();
        let terms: SparseVec = terms.into_iter().filter(|(i, _)| *i < limit).collect();
        let truncated = truncated || terms.len() != before;
        RingElement { terms, truncated }
    }

    /// Product of sparse vectors over the whole working basis.
    pub fn mul_wide(&self, a: &[(u32, u32)], b: &[(u32, u32)]) -> SparseVec {
        let mut acc: Vec<(u32, u32)> = Vec::new();
        for &(i, ca) in a {
            for &(j, cb) in b {
                let c = self.f.mul(ca, cb);
                for (k, v) in self.mul_basis(i, j) {
                    acc.push((k, self.f.mul(c, v)));
                }
            }
        }
        linalg::normalize(&self.f, acc)
    }

    pub fn pow(&self, a: &RingElement, e: u64) -> RingElement {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `e^(p^r)`: the r-th iterate of the Frobenius endomorphism.
    pub fn frob_power(&self, e: &RingElement, r: u32) -> RingElement {
        let (terms, dropped) = self.frob_terms(e, r);
        self.clip(terms, e.truncated || dropped)
    }

    /// Like [`frob_power`](Self::frob_power) but keeps degrees up to the
    /// working cap; `None` if a term falls beyond it.
    pub fn frob_power_wide(&self, e: &RingElement, r: u32) -> Option<RingElement> {
        let (terms, dropped) = self.frob_terms(e, r);
        (!dropped).then_some(RingElement { terms, truncated: e.truncated })
    }

    fn frob_terms(&self, e: &RingElement, r: u32) -> (SparseVec, bool) {
        // in characteristic p, (sum c_i m_i)^p = sum c_i m_i^p with c_i^p = c_i
        let q = (self.p() as u64).pow(r);
        let below = match self.kind {
            AlgebraKind::Graded => self.work_cap as u64,
            _ => u64::MAX,
        };
        let mut dropped = false;
        let mut acc: Vec<(u32, u32)> = Vec::new();
        for &(i, c) in &e.terms {
            let m = &self.basis[i as usize];
            if m.degree() as u64 * q >= below {
                dropped = true;
                continue;
            }
            for (k, v) in self.reduce_monomial(&m.pow(q as u32)) {
                acc.push((k, self.f.mul(c, v)));
            }
        }
        (linalg::normalize(&self.f, acc), dropped)
    }

    /// Length of R, i.e. its F_p-dimension.
    pub fn algebra_length(&self) -> Result<usize> {
        if !self.is_artinian() {
            return Err(Error::NotArtinian);
        }
        Ok(self.basis.len())
    }

    pub fn is_field(&self) -> bool {
        self.is_artinian() && self.basis.len() == 1
    }

    /// Constant term (the image in the residue field).
    pub fn residue(&self, e: &RingElement) -> u32 {
        e.terms.first().filter(|(i, _)| *i == 0).map(|(_, c)| *c).unwrap_or(0)
    }

    pub fn in_maximal_ideal(&self, e: &RingElement) -> bool {
        self.residue(e) == 0
    }

    /// Least degree of a term, `None` for zero.
    pub fn order(&self, e: &RingElement) -> Option<u32> {
        e.terms.first().map(|(i, _)| self.basis_degree(*i))
    }

    /// Largest degree of a term, `None` for zero.
    pub fn degree(&self, e: &RingElement) -> Option<u32> {
        e.terms.iter().map(|(i, _)| self.basis_degree(*i)).max()
    }

    pub fn is_homogeneous_element(&self, e: &RingElement) -> bool {
        self.order(e) == self.degree(e)
    }

    /// Multiplicative inverse of a unit (nonzero residue), when the basis is
    /// finite or the element is a constant.
    pub fn inverse(&self, e: &RingElement) -> Option<RingElement> {
        let c = self.residue(e);
        if c == 0 {
            return None;
        }
        let cinv = self.f.inv(c);
        // e = c(1 - n) with n nilpotent: e^{-1} = c^{-1} sum n^k
        let unit = self.scale(e, cinv);
        let nil = self.sub(&self.one(), &unit);
        if nil.is_zero() {
            return Some(self.constant(cinv));
        }
        if self.kind == AlgebraKind::Graded {
            return None;
        }
        let mut acc = self.one();
        let mut power = nil.clone();
        while !power.is_zero() {
            acc = self.add(&acc, &power);
            power = self.mul(&power, &nil);
        }
        Some(self.scale(&acc, cinv))
    }

    /// Same presentation with a different cap.
    pub fn at_cap(&self, cap: u32) -> Result<LocalAlgebra> {
        LocalAlgebra::new(&self.pres.with_cap(cap))
    }

    /// Transfers an element written over another algebra with the same
    /// variables (e.g. into a quotient).
    pub fn transfer(&self, from: &LocalAlgebra, e: &RingElement) -> RingElement {
        self.nf_wide(&from.to_poly(e))
    }
}

/// Builds the algebra of a presentation.
pub fn build_algebra(pres: &RingPresentation) -> Result<LocalAlgebra> {
    LocalAlgebra::new(pres)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, parse_presentation};

    fn alg(src: &str) -> LocalAlgebra {
        build_algebra(&parse_presentation(src).unwrap()).unwrap()
    }

    fn el(a: &LocalAlgebra, s: &str) -> RingElement {
        a.nf(&parse_poly(a.presentation(), s).unwrap())
    }

    fn names(a: &LocalAlgebra) -> Vec<String> {
        a.standard_monomials().iter().map(|m| m.format(&a.presentation().vars)).collect()
    }

    #[test]
    fn r1_is_artinian_of_length_three() {
        let a = alg("ring F 2 [x,y] / (x^2, x*y, y^2) cap 8");
        assert_eq!(a.kind(), AlgebraKind::Artinian);
        assert_eq!(names(&a), vec!["1", "y", "x"]);
        assert_eq!(a.algebra_length().unwrap(), 3);
    }

    #[test]
    fn r2_is_truncated_graded() {
        let a = alg("ring F 2 [x,y] / (x*y, x^2) cap 8");
        assert_eq!(a.kind(), AlgebraKind::Graded);
        let mut expect = vec!["1".to_string(), "y".into(), "x".into()];
        for e in 2..8 {
            expect.push(format!("y^{e}"));
        }
        assert_eq!(names(&a), expect);
        assert_eq!(a.algebra_length(), Err(Error::NotArtinian));
    }

    #[test]
    fn quotient_by_variable_is_the_field() {
        let a = alg("ring F 2 [x] / (x)");
        assert_eq!(names(&a), vec!["1"]);
        assert!(a.is_field());
        assert_eq!(a.algebra_length().unwrap(), 1);
        let b = alg("ring F 2 [x] / (x^2)");
        assert_eq!(b.algebra_length().unwrap(), 2);
    }

    #[test]
    fn normal_form_examples() {
        let r1 = alg("ring F 2 [x,y] / (x^2, x*y, y^2) cap 8");
        assert_eq!(el(&r1, "x^2 + x"), el(&r1, "x"));
        let r2 = alg("ring F 2 [x,y] / (x*y, x^2) cap 8");
        assert_eq!(el(&r2, "y*x + y^3"), el(&r2, "y^3"));
        assert!(el(&r2, "0").is_zero());
        let high = el(&r2, "y^9 + y");
        assert!(high.truncated);
        assert_eq!(high.terms, el(&r2, "y").terms);
    }

    #[test]
    fn frobenius_examples() {
        let r1 = alg("ring F 2 [x,y] / (x^2, x*y, y^2) cap 8");
        assert!(r1.frob_power(&el(&r1, "x + y"), 1).is_zero());
        let r2 = alg("ring F 2 [x,y] / (x*y, x^2) cap 8");
        assert_eq!(r2.frob_power(&el(&r2, "y"), 1), el(&r2, "y^2"));
        assert_eq!(r2.frob_power(&r2.one(), 3), r2.one());
    }

    #[test]
    fn zero_ring_and_small_cap_rejected() {
        let p = parse_presentation("ring F 3 [x,y] / (x - y^2, x) cap 6").unwrap();
        // x = y^2 and x = 0 gives y^2 = 0: fine
        assert!(build_algebra(&p).is_ok());
        let p = parse_presentation("ring F 2 [x,y] / (x^3, y^2) cap 3").unwrap();
        assert!(matches!(build_algebra(&p), Err(Error::CapTooSmall { .. })));
    }

    #[test]
    fn non_homogeneous_infinite_is_truncated() {
        let a = alg("ring F 3 [x,y] / (x - y^2) cap 5");
        assert_eq!(a.kind(), AlgebraKind::Truncated);
        assert!(a.local_semantics_approximate());
        // x = y^2 so the basis is 1, y, y^2 (=x), y^3, y^4
        assert_eq!(a.dim(), 5);
    }

    #[test]
    fn inverse_of_units() {
        let a = alg("ring F 3 [x] / (x^4)");
        let u = el(&a, "1 + x");
        let v = a.inverse(&u).unwrap();
        assert_eq!(a.mul(&u, &v), a.one());
        assert!(a.inverse(&el(&a, "x")).is_none());
    }
}
