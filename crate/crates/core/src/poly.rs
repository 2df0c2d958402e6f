//! Sparse multivariate polynomials over F_p under the graded reverse-lex order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::field::Fp;

/// Exponent vector. Ordered by graded reverse-lexicographic order with the
/// declared variable order (x_1 > x_2 > ... > x_n).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Index of the single variable if this is a pure power `x_i^e`, e ≥ 1.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }

    pub fn format(&self, vars: &[String]) -> String {
        let mut parts = Vec::new();
        for (name, &e) in vars.iter().zip(&self.0) {
            match e {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// All monomials of total degree exactly `d` in `nvars` variables.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(0, d, &mut vec![0; nvars], &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            if a != b {
                // smaller exponent in the last differing variable is larger
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial as a map from monomials to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    pub terms: BTreeMap<Monomial, u32>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(nvars: usize, c: u32) -> Self {
        Poly::term(Monomial::one(nvars), c)
    }

    pub fn term(m: Monomial, c: u32) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Poly::term(Monomial::var(nvars, i), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&Monomial, u32)> {
        self.terms.iter().next_back().map(|(m, c)| (m, *c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Smallest total degree of a term (the m-adic order), if nonzero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn constant_term(&self) -> u32 {
        self.terms
            .iter()
            .next()
            .filter(|(m, _)| m.degree() == 0)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add_term(&mut self, f: &Fp, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, f: &Fp, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(f, m.clone(), *c);
        }
        out
    }

    pub fn sub(&self, f: &Fp, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(f, m.clone(), f.neg(*c));
        }
        out
    }

    pub fn scale(&self, f: &Fp, c: u32) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), f.mul(*a, c))).collect(),
        }
    }

    pub fn mul_term(&self, f: &Fp, m: &Monomial, c: u32) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), f.mul(*a, c))).collect(),
        }
    }

    pub fn mul(&self, f: &Fp, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                out.add_term(f, m.mul(n), f.mul(*a, *b));
            }
        }
        out
    }

    pub fn pow(&self, f: &Fp, e: u64) -> Poly {
        let nvars = self.terms.keys().next().map(Monomial::nvars).unwrap_or(0);
        let mut acc = Poly::constant(nvars, 1);
        for _ in 0..e {
            acc = acc.mul(f, self);
        }
        acc
    }

    /// Makes the leading coefficient 1.
    pub fn monic(&self, f: &Fp) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => self.scale(f, f.inv(c)),
        }
    }

    /// Canonical text: terms in decreasing graded reverse-lex order.
    pub fn format(&self, vars: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            let mono = m.format(vars);
            if m.degree() == 0 {
                let _ = write!(s, "{c}");
            } else if *c == 1 {
                s.push_str(&mono);
            } else {
                let _ = write!(s, "{c}*{mono}");
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn grevlex_order() {
        // degree first
        assert!(m(&[0, 2]) > m(&[1, 0]));
        // x*y > z^2 in three variables (smaller last exponent wins)
        assert!(m(&[1, 1, 0]) > m(&[0, 0, 2]));
        assert!(m(&[2, 0, 0]) > m(&[1, 1, 0]));
        assert!(m(&[1, 1, 0]) > m(&[0, 2, 0]));
        assert!(m(&[0, 2, 0]) > m(&[1, 0, 1]));
    }

    #[test]
    fn characteristic_two_squares() {
        let f = Fp::new(2).unwrap();
        let s = Poly::var(2, 0).add(&f, &Poly::var(2, 1));
        let sq = s.mul(&f, &s);
        let expect = Poly::term(m(&[2, 0]), 1).add(&f, &Poly::term(m(&[0, 2]), 1));
        assert_eq!(sq, expect);
    }

    #[test]
    fn all_of_degree_counts() {
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(2, 5).len(), 6);
        assert_eq!(Monomial::all_of_degree(1, 0).len(), 1);
    }

    #[test]
    fn formatting() {
        let f = Fp::new(3).unwrap();
        let vars = vec!["x".to_string(), "y".to_string()];
        let p = Poly::term(m(&[1, 1]), 2).add(&f, &Poly::constant(2, 1));
        assert_eq!(p.format(&vars), "2*x*y + 1");
    }
}
