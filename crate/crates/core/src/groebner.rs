//! Buchberger's algorithm over F_p and multivariate division.

use crate::field::Fp;
use crate::poly::{Monomial, Poly};

/// Fully reduces `p` modulo `basis` (every term, not only the leading one).
pub fn reduce(f: &Fp, p: &Poly, basis: &[Poly]) -> Poly {
    reduce_traced(f, p, basis).0
}

/// Division with a trace: returns the remainder and one quotient per basis
/// element, so that `p = sum(q_i * g_i) + remainder`.
pub fn reduce_traced(f: &Fp, p: &Poly, basis: &[Poly]) -> (Poly, Vec<Poly>) {
    let mut quotients = vec![Poly::zero(); basis.len()];
    let mut rest = p.clone();
    let mut remainder = Poly::zero();
    while let Some((lm, lc)) = rest.leading().map(|(m, c)| (m.clone(), c)) {
        let divisor = basis.iter().enumerate().find(|(_, g)| {
            g.leading().map(|(gm, _)| gm.divides(&lm)).unwrap_or(false)
        });
        match divisor {
            Some((i, g)) => {
                let (gm, gc) = g.leading().unwrap();
                let q = gm.quotient_of(&lm);
                let c = f.mul(lc, f.inv(gc));
                rest = rest.sub(f, &g.mul_term(f, &q, c));
                quotients[i].add_term(f, q, c);
            }
            None => {
                rest.terms.remove(&lm);
                remainder.add_term(f, lm, lc);
            }
        }
    }
    (remainder, quotients)
}

fn s_polynomial(f: &Fp, a: &Poly, b: &Poly) -> Poly {
    let (am, ac) = a.leading().unwrap();
    let (bm, bc) = b.leading().unwrap();
    let l = am.lcm(bm);
    let sa = a.mul_term(f, &am.quotient_of(&l), f.inv(ac));
    let sb = b.mul_term(f, &bm.quotient_of(&l), f.inv(bc));
    sa.sub(f, &sb)
}

/// Reduced Gröbner basis of the ideal generated by `gens`, sorted by leading
/// monomial. The zero ideal yields an empty basis; the unit ideal yields `[1]`.
pub fn groebner_basis(f: &Fp, gens: &[Poly]) -> Vec<Poly> {
    let mut basis: Vec<Poly> = Vec::new();
    for g in gens {
        let r = reduce(f, g, &basis);
        if !r.is_zero() {
            basis.push(r.monic(f));
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (am, _) = basis[i].leading().unwrap();
        let (bm, _) = basis[j].leading().unwrap();
        if am.is_coprime(bm) {
            continue;
        }
        let l = am.lcm(bm);
        // chain criterion
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading().unwrap().0.divides(&l)
                && !pairs.contains(&(i.min(k), i.max(k)))
                && !pairs.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(f, &basis[i], &basis[j]);
        let r = reduce(f, &s, &basis);
        if !r.is_zero() {
            let n = basis.len();
            basis.push(r.monic(f));
            for k in 0..n {
                pairs.push((k, n));
            }
        }
    }
    interreduce(f, basis)
}

fn interreduce(f: &Fp, mut basis: Vec<Poly>) -> Vec<Poly> {
    // drop elements whose leading monomial is divisible by another's
    basis.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    let mut minimal: Vec<Poly> = Vec::new();
    for g in basis {
        let lm = g.leading().unwrap().0.clone();
        if !minimal.iter().any(|h| h.leading().unwrap().0.divides(&lm)) {
            minimal.push(g);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let lead = minimal[i].leading().map(|(m, c)| (m.clone(), c)).unwrap();
        let mut tail = minimal[i].clone();
        tail.terms.remove(&lead.0);
        let tail = reduce(f, &tail, &others);
        let mut g = tail;
        g.add_term(f, lead.0, lead.1);
        reduced.push(g.monic(f));
    }
    reduced.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    reduced
}

/// Leading monomials of a basis.
pub fn leading_monomials(basis: &[Poly]) -> Vec<Monomial> {
    basis.iter().filter_map(|g| g.leading().map(|(m, _)| m.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn binomial_ideal_closes_under_s_pairs() {
        // x^2, y^2, xz, yz, xy + z^2 over F_2: the basis must contain z^3
        let f = Fp::new(2).unwrap();
        let t = |e: &[u32]| Poly::term(mono(e), 1);
        let gens = vec![
            t(&[2, 0, 0]),
            t(&[0, 2, 0]),
            t(&[1, 0, 1]),
            t(&[0, 1, 1]),
            t(&[1, 1, 0]).add(&f, &t(&[0, 0, 2])),
        ];
        let gb = groebner_basis(&f, &gens);
        let leads = leading_monomials(&gb);
        assert!(leads.contains(&mono(&[0, 0, 3])));
        assert!(leads.contains(&mono(&[1, 1, 0])));
        // z^2 survives as a standard monomial
        assert!(!leads.iter().any(|l| l.divides(&mono(&[0, 0, 2]))));
    }

    #[test]
    fn unit_ideal() {
        let f = Fp::new(3).unwrap();
        let x = Poly::var(1, 0);
        let g = x.add(&f, &Poly::constant(1, 1));
        let gb = groebner_basis(&f, &[x, g]);
        assert_eq!(gb, vec![Poly::constant(1, 1)]);
    }

    #[test]
    fn division_trace_reconstructs_input() {
        let f = Fp::new(5).unwrap();
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let g1 = x.mul(&f, &x).sub(&f, &y.mul(&f, &y));
        let g2 = x.mul(&f, &y);
        let gb = groebner_basis(&f, &[g1, g2]);
        let p = x.pow(&f, 3).add(&f, &y.pow(&f, 4)).add(&f, &x);
        let (r, qs) = reduce_traced(&f, &p, &gb);
        let mut back = r.clone();
        for (q, g) in qs.iter().zip(&gb) {
            back = back.add(&f, &q.mul(&f, g));
        }
        assert_eq!(back, p);
    }
}
