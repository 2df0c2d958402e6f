mod common;

use common::*;
use frobenius::field::Fp;
use frobenius::groebner;
use frobenius::linalg::MatrixFp;
use frobenius::poly::{Monomial, Poly};
use frobenius::ring::{build_algebra, AlgebraKind, RingPresentation};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nf_is_idempotent(ring in 0..frobenius::corpus::CORPUS.len(), seed: u64) {
        let l = &corpus()[ring];
        let mut rng = rng(seed);
        let p = random_poly(&l.alg, &mut rng, 5);
        let once = l.alg.nf(&p);
        prop_assert_eq!(l.alg.nf(&l.alg.to_poly(&once)), once);
    }

    #[test]
    fn division_trace_is_an_ideal_combination(ring in 0..frobenius::corpus::CORPUS.len(), seed: u64) {
        let l = &corpus()[ring];
        let alg = &l.alg;
        let f = alg.field();
        let p = random_poly(alg, &mut rng(seed), 5);
        let (rem, qs) = groebner::reduce_traced(&f, &p, alg.groebner_basis());
        let mut combo = rem.clone();
        for (q, g) in qs.iter().zip(alg.groebner_basis()) {
            combo = combo.add(&f, &q.mul(&f, g));
        }
        prop_assert_eq!(combo, p.clone());
        if alg.kind() == AlgebraKind::Artinian {
            prop_assert_eq!(alg.nf(&p), alg.nf(&rem));
            prop_assert_eq!(alg.to_poly(&alg.nf(&p)), rem);
        }
    }

    #[test]
    fn monomial_ideal_standard_monomials(n in 1usize..=3, seed: u64) {
        use rand::Rng;
        let mut rng = rng(seed);
        let mut gens: Vec<Monomial> = (0..n).map(|i| Monomial::var(n, i).pow(rng.gen_range(1..=4))).collect();
        for _ in 0..rng.gen_range(0..3) {
            let d = rng.gen_range(1..=4);
            let all = Monomial::all_of_degree(n, d);
            gens.push(all[rng.gen_range(0..all.len())].clone());
        }
        let rels = gens.iter().map(|m| Poly::term(m.clone(), 1)).collect();
        let alg = build_algebra(&RingPresentation::new(2, (0..n).map(|i| format!("v{i}")).collect(), rels, None).unwrap()).unwrap();
        let brute: Vec<Monomial> = (0..=12)
            .flat_map(|d| Monomial::all_of_degree(n, d))
            .filter(|m| !gens.iter().any(|g| g.divides(m)))
            .collect();
        prop_assert_eq!(alg.standard_monomials().to_vec(), brute);
    }
}

#[test]
fn frobenius_is_a_ring_map_on_artinian_corpus() {
    for l in artinian_corpus() {
        let alg = &l.alg;
        let mut rng = rng(1);
        for _ in 0..1000 {
            let a = random_element(alg, &mut rng);
            let b = random_element(alg, &mut rng);
            for r in 1..=2 {
                let fa = alg.frob_power(&a, r);
                let fb = alg.frob_power(&b, r);
                assert_eq!(alg.frob_power(&alg.add(&a, &b), r), alg.add(&fa, &fb), "{}", l.name);
                assert_eq!(alg.frob_power(&alg.mul(&a, &b), r), alg.mul(&fa, &fb), "{}", l.name);
            }
        }
    }
}

/// Gröbner basis elements of a homogeneous ideal lie in the degree-d span
/// of monomial multiples of the original generators.
#[test]
fn groebner_basis_stays_in_the_ideal() {
    for l in corpus() {
        let alg = &l.alg;
        let pres = alg.presentation();
        if !pres.relations.iter().all(Poly::is_homogeneous) {
            continue;
        }
        let f: Fp = alg.field();
        for g in alg.groebner_basis() {
            let d = g.degree().unwrap();
            let monos = Monomial::all_of_degree(pres.nvars(), d);
            let idx = |m: &Monomial| monos.binary_search(m).unwrap();
            let mut cols: Vec<Vec<u32>> = Vec::new();
            for rel in &pres.relations {
                let rd = rel.degree().unwrap();
                if rd > d {
                    continue;
                }
                for m in Monomial::all_of_degree(pres.nvars(), d - rd) {
                    let prod = rel.mul_term(&f, &m, 1);
                    let mut v = vec![0; monos.len()];
                    for (mm, c) in &prod.terms {
                        v[idx(mm)] = *c;
                    }
                    cols.push(v);
                }
            }
            let mut gv = vec![0; monos.len()];
            for (mm, c) in &g.terms {
                gv[idx(mm)] = *c;
            }
            let span = MatrixFp::from_columns(f, monos.len(), &cols);
            let mut with = cols.clone();
            with.push(gv);
            let aug = MatrixFp::from_columns(f, monos.len(), &with);
            assert_eq!(span.rank(), aug.rank(), "{}: {}", l.name, g.format(&pres.vars));
        }
        for rel in &pres.relations {
            assert!(groebner::reduce(&f, rel, alg.groebner_basis()).is_zero());
        }
    }
}
