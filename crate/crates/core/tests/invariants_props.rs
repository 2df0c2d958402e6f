mod common;

use common::*;
use frobenius::invariants::{c_invariant, condition1, find_regular_sequence, in_power_of_maximal_ideal, power_vanishes, socle};
use frobenius::linalg::MatrixFp;
use frobenius::random::random_artinian_ring;
use frobenius::ring::{build_algebra, LocalAlgebra};

/// Socle dimension by dense linear algebra: the kernel of
/// `g ↦ (x_1 g, …, x_n g)` over the whole basis.
fn brute_socle_dim(alg: &LocalAlgebra) -> usize {
    let n = alg.dim();
    let cols: Vec<Vec<u32>> = (0..n as u32)
        .map(|k| {
            let mut v = vec![0; n * alg.nvars()];
            for i in 0..alg.nvars() {
                for &(b, c) in alg.mul_var(i, k) {
                    v[i * n + b as usize] = c;
                }
            }
            v
        })
        .collect();
    MatrixFp::from_columns(alg.field(), n * alg.nvars(), &cols).kernel_basis().len()
}

fn check_socle(name: &str, alg: &LocalAlgebra) {
    let soc = socle(alg).unwrap();
    assert_eq!(soc.len(), brute_socle_dim(alg), "{name}");
    for g in &soc {
        for i in 0..alg.nvars() {
            assert!(alg.mul(&alg.var(i), g).is_zero(), "{name}");
        }
    }
    let c = c_invariant(alg).unwrap();
    assert!(soc.iter().all(|g| in_power_of_maximal_ideal(alg, g, c - 1)), "{name}: socle not in m^(c-1)");
    assert!(soc.iter().any(|g| !in_power_of_maximal_ideal(alg, g, c)), "{name}: socle inside m^c");
}

#[test]
fn socle_matches_brute_force_on_corpus() {
    for l in artinian_corpus() {
        check_socle(l.name, &l.alg);
    }
}

#[test]
fn socle_matches_brute_force_on_random_rings() {
    let mut rng = rng(77);
    for _ in 0..100 {
        let pres = random_artinian_ring(&mut rng);
        let alg = build_algebra(&pres).unwrap();
        check_socle(&pres.to_string(), &alg);
    }
}

#[test]
fn condition1_implies_depth_zero() {
    for l in corpus() {
        let (c1, _) = condition1(&l.alg).unwrap();
        if c1 {
            assert!(find_regular_sequence(&l.alg, l.alg.nvars()).unwrap().is_empty(), "{}", l.name);
        }
    }
}

#[test]
fn mp_zero_rings_satisfy_condition1_unless_fields() {
    for l in artinian_corpus() {
        if power_vanishes(&l.alg, l.alg.p()) {
            let (c1, note) = condition1(&l.alg).unwrap();
            assert_eq!(c1, !l.alg.is_field(), "{}", l.name);
            if l.alg.is_field() {
                assert!(note.unwrap().contains("regular"));
            }
        }
    }
}
