mod common;

use common::rng;
use frobenius::corpus;
use frobenius::invariants::find_regular_sequence;
use frobenius::matrix::RMatrix;
use frobenius::random::random_module;
use frobenius::resolve::{minimal_free_resolution, ModulePresentation};
use proptest::prelude::*;
use rand::seq::SliceRandom;

const RINGS: &[&str] = &["ex31", "ex32", "ex33", "r1", "dual", "f3xy", "f5xy", "f3m3", "depth1"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn resolutions_are_minimal_complexes(ring in 0..RINGS.len(), seed: u64) {
        let l = corpus::load(RINGS[ring]).unwrap();
        let alg = &l.alg;
        let m = random_module(alg, &mut rng(seed)).unwrap();
        let res = minimal_free_resolution(alg, &m, 4).unwrap();
        prop_assert!(res.is_complex(alg));
        prop_assert!(res.is_minimal());
        for d in res.differentials() {
            prop_assert!(d.entries().all(|e| alg.residue(e) == 0));
        }
        prop_assert_eq!(res.differential(1), m.relations());
    }

    #[test]
    fn depth_zero_ranks_vanish_only_for_free_modules(ring in 0..RINGS.len(), seed: u64) {
        let l = corpus::load(RINGS[ring]).unwrap();
        let alg = &l.alg;
        prop_assume!(find_regular_sequence(alg, alg.nvars()).unwrap().is_empty());
        let m = random_module(alg, &mut rng(seed)).unwrap();
        let res = minimal_free_resolution(alg, &m, 4).unwrap();
        if res.ranks()[1..].contains(&0) {
            prop_assert!(m.is_free());
        }
    }

    #[test]
    fn ranks_ignore_generator_order(ring in 0..RINGS.len(), seed: u64) {
        let l = corpus::load(RINGS[ring]).unwrap();
        let alg = &l.alg;
        let mut rng = rng(seed);
        let m = random_module(alg, &mut rng).unwrap();
        let rel = m.relations();
        let mut perm: Vec<usize> = (0..rel.nrows()).collect();
        perm.shuffle(&mut rng);
        let cols = rel.columns().into_iter().map(|c| perm.iter().map(|&i| c[i].clone()).collect()).collect();
        let permuted = ModulePresentation::new(alg, RMatrix::from_columns(rel.nrows(), cols)).unwrap();
        let a = minimal_free_resolution(alg, &m, 4).unwrap();
        let b = minimal_free_resolution(alg, &permuted, 4).unwrap();
        prop_assert_eq!(a.ranks(), b.ranks());
    }
}
