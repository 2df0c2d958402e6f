#![allow(dead_code)]

use frobenius::corpus::{self, Loaded};
use frobenius::poly::{Monomial, Poly};
use frobenius::ring::{LocalAlgebra, RingElement};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn corpus() -> Vec<Loaded> {
    corpus::load_all().unwrap()
}

pub fn artinian_corpus() -> Vec<Loaded> {
    corpus().into_iter().filter(|l| l.alg.is_artinian()).collect()
}

/// Random element with support on the basis (all represented degrees).
pub fn random_element<R: Rng>(alg: &LocalAlgebra, rng: &mut R) -> RingElement {
    let p = alg.p();
    let terms = (0..alg.dim() as u32)
        .filter_map(|k| if rng.gen_bool(0.4) { Some((k, rng.gen_range(1..p))) } else { None })
        .collect();
    RingElement { terms, truncated: false }
}

/// Random polynomial of degree ≤ `d` in the ambient polynomial ring.
pub fn random_poly<R: Rng>(alg: &LocalAlgebra, rng: &mut R, d: u32) -> Poly {
    let f = alg.field();
    let n = alg.nvars();
    let mut out = Poly::zero();
    for deg in 0..=d {
        for m in Monomial::all_of_degree(n, deg) {
            if rng.gen_bool(0.3) {
                out.add_term(&f, m, rng.gen_range(1..alg.p()));
            }
        }
    }
    out
}
