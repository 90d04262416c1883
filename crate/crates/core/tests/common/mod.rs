#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rexi_core::integrate::OracleDecomposition;
use rexi_core::spatial::SystemMatrices;
use rexi_core::C64;

/// Dense symmetric `A` and SPD `B` of size `n`, with `τ` chosen so that
/// `τ · max|ω| = target`.
pub fn random_system(rng: &mut ChaCha8Rng, n: usize, target: f64) -> (SystemMatrices, f64) {
    let g = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let b = g.transpose() * &g / n as f64 + DMatrix::identity(n, n);
    let h = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let a = (&h + h.transpose()) * 0.5;
    let sys = SystemMatrices::from_dense(&a, &b).unwrap();
    let sr = OracleDecomposition::new(&sys, n).unwrap().spectral_radius();
    (sys, target / sr)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}
