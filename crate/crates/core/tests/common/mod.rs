#![allow(dead_code)]

use msface_core::imaging::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, w: usize, h: usize) -> Matrix {
    Matrix::from_fn(w, h, |_, _| rng.random::<f64>())
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| (rng.random::<f64>() - 0.5) * 2.0 * scale).collect()
}
