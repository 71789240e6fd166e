#![allow(dead_code)]

use gfrac::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in the disk of the given radius.
pub fn disk_points(seed: u64, n: usize, radius: f64) -> Vec<Complex> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let rho = radius * r.gen::<f64>().sqrt();
            Complex::from_polar(rho, r.gen::<f64>() * std::f64::consts::TAU)
        })
        .collect()
}

pub fn close(a: Complex, b: Complex, tol: f64) -> bool {
    (a - b).norm() <= tol
}

pub fn rel_close(a: Complex, b: Complex, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}
