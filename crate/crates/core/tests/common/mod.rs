#![allow(dead_code)]

use esd_core::linalg::DenseMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    let data = (0..rows * cols)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    DenseMatrix::new(rows, cols, data).unwrap()
}

/// `G G† / tr` with `G` of the given rank; full rank gives a generic mixed state.
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize, rank: usize) -> DenseMatrix {
    let g = random_complex(rng, dim, rank);
    let rho = &g * &g.dagger();
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr)
}

pub fn random_pure(rng: &mut ChaCha8Rng, dim: usize) -> DenseMatrix {
    let v = random_complex(rng, dim, 1);
    let norm = v.frobenius_norm();
    v.scale_real(1.0 / norm)
}

/// Haar-ish single-qubit unitary from Euler angles.
pub fn random_unitary_2(rng: &mut ChaCha8Rng) -> DenseMatrix {
    let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let b: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let c: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let t: f64 = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
    let e = |x: f64| Complex64::from_polar(1.0, x);
    DenseMatrix::new(
        2,
        2,
        vec![e(a) * t.cos(), e(b) * t.sin(), -e(c - b + a) * t.sin(), e(c) * t.cos()],
    )
    .unwrap()
}
