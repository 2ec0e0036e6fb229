#![allow(dead_code)]

pub mod oracle;

use nmc::DenseMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(seed: u64, n: usize) -> DenseMatrix {
    let mut r = rng(seed);
    DenseMatrix::from_fn(n, n, |_, _| r.gen_range(-1.0..1.0))
}

pub fn random_symmetric(seed: u64, n: usize) -> DenseMatrix {
    let x = random_matrix(seed, n);
    DenseMatrix::from_fn(n, n, |i, j| x[(i.min(j), i.max(j))])
}

pub fn random_skew(seed: u64, n: usize) -> DenseMatrix {
    let x = random_matrix(seed, n);
    DenseMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => x[(i, j)],
        std::cmp::Ordering::Greater => -x[(j, i)],
        std::cmp::Ordering::Equal => 0.0,
    })
}

pub fn random_pixels(seed: u64, n: usize) -> DenseMatrix {
    let mut r = rng(seed);
    DenseMatrix::from_fn(n, n, |_, _| f64::from(r.gen_range(0u8..=255)))
}

/// Smooth-ish test image: a gradient plus a few bumps plus noise, like a
/// natural photograph at small scale.
pub fn natural_pixels(seed: u64, n: usize) -> DenseMatrix {
    let mut r = rng(seed);
    let cx: f64 = r.gen_range(0.2..0.8);
    let cy: f64 = r.gen_range(0.2..0.8);
    DenseMatrix::from_fn(n, n, |i, j| {
        let (y, x) = (i as f64 / n as f64, j as f64 / n as f64);
        let bump = (-((x - cx).powi(2) + (y - cy).powi(2)) * 12.0).exp();
        let v = 60.0 + 90.0 * x + 40.0 * y * y + 80.0 * bump + r.gen_range(-6.0..6.0);
        v.round().clamp(0.0, 255.0)
    })
}

pub fn rel_frobenius(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.sub(b).unwrap().frobenius_norm() / b.frobenius_norm().max(1.0)
}
