//! Seeded random samples used by the randomized property checks.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{norm, ComplexMatrix};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian sample.
pub fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn unimodular(rng: &mut impl Rng) -> C64 {
    C64::from_polar(1.0, TAU * rng.random::<f64>())
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_vector(rng: &mut impl Rng, len: usize) -> Vec<C64> {
    (0..len).map(|_| gaussian(rng)).collect()
}

pub fn random_unit_vector(rng: &mut impl Rng, len: usize) -> Vec<C64> {
    let v = random_vector(rng, len);
    let n = norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

/// Haar-ish unitary from modified Gram–Schmidt on a Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n, n);
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..n).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..n {
        for k in 0..j {
            let proj: C64 = cols[k].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
            let (done, rest) = cols.split_at_mut(j);
            for (x, y) in rest[0].iter_mut().zip(&done[k]) {
                *x -= proj * y;
            }
        }
        let nrm = norm(&cols[j]);
        cols[j].iter_mut().for_each(|z| *z /= nrm);
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}
