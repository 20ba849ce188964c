//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
//!
//! Columns of the working copy are rotated pairwise until mutually orthogonal;
//! the column norms are then the singular values. This is slower than
//! bidiagonalisation but attains high relative accuracy, which is what the
//! Schmidt-coefficient comparisons need. Matrices here are at most a few
//! hundred on a side.

use num_complex::Complex64 as C64;

use crate::matrix::ComplexMatrix;

const MAX_SWEEPS: usize = 80;

/// Thin SVD `A = U·diag(σ)·V†` with `k = min(m, n)` singular triplets in
/// descending order of `σ`.
///
/// Columns of `u` belonging to zero singular values are zero vectors.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
    pub sweeps: usize,
}

pub fn svd(a: &ComplexMatrix) -> Svd {
    if a.rows() >= a.cols() {
        jacobi_tall(a)
    } else {
        // A† = U' Σ V'†  ⇒  A = V' Σ U'†
        let t = jacobi_tall(&a.adjoint());
        Svd { u: t.v, singular_values: t.singular_values, v: t.u, sweeps: t.sweeps }
    }
}

pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    svd(a).singular_values
}

fn jacobi_tall(a: &ComplexMatrix) -> Svd {
    let (m, n) = (a.rows(), a.cols());
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let mut vcols: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).collect())
        .collect();

    let tol = f64::EPSILON * m.max(1) as f64;
    // columns below this squared norm carry only rounding noise
    let floor = (f64::EPSILON * a.frobenius_norm()).powi(2) * 1e-4;

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                if alpha <= floor || beta <= floor {
                    continue;
                }
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, phase, c, s);
                rotate(&mut vcols, p, q, phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> =
        cols.iter().enumerate().map(|(j, col)| (col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));

    let mut u = ComplexMatrix::zeros(m, n);
    let mut v = ComplexMatrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (k, &(sigma, j)) in order.iter().enumerate() {
        singular_values.push(sigma);
        if sigma > 0.0 {
            for i in 0..m {
                u[(i, k)] = cols[j][i] / sigma;
            }
        }
        for i in 0..n {
            v[(i, k)] = vcols[j][i];
        }
    }
    Svd { u, singular_values, v, sweeps }
}

/// Applies `b_q = e·a_q`, then `(a_p, b_q) ← (c·a_p − s·b_q, s·a_p + c·b_q)`.
fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, phase: C64, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let b = *y * phase;
        let xp = *x;
        *x = xp * c - b * s;
        *y = xp * s + b * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_matrix, seeded};

    fn reconstruct(s: &Svd) -> ComplexMatrix {
        let k = s.singular_values.len();
        let sig = ComplexMatrix::diag(&s.singular_values.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>());
        assert_eq!(sig.rows(), k);
        s.u.matmul(&sig).matmul(&s.v.adjoint())
    }

    #[test]
    fn reconstructs_tall_and_wide() {
        let mut rng = seeded(7);
        for &(m, n) in &[(5, 3), (3, 5), (6, 6), (1, 4), (4, 1)] {
            let a = random_matrix(&mut rng, m, n);
            let s = svd(&a);
            assert!((&reconstruct(&s) - &a).max_abs() < 1e-13, "{m}x{n}");
            assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
            assert!(s.v.unitarity_residual() < 1e-13);
            assert!(s.u.unitarity_residual() < 1e-13);
        }
    }

    #[test]
    fn diagonal_known_values() {
        let a = ComplexMatrix::diag(&[C64::new(0.0, 3.0), C64::new(-1.0, 0.0), C64::new(0.0, 0.0)]);
        let s = singular_values(&a);
        assert!((s[0] - 3.0).abs() < 1e-15 && (s[1] - 1.0).abs() < 1e-15 && s[2] == 0.0);
    }

    #[test]
    fn rank_one_has_one_nonzero_value() {
        let mut rng = seeded(3);
        let x = random_matrix(&mut rng, 6, 1);
        let y = random_matrix(&mut rng, 1, 5);
        let s = singular_values(&x.matmul(&y));
        let expected = x.frobenius_norm() * y.frobenius_norm();
        assert!((s[0] - expected).abs() < 1e-13 * expected);
        assert!(s[1..].iter().all(|&v| v < 1e-13 * expected));
    }
}
