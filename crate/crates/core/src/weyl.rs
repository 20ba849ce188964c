//! Weyl shift/twist operators, the vectorisation `B(H) ≅ H⊗H*`, the 2-D
//! discrete Fourier transform, and the Fourier-analytic Schmidt decomposition
//! of operators diagonal in the maximally entangled basis
//! `Φ_αβ = N^{-1/2} |T^α R^{-β}⟩⟩`.
//!
//! `H*` is modelled as `C^N` in the conjugated basis: the matrix of `B̄` acting
//! on `H*` is the entrywise conjugate of the matrix of `B`. With that choice
//! `(A ⊗ B̄)|C⟩⟩ = |A C B†⟩⟩` is a literal matrix identity and `|A⟩⟩` is the
//! row-major flattening of `A`.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::schmidt::{BipartiteOperator, BipartiteShape, SchmidtDecomposition};

/// `exp(2πi k / n)` with `k` reduced modulo `n` first.
pub fn root_of_unity(k: i64, n: usize) -> C64 {
    let r = k.rem_euclid(n as i64);
    // quarter turns are returned exactly
    if (4 * r) % n as i64 == 0 {
        return [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)]
            [(4 * r / n as i64) as usize];
    }
    C64::from_polar(1.0, TAU * r as f64 / n as f64)
}

/// The right shift `R|j⟩ = |j+1 mod N⟩` and twist `T|j⟩ = e^{2πij/N}|j⟩`.
#[derive(Clone, Debug)]
pub struct WeylPair {
    pub n: usize,
    pub shift: ComplexMatrix,
    pub twist: ComplexMatrix,
}

pub fn weyl_pair(n: usize) -> Result<WeylPair> {
    if n == 0 {
        return Err(Error::Domain("Weyl pair needs N ≥ 1".into()));
    }
    Ok(WeylPair { n, shift: weyl_operator(n, 1, 0), twist: weyl_operator(n, 0, 1) })
}

/// `R^a T^b`, i.e. `|j⟩ ↦ e^{2πi b j/N} |j + a⟩`, for any integers `a`, `b`.
pub fn weyl_operator(n: usize, a: i64, b: i64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let row = (j as i64 + a).rem_euclid(n as i64) as usize;
        m[(row, j)] = root_of_unity(b * j as i64, n);
    }
    m
}

/// `T^α R^{-β}`, i.e. `|j⟩ ↦ e^{2πi α (j−β)/N} |j − β⟩`.
pub fn twist_shift(n: usize, alpha: i64, beta: i64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let target = (j as i64 - beta).rem_euclid(n as i64);
        m[(target as usize, j)] = root_of_unity(alpha * target, n);
    }
    m
}

/// The natural isomorphism `A ↦ |A⟩⟩ ∈ H⊗H*`; coordinates in the basis
/// `|j⟩⊗|k̄⟩` are `A[j,k]`.
pub fn vec_iso(a: &ComplexMatrix) -> Result<Vec<C64>> {
    if !a.is_square() {
        return Err(Error::Shape(format!("vec_iso needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    Ok(a.vectorize())
}

/// A complex function on `Z_N²`, stored row-major in `α`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct GridFunction {
    n: usize,
    values: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    #[serde(rename = "N")]
    n: usize,
    values: Vec<C64>,
}

impl TryFrom<GridRepr> for GridFunction {
    type Error = Error;

    fn try_from(r: GridRepr) -> Result<Self> {
        GridFunction::new(r.n, r.values)
    }
}

impl From<GridFunction> for GridRepr {
    fn from(g: GridFunction) -> Self {
        GridRepr { n: g.n, values: g.values }
    }
}

impl GridFunction {
    pub fn new(n: usize, values: Vec<C64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::Shape(format!("grid function on Z_{n}² needs {} values, got {}", n * n, values.len())));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("grid function values must be finite".into()));
        }
        Ok(GridFunction { n, values })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let values = (0..n * n).map(|i| f(i / n, i % n)).collect();
        GridFunction { n, values }
    }

    /// `λ(x, y) = f(x) g(y)`.
    pub fn tensor(f: &[C64], g: &[C64]) -> Result<Self> {
        if f.len() != g.len() {
            return Err(Error::Shape("tensor factors must live on the same Z_N".into()));
        }
        Ok(Self::from_fn(f.len(), |x, y| f[x] * g[y]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn get(&self, alpha: usize, beta: usize) -> C64 {
        self.values[alpha * self.n + beta]
    }

    /// The `N×N` matrix whose `(j,k)` entry is `λ(j,k)`.
    pub fn as_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, self.n, |j, k| self.get(j, k))
    }

    pub fn is_unimodular(&self, tol: f64) -> bool {
        self.values.iter().all(|z| (z.norm() - 1.0).abs() <= tol)
    }

    /// Indices `(a, b)` with `|λ(a,b)| > tol`, in lexicographic order.
    pub fn support(&self, tol: f64) -> Vec<(usize, usize)> {
        (0..self.n * self.n)
            .filter(|&i| self.values[i].norm() > tol)
            .map(|i| (i / self.n, i % self.n))
            .collect()
    }
}

fn fourier2(lambda: &GridFunction, sign: i64) -> GridFunction {
    let n = lambda.n;
    let scale = 1.0 / n as f64;
    GridFunction::from_fn(n, |a, b| {
        let mut acc = C64::new(0.0, 0.0);
        for alpha in 0..n {
            for beta in 0..n {
                let k = sign * (alpha * a + beta * b) as i64;
                acc += root_of_unity(k, n) * lambda.get(alpha, beta);
            }
        }
        acc * scale
    })
}

/// `λ̂(a,b) = N⁻¹ Σ_{α,β} e^{2πi(αa+βb)/N} λ(α,β)`; unitary on `ℓ²(Z_N²)`.
pub fn dft2(lambda: &GridFunction) -> GridFunction {
    fourier2(lambda, 1)
}

/// Inverse of [`dft2`]: same `1/N` factor, conjugate kernel.
pub fn idft2(lambda_hat: &GridFunction) -> GridFunction {
    fourier2(lambda_hat, -1)
}

/// The maximally entangled orthonormal basis `Φ_αβ` of `H⊗H*`, indexed
/// `α·N + β`.
#[derive(Clone, Debug)]
pub struct PhiBasis {
    pub n: usize,
    pub vectors: Vec<Vec<C64>>,
}

impl PhiBasis {
    pub fn vector(&self, alpha: usize, beta: usize) -> &[C64] {
        &self.vectors[alpha * self.n + beta]
    }
}

pub fn phi_basis(n: usize) -> Result<PhiBasis> {
    if n == 0 {
        return Err(Error::Domain("Φ basis needs N ≥ 1".into()));
    }
    let s = 1.0 / (n as f64).sqrt();
    let vectors = (0..n * n)
        .map(|i| {
            let m = twist_shift(n, (i / n) as i64, (i % n) as i64);
            m.vectorize().into_iter().map(|z| z * s).collect()
        })
        .collect();
    Ok(PhiBasis { n, vectors })
}

/// `D = Σ λ(α,β) |Φ_αβ⟩⟨Φ_αβ|` on `H⊗H*`, as an operator of shape
/// `(N, N) → (N, N)`.
pub fn diag_from_lambda(lambda: &GridFunction) -> BipartiteOperator {
    let n = lambda.n;
    let basis = phi_basis(n.max(1)).expect("n ≥ 1");
    let dim = n * n;
    let mut d = ComplexMatrix::zeros(dim, dim);
    for (idx, phi) in basis.vectors.iter().enumerate() {
        let l = lambda.values[idx];
        if l == C64::new(0.0, 0.0) {
            continue;
        }
        for r in 0..dim {
            let lr = l * phi[r];
            if lr == C64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..dim {
                d[(r, c)] += lr * phi[c].conj();
            }
        }
    }
    let shape = BipartiteShape::square(n, n).expect("n ≥ 1");
    BipartiteOperator::new(shape, d).expect("shape matches")
}

/// Closed-form Schmidt decomposition of [`diag_from_lambda`]`(λ)`:
/// coefficients `|λ̂(a,b)|`, left factors `(λ̂/|λ̂|) N^{-1/2} R^a T^b`, right
/// factors `conj(N^{-1/2} R^a T^b)`. Terms with `|λ̂| ≤ rel_tol · max|λ̂|`
/// are dropped; ties are ordered lexicographically in `(a, b)`.
pub fn analytic_schmidt(lambda: &GridFunction, rel_tol: f64) -> Result<SchmidtDecomposition> {
    let n = lambda.n;
    let hat = dft2(lambda);
    let max = hat.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::UndefinedDecomposition("λ̂ vanishes identically".into()));
    }
    let s = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut coefficients = vec![];
    let mut left = vec![];
    let mut right = vec![];
    for (a, b) in hat.support(rel_tol * max) {
        let h = hat.get(a, b);
        let w = weyl_operator(n, a as i64, b as i64).scale(s);
        coefficients.push(h.norm());
        left.push(w.scale(h / h.norm()));
        right.push(w.conj());
    }
    SchmidtDecomposition::new(BipartiteShape::square(n, n)?, coefficients, left, right)
}
