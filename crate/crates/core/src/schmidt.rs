//! Bipartite operators, the realignment + SVD Schmidt oracle and the
//! entanglement measures built on it.
//!
//! An operator `F: A⊗B → A'⊗B'` is an element of the Hilbert space
//! `B(A→A') ⊗ B(B→B')`. Realignment permutes its entries so that the first
//! tensor factor indexes rows and the second indexes columns:
//!
//! ```text
//! M[(a'·dA + a), (b'·dB + b)] = F[(a'·dB' + b'), (a·dB + b)]
//! ```
//!
//! If `M = Σ σ_k u_k v_k†` then `F = Σ σ_k A_k ⊗ B_k` with `A_k` the `dA'×dA`
//! reshape of `u_k` and `B_k` the `dB'×dB` reshape of `conj(v_k)`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::svd::svd;

/// Relative rank cutoff against the largest singular value.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// Local dimensions of `F: A⊗B → A'⊗B'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteShape {
    pub d_a: usize,
    pub d_b: usize,
    pub d_ap: usize,
    pub d_bp: usize,
}

impl BipartiteShape {
    pub fn new(d_a: usize, d_b: usize, d_ap: usize, d_bp: usize) -> Result<Self> {
        if [d_a, d_b, d_ap, d_bp].contains(&0) {
            return Err(Error::Shape(format!("dimensions must be positive, got {:?}", [d_a, d_b, d_ap, d_bp])));
        }
        Ok(BipartiteShape { d_a, d_b, d_ap, d_bp })
    }

    /// Shape of an operator on `C^dA ⊗ C^dB` (same input and output spaces).
    pub fn square(d_a: usize, d_b: usize) -> Result<Self> {
        Self::new(d_a, d_b, d_a, d_b)
    }

    pub fn dims(&self) -> [usize; 4] {
        [self.d_a, self.d_b, self.d_ap, self.d_bp]
    }

    /// Largest possible Schmidt number, `min(dA·dA', dB·dB')`.
    pub fn max_schmidt_number(&self) -> usize {
        (self.d_a * self.d_ap).min(self.d_b * self.d_bp)
    }
}

/// A linear map `A⊗B → A'⊗B'` as a `dA'·dB' × dA·dB` matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorRepr", into = "OperatorRepr")]
pub struct BipartiteOperator {
    shape: BipartiteShape,
    matrix: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    dims: [usize; 4],
    #[serde(flatten)]
    matrix: ComplexMatrix,
}

impl TryFrom<OperatorRepr> for BipartiteOperator {
    type Error = Error;

    fn try_from(r: OperatorRepr) -> Result<Self> {
        let [a, b, ap, bp] = r.dims;
        BipartiteOperator::new(BipartiteShape::new(a, b, ap, bp)?, r.matrix)
    }
}

impl From<BipartiteOperator> for OperatorRepr {
    fn from(op: BipartiteOperator) -> Self {
        OperatorRepr { dims: op.shape.dims(), matrix: op.matrix }
    }
}

impl BipartiteOperator {
    pub fn new(shape: BipartiteShape, matrix: ComplexMatrix) -> Result<Self> {
        let want = (shape.d_ap * shape.d_bp, shape.d_a * shape.d_b);
        if (matrix.rows(), matrix.cols()) != want {
            return Err(Error::Shape(format!(
                "dims {:?} need a {}x{} matrix, got {}x{}",
                shape.dims(),
                want.0,
                want.1,
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(BipartiteOperator { shape, matrix })
    }

    /// `X ⊗ Y` with the shape read off the factors.
    pub fn product(x: &ComplexMatrix, y: &ComplexMatrix) -> Self {
        let shape = BipartiteShape { d_a: x.cols(), d_b: y.cols(), d_ap: x.rows(), d_bp: y.rows() };
        BipartiteOperator { shape, matrix: x.kron(y) }
    }

    pub fn shape(&self) -> BipartiteShape {
        self.shape
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Operator product `self ∘ rhs`; output spaces of `rhs` must be the
    /// input spaces of `self`.
    pub fn compose(&self, rhs: &BipartiteOperator) -> Result<Self> {
        if (self.shape.d_a, self.shape.d_b) != (rhs.shape.d_ap, rhs.shape.d_bp) {
            return Err(Error::Shape("composition dimension mismatch".into()));
        }
        let shape = BipartiteShape::new(rhs.shape.d_a, rhs.shape.d_b, self.shape.d_ap, self.shape.d_bp)?;
        BipartiteOperator::new(shape, self.matrix.matmul(&rhs.matrix))
    }
}

/// `F = Σ_k λ_k A_k ⊗ B_k` with orthonormal `{A_k}` and `{B_k}`.
#[derive(Clone, Debug, Serialize)]
pub struct SchmidtDecomposition {
    #[serde(skip)]
    shape: BipartiteShape,
    coefficients: Vec<f64>,
    left: Vec<ComplexMatrix>,
    right: Vec<ComplexMatrix>,
}

impl SchmidtDecomposition {
    /// Assemble a decomposition from its terms. Terms are stably sorted into
    /// descending coefficient order, so ties keep their input order.
    pub fn new(
        shape: BipartiteShape,
        coefficients: Vec<f64>,
        left: Vec<ComplexMatrix>,
        right: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        if coefficients.len() != left.len() || coefficients.len() != right.len() {
            return Err(Error::Shape("coefficient and factor counts differ".into()));
        }
        if coefficients.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
            return Err(Error::Domain("Schmidt coefficients must be positive".into()));
        }
        if left.iter().any(|a| (a.rows(), a.cols()) != (shape.d_ap, shape.d_a))
            || right.iter().any(|b| (b.rows(), b.cols()) != (shape.d_bp, shape.d_b))
        {
            return Err(Error::Shape("factor shapes do not match the bipartite shape".into()));
        }
        let mut terms: Vec<_> = coefficients.into_iter().zip(left).zip(right).collect();
        terms.sort_by(|x, y| y.0 .0.total_cmp(&x.0 .0));
        let mut d = SchmidtDecomposition { shape, coefficients: vec![], left: vec![], right: vec![] };
        for ((c, a), b) in terms {
            d.coefficients.push(c);
            d.left.push(a);
            d.right.push(b);
        }
        Ok(d)
    }

    pub fn shape(&self) -> BipartiteShape {
        self.shape
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn left(&self) -> &[ComplexMatrix] {
        &self.left
    }

    pub fn right(&self) -> &[ComplexMatrix] {
        &self.right
    }

    /// The Schmidt number.
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `Σ λ_k A_k ⊗ B_k`.
    pub fn reconstruct(&self) -> BipartiteOperator {
        let s = self.shape;
        let mut m = ComplexMatrix::zeros(s.d_ap * s.d_bp, s.d_a * s.d_b);
        for ((c, a), b) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            m = &m + &a.kron(b).scale(C64::new(*c, 0.0));
        }
        BipartiteOperator { shape: s, matrix: m }
    }

    /// `‖F − Σλ_k A_k⊗B_k‖_HS / ‖F‖_HS`.
    pub fn reconstruction_residual(&self, f: &BipartiteOperator) -> f64 {
        (&f.matrix - &self.reconstruct().matrix).frobenius_norm() / f.matrix.frobenius_norm()
    }

    /// Largest `|⟨X_j, X_k⟩_HS − δ_jk|` over both factor families.
    pub fn orthonormality_residual(&self) -> f64 {
        gram_residual(&self.left).max(gram_residual(&self.right))
    }

    /// `Σ λ_k²`, which equals `‖F‖²_HS`.
    pub fn squared_norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum()
    }
}

/// Largest deviation of the Hilbert–Schmidt Gram matrix from the identity.
pub fn gram_residual(family: &[ComplexMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for (j, x) in family.iter().enumerate() {
        for (k, y) in family.iter().enumerate() {
            let target = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((x.hs_inner(y) - target).norm());
        }
    }
    worst
}

/// The realigned matrix whose SVD is the operator-Schmidt decomposition.
pub fn realign(f: &BipartiteOperator) -> ComplexMatrix {
    let BipartiteShape { d_a, d_b, d_ap, d_bp } = f.shape;
    let m = &f.matrix;
    ComplexMatrix::from_fn(d_ap * d_a, d_bp * d_b, |r, c| {
        let (ap, a) = (r / d_a, r % d_a);
        let (bp, b) = (c / d_b, c % d_b);
        m[(ap * d_bp + bp, a * d_b + b)]
    })
}

/// Operator-Schmidt decomposition via SVD of [`realign`]`(f)`, keeping the
/// singular values above `rel_tol · σ_max`.
pub fn schmidt_decompose(f: &BipartiteOperator, rel_tol: f64) -> Result<SchmidtDecomposition> {
    let s = f.shape;
    let dec = svd(&realign(f));
    let sigma_max = dec.singular_values.first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return Err(Error::UndefinedDecomposition("operator is zero".into()));
    }
    let keep = dec.singular_values.iter().take_while(|&&x| x > rel_tol * sigma_max).count();
    let mut left = Vec::with_capacity(keep);
    let mut right = Vec::with_capacity(keep);
    for k in 0..keep {
        left.push(ComplexMatrix::from_fn(s.d_ap, s.d_a, |i, j| dec.u[(i * s.d_a + j, k)]));
        right.push(ComplexMatrix::from_fn(s.d_bp, s.d_b, |i, j| dec.v[(i * s.d_b + j, k)].conj()));
    }
    SchmidtDecomposition::new(s, dec.singular_values[..keep].to_vec(), left, right)
}

pub fn schmidt_number(f: &BipartiteOperator, rel_tol: f64) -> Result<usize> {
    Ok(schmidt_decompose(f, rel_tol)?.len())
}

/// All `min(d1, d2)` Schmidt coefficients of a vector in `C^d1 ⊗ C^d2`,
/// vanishing ones included, in descending order.
pub fn vector_schmidt_coefficients(psi: &[C64], d1: usize, d2: usize) -> Result<Vec<f64>> {
    if psi.len() != d1 * d2 {
        return Err(Error::Shape(format!("vector of length {} is not in C^{d1} ⊗ C^{d2}", psi.len())));
    }
    // a vector is an operator C⊗C → C^d1⊗C^d2
    let op = BipartiteOperator::new(BipartiteShape::new(1, 1, d1, d2)?, ComplexMatrix::new(d1 * d2, 1, psi.to_vec())?)?;
    Ok(svd(&realign(&op)).singular_values)
}

/// Hartley strength `log₂ Sch(F)`.
pub fn hartley_strength(d: &SchmidtDecomposition) -> f64 {
    (d.len() as f64).log2()
}

/// Schmidt strength: Shannon entropy (bits) of `p_k = λ_k² / Σ λ_j²`.
pub fn schmidt_strength(d: &SchmidtDecomposition) -> f64 {
    let total = d.squared_norm();
    d.coefficients
        .iter()
        .map(|c| c * c / total)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// Full Schmidt number and all coefficients equal to within `rel_tol`.
pub fn is_maximally_entangled(d: &SchmidtDecomposition, rel_tol: f64) -> bool {
    if d.len() != d.shape.max_schmidt_number() {
        return false;
    }
    let max = d.coefficients[0];
    let min = d.coefficients[d.len() - 1];
    max / min - 1.0 <= rel_tol
}

/// The SWAP operator `f⊗g ↦ g⊗f` on `C^n ⊗ C^n`.
pub fn swap(n: usize) -> Result<BipartiteOperator> {
    let shape = BipartiteShape::square(n, n)?;
    let m = ComplexMatrix::from_fn(n * n, n * n, |r, c| {
        let (a, b) = (c / n, c % n);
        if r == b * n + a {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    BipartiteOperator::new(shape, m)
}

/// Largest pairwise difference between two coefficient lists after sorting
/// both in descending order; `None` if their lengths differ.
pub fn coefficient_deviation(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| y.total_cmp(x));
    b.sort_by(|x, y| y.total_cmp(x));
    Some(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}
