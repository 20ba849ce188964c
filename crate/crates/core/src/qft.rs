//! The generalized quantum Fourier transform `F_{M₁M₂→N₁N₂}`, its closed-form
//! Schmidt decomposition indexed by equivalence classes, and
//! communication-cost bounds.
//!
//! Classes live on `Z_{N₂} × Z_{M₂}`. Two points are equivalent when they
//! differ by `(M₁k₁, N₁k₂)` under plain integer addition, so every class is
//! `{(a + M₁k₁, b + N₁k₂)}` cut to the grid, with base `a < M₁`, `b < N₁`.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::schmidt::{
    coefficient_deviation, hartley_strength, is_maximally_entangled, schmidt_decompose, BipartiteOperator,
    BipartiteShape, SchmidtDecomposition,
};
use crate::weyl::root_of_unity;

/// Dimensions of `F_{M₁M₂→N₁N₂}`; requires `M₁M₂ = N₁N₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QftSpec {
    #[serde(rename = "M1")]
    pub m1: usize,
    #[serde(rename = "M2")]
    pub m2: usize,
    #[serde(rename = "N1")]
    pub n1: usize,
    #[serde(rename = "N2")]
    pub n2: usize,
}

impl QftSpec {
    pub fn new(m1: usize, m2: usize, n1: usize, n2: usize) -> Result<Self> {
        if [m1, m2, n1, n2].contains(&0) {
            return Err(Error::Domain("QFT dimensions must be positive".into()));
        }
        if m1 * m2 != n1 * n2 {
            return Err(Error::Domain(format!("M1·M2 = {} ≠ N1·N2 = {}", m1 * m2, n1 * n2)));
        }
        Ok(QftSpec { m1, m2, n1, n2 })
    }

    /// `N = M₁M₂`.
    pub fn size(&self) -> usize {
        self.m1 * self.m2
    }

    /// Input `(M₁, M₂)`, output `(N₁, N₂)`.
    pub fn shape(&self) -> BipartiteShape {
        BipartiteShape::new(self.m1, self.m2, self.n1, self.n2).expect("positive")
    }

    fn check(&self) -> Result<()> {
        Self::new(self.m1, self.m2, self.n1, self.n2).map(|_| ())
    }
}

/// Every spec with `M₁M₂ = N₁N₂ = n`, in lexicographic order.
pub fn factorizations(n: usize) -> Vec<QftSpec> {
    let divisors: Vec<usize> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut out = vec![];
    for &m1 in &divisors {
        for &n1 in &divisors {
            out.push(QftSpec { m1, m2: n / m1, n1, n2: n / n1 });
        }
    }
    out
}

/// Matrix entry `N^{-1/2} exp(2πi (jN₂+k)(ℓM₂+m) / N)` at row `(j, k)`,
/// column `(ℓ, m)`; input split `M₁ ⊗ M₂`, output split `N₁ ⊗ N₂`.
pub fn qft_matrix(spec: &QftSpec) -> Result<BipartiteOperator> {
    spec.check()?;
    let n = spec.size();
    let s = 1.0 / (n as f64).sqrt();
    let m = ComplexMatrix::from_fn(n, n, |x, y| root_of_unity((x * y % n) as i64, n) * s);
    BipartiteOperator::new(spec.shape(), m)
}

pub type Point = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivClass {
    pub base: Point,
    pub members: Vec<Point>,
    pub cardinality: usize,
}

/// The partition of `Z_{N₂} × Z_{M₂}` into classes, sorted by base.
pub fn equiv_classes(spec: &QftSpec) -> Result<Vec<EquivClass>> {
    spec.check()?;
    let (rows, cols) = (spec.n2, spec.m2);
    let mut label = vec![usize::MAX; rows * cols];
    let mut classes: Vec<EquivClass> = vec![];
    for start in 0..rows * cols {
        if label[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = vec![];
        let mut stack = vec![(start / cols, start % cols)];
        label[start] = id;
        while let Some((a, b)) = stack.pop() {
            members.push((a, b));
            let steps = [
                (a.checked_add(spec.m1), Some(b)),
                (a.checked_sub(spec.m1), Some(b)),
                (Some(a), b.checked_add(spec.n1)),
                (Some(a), b.checked_sub(spec.n1)),
            ];
            for (x, y) in steps {
                if let (Some(x), Some(y)) = (x, y) {
                    if x < rows && y < cols && label[x * cols + y] == usize::MAX {
                        label[x * cols + y] = id;
                        stack.push((x, y));
                    }
                }
            }
        }
        members.sort();
        classes.push(EquivClass { base: members[0], cardinality: members.len(), members });
    }
    // scan order already yields classes sorted by their least member
    Ok(classes)
}

/// `A_C` computed from the representative `(ŝ, t̂)`:
/// `(N₁M₁)^{-1/2} exp(2πi/N (N₂M₂jk + M₂kŝ + N₂jt̂))`, an `N₁ × M₁` matrix.
pub fn class_left_factor(spec: &QftSpec, rep: Point) -> ComplexMatrix {
    let n = spec.size();
    let s = C64::new(1.0 / ((spec.n1 * spec.m1) as f64).sqrt(), 0.0);
    ComplexMatrix::from_fn(spec.n1, spec.m1, |j, k| {
        let e = (spec.n2 * spec.m2 * j * k + spec.m2 * k * rep.0 + spec.n2 * j * rep.1) % n;
        root_of_unity(e as i64, n) * s
    })
}

/// `B_C[j, k] = Card(C)^{-1/2} e^{2πijk/N}` on `C`, zero elsewhere; `N₂ × M₂`.
pub fn class_right_factor(spec: &QftSpec, class: &EquivClass) -> ComplexMatrix {
    let n = spec.size();
    let s = C64::new(1.0 / (class.cardinality as f64).sqrt(), 0.0);
    let mut b = ComplexMatrix::zeros(spec.n2, spec.m2);
    for &(j, k) in &class.members {
        b[(j, k)] = root_of_unity((j * k % n) as i64, n) * s;
    }
    b
}

/// `λ_C = √(N₁M₁ Card(C) / N)`.
pub fn class_coefficient(spec: &QftSpec, cardinality: usize) -> f64 {
    ((spec.n1 * spec.m1 * cardinality) as f64 / spec.size() as f64).sqrt()
}

/// Closed-form decomposition `Σ_C λ_C A_C ⊗ B_C`.
pub fn qft_analytic_schmidt(spec: &QftSpec) -> Result<SchmidtDecomposition> {
    let classes = equiv_classes(spec)?;
    let coefficients = classes.iter().map(|c| class_coefficient(spec, c.cardinality)).collect();
    let left = classes.iter().map(|c| class_left_factor(spec, c.base)).collect();
    let right = classes.iter().map(|c| class_right_factor(spec, c)).collect();
    SchmidtDecomposition::new(spec.shape(), coefficients, left, right)
}

/// Largest entrywise difference between `A_C` built from the base and from
/// any other member of the same class.
pub fn representative_spread(spec: &QftSpec) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for class in equiv_classes(spec)? {
        let base = class_left_factor(spec, class.base);
        for &m in &class.members[1..] {
            worst = worst.max((&class_left_factor(spec, m) - &base).max_abs());
        }
    }
    Ok(worst)
}

/// `min(M₁N₁, M₂N₂)`.
pub fn qft_schmidt_number(spec: &QftSpec) -> Result<usize> {
    spec.check()?;
    Ok((spec.m1 * spec.n1).min(spec.m2 * spec.n2))
}

/// `(M₁ | N₂ or M₁ > N₂)` and `(N₁ | M₂ or N₁ > M₂)`.
pub fn qft_is_max_entangled(spec: &QftSpec) -> Result<bool> {
    spec.check()?;
    let first = spec.n2.is_multiple_of(spec.m1) || spec.m1 > spec.n2;
    let second = spec.m2.is_multiple_of(spec.n1) || spec.n1 > spec.m2;
    Ok(first && second)
}

/// A distinct Schmidt coefficient and how many classes carry it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientValue {
    pub value: f64,
    pub cardinality: usize,
    pub multiplicity: usize,
}

/// Distinct coefficients, largest first, grouped by class cardinality.
pub fn qft_coefficient_values(spec: &QftSpec) -> Result<Vec<CoefficientValue>> {
    let mut by_card: BTreeMap<usize, usize> = BTreeMap::new();
    for c in equiv_classes(spec)? {
        *by_card.entry(c.cardinality).or_default() += 1;
    }
    Ok(by_card
        .into_iter()
        .rev()
        .map(|(card, mult)| CoefficientValue { value: class_coefficient(spec, card), cardinality: card, multiplicity: mult })
        .collect())
}

/// The nonzero values `√(N₁M₁ab/N)` with `a ∈ {⌈N₂/M₁⌉, ⌊N₂/M₁⌋}` and
/// `b ∈ {⌈M₂/N₁⌉, ⌊M₂/N₁⌋}`.
pub fn allowed_coefficient_values(spec: &QftSpec) -> Result<Vec<f64>> {
    spec.check()?;
    let a = [spec.n2.div_ceil(spec.m1), spec.n2 / spec.m1];
    let b = [spec.m2.div_ceil(spec.n1), spec.m2 / spec.n1];
    let mut cards: Vec<usize> = a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).filter(|&c| c > 0).collect();
    cards.sort_unstable();
    cards.dedup();
    Ok(cards.into_iter().rev().map(|c| class_coefficient(spec, c)).collect())
}

/// Bracket `lower ≤ Q₀ ≤ upper` on the quantum communication cost in qubits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CommCostBounds {
    /// Hartley strength `log₂ Sch`.
    pub lower: f64,
    /// `log₂ min(dA·dA', dB·dB')`: one party ships its input and receives
    /// its output.
    pub upper: f64,
    pub maximal: bool,
}

/// Bounds for any operator, with `Sch` from the realignment oracle.
pub fn comm_cost_bounds_for(op: &BipartiteOperator, rel_tol: f64) -> Result<CommCostBounds> {
    let d = schmidt_decompose(op, rel_tol)?;
    let lower = hartley_strength(&d);
    let upper = (op.shape().max_schmidt_number() as f64).log2();
    Ok(CommCostBounds { lower, upper, maximal: (upper - lower).abs() <= 1e-12 })
}

pub fn comm_cost_bounds(spec: &QftSpec, rel_tol: f64) -> Result<CommCostBounds> {
    comm_cost_bounds_for(&qft_matrix(spec)?, rel_tol)
}

/// The re-bracketing `(C^{d₁}⊗C^{d₂})⊗C^{d₃} → C^{d₁}⊗(C^{d₂}⊗C^{d₃})` with
/// shape `(d₁d₂, d₃) → (d₁, d₂d₃)`, and its decomposition
/// `Σ_k √(d₁d₃) A_k ⊗ B_k`, `A_k = d₁^{-1/2} Σ_i |i⟩⟨ik|`,
/// `B_k = d₃^{-1/2} Σ_i |ki⟩⟨i|`.
pub fn communication_operator(d1: usize, d2: usize, d3: usize) -> Result<(BipartiteOperator, SchmidtDecomposition)> {
    if [d1, d2, d3].contains(&0) {
        return Err(Error::Domain(format!("communication operator needs positive dimensions, got ({d1},{d2},{d3})")));
    }
    let shape = BipartiteShape::new(d1 * d2, d3, d1, d2 * d3)?;
    let op = BipartiteOperator::new(shape, ComplexMatrix::identity(d1 * d2 * d3))?;
    let (sa, sb) = (C64::new(1.0 / (d1 as f64).sqrt(), 0.0), C64::new(1.0 / (d3 as f64).sqrt(), 0.0));
    let mut left = vec![];
    let mut right = vec![];
    for k in 0..d2 {
        let mut a = ComplexMatrix::zeros(d1, d1 * d2);
        for i in 0..d1 {
            a[(i, i * d2 + k)] = sa;
        }
        let mut b = ComplexMatrix::zeros(d2 * d3, d3);
        for i in 0..d3 {
            b[(k * d3 + i, i)] = sb;
        }
        left.push(a);
        right.push(b);
    }
    let coefficients = vec![((d1 * d3) as f64).sqrt(); d2];
    let dec = SchmidtDecomposition::new(shape, coefficients, left, right)?;
    Ok((op, dec))
}

/// Every check run on one spec, closed form against the oracle.
#[derive(Clone, Debug, Serialize)]
pub struct QftCheck {
    pub spec: QftSpec,
    pub class_count: usize,
    pub schmidt_number: usize,
    pub oracle_rank: usize,
    /// Sorted analytic vs oracle coefficients; `None` if the counts differ.
    pub coefficient_deviation: Option<f64>,
    pub reconstruction_residual: f64,
    pub orthonormality_residual: f64,
    pub representative_spread: f64,
    pub predicate: bool,
    pub oracle_max_entangled: bool,
    pub in_value_set: bool,
    pub distinct_values: usize,
    pub bounds: CommCostBounds,
}

impl QftCheck {
    pub fn passed(&self, tol: f64) -> bool {
        self.class_count == self.schmidt_number
            && self.oracle_rank == self.schmidt_number
            && self.coefficient_deviation.is_some_and(|d| d <= tol)
            && self.reconstruction_residual <= tol
            && self.orthonormality_residual <= 1e-10
            && self.representative_spread <= 1e-12
            && self.predicate == self.oracle_max_entangled
            && self.in_value_set
            && self.distinct_values <= 4
            && self.bounds.maximal
    }
}

pub fn check_spec(spec: &QftSpec, rel_tol: f64) -> Result<QftCheck> {
    let op = qft_matrix(spec)?;
    let oracle = schmidt_decompose(&op, rel_tol)?;
    let analytic = qft_analytic_schmidt(spec)?;
    let allowed = allowed_coefficient_values(spec)?;
    let values = qft_coefficient_values(spec)?;
    let in_value_set = analytic.coefficients().iter().all(|c| allowed.iter().any(|a| (a - c).abs() <= 1e-12));
    let lower = hartley_strength(&oracle);
    let upper = (op.shape().max_schmidt_number() as f64).log2();
    Ok(QftCheck {
        spec: *spec,
        class_count: analytic.len(),
        schmidt_number: qft_schmidt_number(spec)?,
        oracle_rank: oracle.len(),
        coefficient_deviation: coefficient_deviation(analytic.coefficients(), oracle.coefficients()),
        reconstruction_residual: analytic.reconstruction_residual(&op),
        orthonormality_residual: analytic.orthonormality_residual(),
        representative_spread: representative_spread(spec)?,
        predicate: qft_is_max_entangled(spec)?,
        oracle_max_entangled: is_maximally_entangled(&oracle, rel_tol),
        in_value_set,
        distinct_values: values.len(),
        bounds: CommCostBounds { lower, upper, maximal: (upper - lower).abs() <= 1e-12 },
    })
}
