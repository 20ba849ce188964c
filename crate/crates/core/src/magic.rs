//! The gradient `𝒢` of the determinant on `B(H)` and its vectorised companion
//! `𝔇|A⟩⟩ = |𝒢(A)⟩⟩` on `H⊗H*`, with randomized checks of their properties.
//!
//! `𝒢(A) = adj(A)†`, computed from cofactors so it is exact at singular `A`.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{inner, norm, ComplexMatrix};
use crate::random::{random_matrix, random_unit_vector, random_unitary, random_vector, seeded, unimodular, SeededRng};
use crate::schmidt::vector_schmidt_coefficients;

/// `𝒢(A) = adj(A)†` with `adj(A)[i][j] = (−1)^{i+j} det(A without row j, column i)`.
pub fn det_gradient(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::Shape(format!("determinant gradient of {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    let mut g = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            // 𝒢[i][j] = conj(adj[j][i]) = conj((−1)^{i+j} det(minor(i, j)))
            g[(i, j)] = (a.minor(i, j).determinant()? * sign).conj();
        }
    }
    Ok(g)
}

/// `𝔇ψ`: unvectorise, apply [`det_gradient`], vectorise.
pub fn d_map(psi: &[C64]) -> Result<Vec<C64>> {
    let a = ComplexMatrix::from_square_vec(psi)?;
    Ok(det_gradient(&a)?.vectorize())
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyCheck {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub max_residual: f64,
    pub tolerance: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub properties: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }

    pub fn get(&self, id: &str) -> Option<&PropertyCheck> {
        self.properties.iter().find(|p| p.id == id)
    }
}

/// Number of random unit vectors compared against maximally entangled ones
/// in the norm-maximizer check.
pub const SPHERE_SAMPLES: usize = 10_000;

struct Tally {
    id: &'static str,
    name: &'static str,
    tolerance: f64,
    worst: f64,
    samples: usize,
    ok: bool,
}

impl Tally {
    fn new(id: &'static str, name: &'static str, tolerance: f64) -> Self {
        Tally { id, name, tolerance, worst: 0.0, samples: 0, ok: true }
    }

    /// Records a residual that must not exceed the tolerance.
    fn residual(&mut self, r: f64) {
        self.samples += 1;
        self.worst = self.worst.max(r);
        self.ok &= r <= self.tolerance;
    }

    /// Records a sample that has no residual of its own.
    fn require(&mut self, cond: bool) {
        self.samples += 1;
        self.ok &= cond;
    }

    fn finish(self) -> PropertyCheck {
        PropertyCheck {
            id: self.id.into(),
            name: self.name.into(),
            passed: self.ok && self.samples > 0 && self.worst.is_finite(),
            max_residual: self.worst,
            tolerance: self.tolerance,
            samples: self.samples,
        }
    }
}

fn grad(a: &ComplexMatrix) -> ComplexMatrix {
    det_gradient(a).expect("square")
}

fn det(a: &ComplexMatrix) -> C64 {
    a.determinant().expect("square")
}

fn dmap(psi: &[C64]) -> Vec<C64> {
    d_map(psi).expect("square length")
}

fn vec_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn rel_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).frobenius_norm() / b.frobenius_norm().max(1.0)
}

/// `1 − |⟨ψ, φ⟩| / (‖ψ‖‖φ‖)`; zero iff parallel.
fn misalignment(psi: &[C64], phi: &[C64]) -> f64 {
    let denom = norm(psi) * norm(phi);
    if denom == 0.0 {
        return 0.0;
    }
    (1.0 - inner(psi, phi).norm() / denom).max(0.0)
}

fn stream(seed: u64, k: u64) -> SeededRng {
    let mut rng = seeded(seed);
    rng.set_stream(k);
    rng
}

/// Unit vector `N^{-1/2} |e^{iθ} U⟩⟩` with `U` random unitary.
fn max_entangled_sample(rng: &mut SeededRng, n: usize) -> Vec<C64> {
    let u = random_unitary(rng, n).scale(unimodular(rng) / (n as f64).sqrt());
    u.vectorize()
}

/// `|A⟩⟩` with `rank A ≤ r`, normalised.
fn low_rank_sample(rng: &mut SeededRng, n: usize, r: usize) -> Vec<C64> {
    let a = random_matrix(rng, n, r).matmul(&random_matrix(rng, r, n));
    let v = a.vectorize();
    let s = norm(&v);
    v.into_iter().map(|z| z / s).collect()
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Randomized checks of every property of `𝒢` and `𝔇` on `B(C^n)`.
///
/// Failures are reported in the returned checks, never raised.
pub fn check_properties(n: usize, trials: usize, seed: u64) -> Result<PropertyReport> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let mut out = vec![];

    // 1. directional derivative of det matches ⟨𝒢(A), E⟩
    let mut t = Tally::new("1", "gradient vs central finite differences", 1e-5);
    let mut rng = stream(seed, 1);
    for _ in 0..trials {
        let a = random_matrix(&mut rng, n, n);
        let e = random_matrix(&mut rng, n, n);
        let e = e.scale(C64::new(1.0 / e.frobenius_norm(), 0.0));
        let h = 1e-6 * a.frobenius_norm();
        let step = e.scale(C64::new(h, 0.0));
        let fd = (det(&(&a + &step)) - det(&(&a - &step))) / (2.0 * h);
        let exact = grad(&a).hs_inner(&e);
        t.residual((fd - exact).norm() / exact.norm());
    }
    out.push(t.finish());

    // 1'. agreement with ((det A) A⁻¹)† on invertible input
    let mut t = Tally::new("1-inverse", "gradient equals ((det A) A^-1)^dagger", 1e-9);
    for _ in 0..trials {
        let a = random_matrix(&mut rng, n, n);
        let closed = a.inverse()?.scale(det(&a)).adjoint();
        t.residual(rel_diff(&grad(&a), &closed));
    }
    out.push(t.finish());

    // 2. multiplicativity and compatibility with the adjoint
    let mut t = Tally::new("2-product", "G(AB) = G(A) G(B)", 1e-8);
    let mut t2 = Tally::new("2-adjoint", "G(A^dagger) = G(A)^dagger", 1e-12);
    let mut rng = stream(seed, 2);
    for _ in 0..trials {
        let a = random_matrix(&mut rng, n, n);
        let b = random_matrix(&mut rng, n, n);
        t.residual((&grad(&a.matmul(&b)) - &grad(&a).matmul(&grad(&b))).max_abs());
        t2.residual((&grad(&a.adjoint()) - &grad(&a).adjoint()).max_abs());
    }
    out.push(t.finish());
    out.push(t2.finish());

    // 3. 𝔇((A⊗B̄)ψ) = (𝒢(A)⊗conj 𝒢(B)) 𝔇ψ, and its unitary special case
    let mut t = Tally::new("3", "intertwining D((A x conj B) psi) = (G(A) x conj G(B)) D(psi)", 1e-9);
    let mut t2 = Tally::new("3-unitary", "unitary case picks up det(A^dagger B)", 1e-9);
    let mut rng = stream(seed, 3);
    for _ in 0..trials {
        let a = random_matrix(&mut rng, n, n);
        let b = random_matrix(&mut rng, n, n);
        let psi = random_vector(&mut rng, n * n);
        let lhs = dmap(&a.kron(&b.conj()).matvec(&psi));
        let rhs = grad(&a).kron(&grad(&b).conj()).matvec(&dmap(&psi));
        t.residual(vec_diff(&lhs, &rhs) / norm(&rhs).max(1.0));

        let (u, v) = (random_unitary(&mut rng, n), random_unitary(&mut rng, n));
        let lhs = dmap(&u.kron(&v.conj()).matvec(&psi));
        let phase = det(&u.adjoint().matmul(&v));
        let rhs: Vec<C64> = u.kron(&v.conj()).matvec(&dmap(&psi)).into_iter().map(|z| z * phase).collect();
        t2.residual(vec_diff(&lhs, &rhs) / norm(&rhs).max(1.0));
    }
    out.push(t.finish());
    out.push(t2.finish());

    // 4. 𝔇ψ ∥ ψ on maximally entangled ψ; generic ψ are not parallel;
    // rank ≤ N−2 gives 𝔇ψ = 0
    let mut t = Tally::new("4-parallel", "D(psi) parallel to psi iff psi maximally entangled", 1e-10);
    let mut rng = stream(seed, 4);
    for _ in 0..trials {
        let me = max_entangled_sample(&mut rng, n);
        t.residual(misalignment(&me, &dmap(&me)));
        if n >= 2 {
            let generic = random_unit_vector(&mut rng, n * n);
            t.require(misalignment(&generic, &dmap(&generic)) > 1e-6);
        }
        if n >= 3 {
            let low = low_rank_sample(&mut rng, n, n - 2);
            t.require(norm(&dmap(&low)) <= 1e-12);
        }
    }
    out.push(t.finish());

    if n >= 3 {
        // ‖𝔇ψ‖ on the unit sphere peaks at N^{1−N/2}, attained by maximally
        // entangled ψ
        let peak = (n as f64).powf(1.0 - n as f64 / 2.0);
        let mut t = Tally::new("4-maximizer", "max ||D(psi)|| on the unit sphere at maximally entangled psi", 1e-12);
        for _ in 0..trials {
            let me = max_entangled_sample(&mut rng, n);
            t.residual((norm(&dmap(&me)) - peak).abs());
        }
        let mut best = 0.0f64;
        for _ in 0..SPHERE_SAMPLES {
            let psi = random_unit_vector(&mut rng, n * n);
            let d = norm(&dmap(&psi));
            best = best.max(d);
            t.require(d <= peak + 1e-12);
        }
        t.require(best < peak);
        out.push(t.finish());
    }

    // homogeneity 𝔇(cψ) = c̄^{N−1} 𝔇ψ
    let mut t = Tally::new("homogeneity", "D(c psi) = conj(c)^(N-1) D(psi)", 1e-10);
    let mut rng = stream(seed, 7);
    for _ in 0..trials {
        let psi = random_unit_vector(&mut rng, n * n);
        let c = crate::random::gaussian(&mut rng);
        let scaled: Vec<C64> = psi.iter().map(|z| z * c).collect();
        let f = c.conj().powu(n as u32 - 1);
        let rhs: Vec<C64> = dmap(&psi).into_iter().map(|z| z * f).collect();
        t.residual(vec_diff(&dmap(&scaled), &rhs) / norm(&rhs).max(1.0));
    }
    out.push(t.finish());

    // 5. Πλ_k = N⁻¹|⟨ψ, 𝔇ψ⟩|, vanishing coefficients included
    let mut t = Tally::new("5", "product of Schmidt coefficients = |<psi, D psi>| / N", 1e-9);
    let mut rng = stream(seed, 5);
    for k in 0..trials {
        let psi = if k % 2 == 0 || n == 1 {
            random_unit_vector(&mut rng, n * n)
        } else {
            low_rank_sample(&mut rng, n, n - 1)
        };
        let prod: f64 = vector_schmidt_coefficients(&psi, n, n)?.iter().product();
        t.residual((prod - inner(&psi, &dmap(&psi)).norm() / n as f64).abs());
    }
    out.push(t.finish());

    if n == 2 {
        out.extend(two_qubit_checks(trials, seed)?);
    }

    Ok(PropertyReport { n, trials, seed, properties: out })
}

/// Vectors fixed by `𝔇` when `N = 2`: `|A⟩⟩` for `A = I`, `diag(i, −i)`,
/// `[[0, i], [i, 0]]`, `[[0, 1], [−1, 0]]`.
pub fn invariant_vectors() -> [Vec<C64>; 4] {
    let (o, z, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    [vec![o, z, z, o], vec![i, z, z, -i], vec![z, i, i, z], vec![z, o, -o, z]]
}

fn two_qubit_checks(trials: usize, seed: u64) -> Result<Vec<PropertyCheck>> {
    let mut out = vec![];
    let mut rng = stream(seed, 6);

    // 6a. conjugation: antilinear, reverses inner products, squares to id
    let mut anti = Tally::new("6a-antiunitary", "G antilinear and <D phi, D psi> = <psi, phi>", 1e-12);
    let mut invol = Tally::new("6a-involution", "D applied twice is the identity", 1e-12);
    for _ in 0..trials {
        let (a, b) = (random_matrix(&mut rng, 2, 2), random_matrix(&mut rng, 2, 2));
        let (x, y) = (crate::random::gaussian(&mut rng), crate::random::gaussian(&mut rng));
        let lhs = grad(&(&a.scale(x) + &b.scale(y)));
        let rhs = &grad(&a).scale(x.conj()) + &grad(&b).scale(y.conj());
        anti.residual((&lhs - &rhs).max_abs());
        let (phi, psi) = (random_vector(&mut rng, 4), random_vector(&mut rng, 4));
        anti.residual((inner(&dmap(&phi), &dmap(&psi)) - inner(&psi, &phi)).norm());
        invol.residual(vec_diff(&dmap(&dmap(&psi)), &psi));
    }
    out.push(anti.finish());
    out.push(invol.finish());

    // 6b. ψ separable ⟺ ⟨ψ, 𝔇ψ⟩ = 0
    let mut sep = Tally::new("6b", "psi separable iff <psi, D psi> = 0", 1e-10);
    for _ in 0..trials {
        let (x, y) = (random_vector(&mut rng, 2), random_vector(&mut rng, 2));
        let product: Vec<C64> = x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect();
        let s = norm(&product);
        let product: Vec<C64> = product.into_iter().map(|z| z / s).collect();
        sep.residual(inner(&product, &dmap(&product)).norm());
        let generic = random_unit_vector(&mut rng, 4);
        sep.require(inner(&generic, &dmap(&generic)).norm() > 1e-6);
    }
    out.push(sep.finish());

    // 6c. the four listed vectors are fixed and mutually orthogonal
    let mut fixed = Tally::new("6c", "listed vectors are fixed by D and orthogonal", 1e-12);
    let vs = invariant_vectors();
    for (i, v) in vs.iter().enumerate() {
        fixed.residual(vec_diff(&dmap(v), v));
        for (j, w) in vs.iter().enumerate() {
            let want = if i == j { 2.0 } else { 0.0 };
            fixed.residual((inner(v, w) - C64::new(want, 0.0)).norm());
        }
    }
    out.push(fixed.finish());

    // 6d. polar form and preservation of Schmidt coefficients
    let mut polar = Tally::new("6d-polar", "G(e^{i theta} U P) = e^{-i theta} U diag(l2, l1)", 1e-12);
    let mut coeffs = Tally::new("6d-coefficients", "D preserves Schmidt coefficients", 1e-9);
    for _ in 0..trials {
        let u = random_unitary(&mut rng, 2);
        let u = u.scale(det(&u).sqrt().inv());
        let phase = unimodular(&mut rng);
        let (l1, l2) = (crate::random::gaussian(&mut rng).norm(), crate::random::gaussian(&mut rng).norm());
        let p = ComplexMatrix::diag(&[C64::new(l1, 0.0), C64::new(l2, 0.0)]);
        let a = u.matmul(&p).scale(phase);
        let want = u.matmul(&ComplexMatrix::diag(&[C64::new(l2, 0.0), C64::new(l1, 0.0)])).scale(phase.conj());
        polar.residual((&grad(&a) - &want).max_abs());

        let psi = random_vector(&mut rng, 4);
        let before = sorted_desc(vector_schmidt_coefficients(&psi, 2, 2)?);
        let after = sorted_desc(vector_schmidt_coefficients(&dmap(&psi), 2, 2)?);
        coeffs.residual(before.iter().zip(&after).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
    }
    out.push(polar.finish());
    out.push(coeffs.finish());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn gradient_examples() {
        for n in 1..5 {
            assert_eq!(det_gradient(&ComplexMatrix::identity(n)).unwrap(), ComplexMatrix::identity(n));
        }
        let g = det_gradient(&ComplexMatrix::diag(&[c(2.0, 0.0), c(3.0, 0.0)])).unwrap();
        assert_eq!(g, ComplexMatrix::diag(&[c(3.0, 0.0), c(2.0, 0.0)]));
        let (a, b, cc, d) = (c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 4.0), c(2.0, -1.0));
        let m = ComplexMatrix::from_rows(&[vec![a, b], vec![cc, d]]).unwrap();
        let want = ComplexMatrix::from_rows(&[vec![d.conj(), -cc.conj()], vec![-b.conj(), a.conj()]]).unwrap();
        assert!((&det_gradient(&m).unwrap() - &want).max_abs() < 1e-15);
        assert!(matches!(det_gradient(&ComplexMatrix::zeros(2, 3)), Err(Error::Shape(_))));
    }

    #[test]
    fn gradient_at_singular_matrix() {
        // rank N−1 has a rank-one gradient, rank ≤ N−2 a zero gradient
        let a = ComplexMatrix::diag(&[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(det_gradient(&a).unwrap(), ComplexMatrix::diag(&[c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]));
        let a = ComplexMatrix::diag(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(det_gradient(&a).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn d_map_examples() {
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        let bell = vec![o, z, z, o];
        assert_eq!(d_map(&bell).unwrap(), bell);
        let singlet = vec![z, o, -o, z];
        assert_eq!(d_map(&singlet).unwrap(), singlet);
        let sep = vec![o, z, z, z];
        assert_eq!(inner(&sep, &d_map(&sep).unwrap()), z);
        assert!(matches!(d_map(&[o, z, z]), Err(Error::Shape(_))));
    }

    #[test]
    fn property_five_examples() {
        let id = ComplexMatrix::identity(2).vectorize();
        assert!((inner(&id, &d_map(&id).unwrap()).norm() / 2.0 - 1.0).abs() < 1e-15);
        let psi = ComplexMatrix::diag(&[c(1.0, 0.0), c(2.0, 0.0)]).vectorize();
        let pairing = inner(&psi, &d_map(&psi).unwrap());
        assert!((pairing - c(4.0, 0.0)).norm() < 1e-15);
        let prod: f64 = vector_schmidt_coefficients(&psi, 2, 2).unwrap().iter().product();
        assert!((prod - pairing.norm() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn all_properties_hold() {
        for n in [1, 2, 3, 4] {
            let r = check_properties(n, 20, 99).unwrap();
            for p in &r.properties {
                assert!(p.passed, "N={n}: {p:?}");
            }
        }
        let ids: Vec<String> = check_properties(2, 2, 0).unwrap().properties.into_iter().map(|p| p.id).collect();
        for id in ["6a-antiunitary", "6a-involution", "6b", "6c", "6d-polar", "6d-coefficients"] {
            assert!(ids.iter().any(|x| x == id));
        }
    }

    #[test]
    fn report_is_deterministic() {
        let a = serde_json::to_string(&check_properties(3, 5, 11).unwrap()).unwrap();
        let b = serde_json::to_string(&check_properties(3, 5, 11).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn a_wrong_gradient_fails_the_finite_difference_check() {
        // the transpose of adj instead of its adjoint breaks the identity
        let mut rng = seeded(4);
        let a = random_matrix(&mut rng, 3, 3);
        let e = random_matrix(&mut rng, 3, 3);
        let h = 1e-6;
        let fd = (det(&(&a + &e.scale(c(h, 0.0)))) - det(&(&a - &e.scale(c(h, 0.0))))) / (2.0 * h);
        let wrong = grad(&a).conj().hs_inner(&e);
        assert!((fd - wrong).norm() / fd.norm() > 1e-3);
    }
}
