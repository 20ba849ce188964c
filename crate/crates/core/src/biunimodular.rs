//! Biunimodular functions on `Z_N`: the Gaussian and Björck–Saffari
//! families, a biunimodularity test, and the lift of `f ⊗ g` to a maximally
//! entangled diagonal unitary on `C^N ⊗ C^N`.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schmidt::BipartiteOperator;
use crate::weyl::{diag_from_lambda, dft2, root_of_unity, GridFunction};

/// Tolerance used by [`max_entangled_unitary`] to accept its inputs.
pub const BIUNIMODULAR_TOL: f64 = 1e-10;

/// A complex function on `Z_N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LineRepr", into = "LineRepr")]
pub struct LineFunction {
    n: usize,
    values: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct LineRepr {
    #[serde(rename = "N")]
    n: usize,
    values: Vec<C64>,
}

impl TryFrom<LineRepr> for LineFunction {
    type Error = Error;

    fn try_from(r: LineRepr) -> Result<Self> {
        LineFunction::new(r.n, r.values)
    }
}

impl From<LineFunction> for LineRepr {
    fn from(f: LineFunction) -> Self {
        LineRepr { n: f.n, values: f.values }
    }
}

impl LineFunction {
    pub fn new(n: usize, values: Vec<C64>) -> Result<Self> {
        if values.len() != n {
            return Err(Error::Shape(format!("function on Z_{n} needs {n} values, got {}", values.len())));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("function values must be finite".into()));
        }
        Ok(LineFunction { n, values })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> C64) -> Self {
        LineFunction { n, values: (0..n).map(f).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }
}

/// `f̂(a) = N^{-1/2} Σ_k e^{2πiak/N} f(k)`.
pub fn dft1(f: &LineFunction) -> LineFunction {
    let n = f.n;
    let s = 1.0 / (n.max(1) as f64).sqrt();
    LineFunction::from_fn(n, |a| {
        let acc: C64 = f.values.iter().enumerate().map(|(k, &v)| root_of_unity((a * k) as i64, n) * v).sum();
        acc * s
    })
}

/// Functions that have a unitary Fourier transform in this crate.
pub trait FourierPair {
    fn function_values(&self) -> Vec<C64>;
    fn transform_values(&self) -> Vec<C64>;
}

impl FourierPair for LineFunction {
    fn function_values(&self) -> Vec<C64> {
        self.values.clone()
    }

    fn transform_values(&self) -> Vec<C64> {
        dft1(self).values
    }
}

impl FourierPair for GridFunction {
    fn function_values(&self) -> Vec<C64> {
        self.values().to_vec()
    }

    fn transform_values(&self) -> Vec<C64> {
        dft2(self).values().to_vec()
    }
}

/// `true` iff every value of `f` and of `f̂` lies within `tol` of the unit
/// circle.
pub fn is_biunimodular<F: FourierPair>(f: &F, tol: f64) -> bool {
    let on_circle = |v: Vec<C64>| v.iter().all(|z| (z.norm() - 1.0).abs() <= tol);
    on_circle(f.function_values()) && on_circle(f.transform_values())
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Gaussian on `Z_N`.
///
/// Odd `N`: `g(k) = e^{2πi(ak²+bk)/N}`, requiring `gcd(a, N) = 1`.
/// Even `N`: `g(k) = e^{πik²/N}`; `a` and `b` are ignored. The phase `k²/N`
/// without the factor 2 is the one that is biunimodular for every even `N`.
pub fn gaussian(n: usize, a: i64, b: i64) -> Result<LineFunction> {
    if n == 0 {
        return Err(Error::Domain("Gaussian needs N ≥ 1".into()));
    }
    let ni = n as i64;
    if n % 2 == 1 {
        if gcd(a.rem_euclid(ni) as u64, n as u64) != 1 {
            return Err(Error::Domain(format!("gcd({a}, {n}) ≠ 1")));
        }
        Ok(LineFunction::from_fn(n, |k| {
            let k = k as i64;
            root_of_unity((a * k % ni * k + b * k).rem_euclid(ni), n)
        }))
    } else {
        Ok(LineFunction::from_fn(n, |k| root_of_unity((k * k) as i64, 2 * n)))
    }
}

/// Largest `n` with `n² | N`, found by trial.
pub fn largest_square_divisor_root(modulus: usize) -> usize {
    (1..).take_while(|n| n * n <= modulus).filter(|n| modulus.is_multiple_of(n * n)).last().unwrap_or(1)
}

/// Björck–Saffari case for `N`: 1 if `n` is even or `m` odd, else 2.
pub fn applicable_case(modulus: usize) -> (usize, usize, u8) {
    let n = largest_square_divisor_root(modulus);
    let m = modulus / n;
    let case = if n.is_multiple_of(2) || m % 2 == 1 { 1 } else { 2 };
    (n, m, case)
}

/// Parameters of a Björck–Saffari function on `Z_N`.
///
/// `tau`, `phases` and `rho_exponent` describe the case-1 function. In case 2
/// they describe the inner function on `Z_{N/2}`, so `tau` and `phases` have
/// length `n'` and `ρ = e^{2πil/m'}` for the `(n', m')` of `N/2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BjorckSaffariSpec {
    #[serde(rename = "N")]
    pub modulus: usize,
    pub tau: Vec<usize>,
    #[serde(rename = "c")]
    pub phases: Vec<C64>,
    #[serde(rename = "l")]
    pub rho_exponent: i64,
    #[serde(rename = "case")]
    pub case_tag: u8,
}

impl BjorckSaffariSpec {
    /// Fills in the case tag computed from `modulus`.
    pub fn new(modulus: usize, tau: Vec<usize>, phases: Vec<C64>, rho_exponent: i64) -> Self {
        let (_, _, case_tag) = applicable_case(modulus);
        BjorckSaffariSpec { modulus, tau, phases, rho_exponent, case_tag }
    }

    /// `τ = id`, `c ≡ 1`, `l = 1` on the function that carries the parameters.
    pub fn canonical(modulus: usize) -> Self {
        let (n, _, case) = applicable_case(modulus);
        let inner_n = if case == 2 { largest_square_divisor_root(modulus / 2) } else { n };
        Self::new(modulus, (0..inner_n).collect(), vec![C64::new(1.0, 0.0); inner_n], 1)
    }

    /// `(n, m)` of the modulus the parameters act on.
    pub fn parameter_dims(&self) -> (usize, usize) {
        let base = if self.case_tag == 2 { self.modulus / 2 } else { self.modulus };
        let n = largest_square_divisor_root(base);
        (n, base / n)
    }
}

fn validate(spec: &BjorckSaffariSpec) -> Result<()> {
    let (n, m, case) = applicable_case(spec.modulus);
    if spec.modulus == 0 || n == 1 {
        return Err(Error::NotApplicable(format!("N = {} has no square divisor n > 1", spec.modulus)));
    }
    if spec.case_tag != case {
        return Err(Error::Domain(format!("N = {} (n={n}, m={m}) is case {case}, spec says {}", spec.modulus, spec.case_tag)));
    }
    let (pn, pm) = spec.parameter_dims();
    if spec.tau.len() != pn || spec.phases.len() != pn {
        return Err(Error::Shape(format!("τ and c need length {pn}")));
    }
    let mut seen = vec![false; pn];
    for &t in &spec.tau {
        if t >= pn || std::mem::replace(&mut seen[t], true) {
            return Err(Error::Domain(format!("τ = {:?} is not a permutation of 0..{pn}", spec.tau)));
        }
    }
    if spec.phases.iter().any(|c| (c.norm() - 1.0).abs() > 1e-12) {
        return Err(Error::Domain("phases c_h must be unimodular".into()));
    }
    if gcd(spec.rho_exponent.rem_euclid(pm as i64) as u64, pm as u64) != 1 {
        return Err(Error::Domain(format!("ρ = e^{{2πi·{}/{pm}}} is not primitive", spec.rho_exponent)));
    }
    Ok(())
}

/// `f(nr + h) = c_h ρ^{r τ(h) + n r(r−1)/2}` on `Z_{nm}`; the exponent is
/// reduced modulo `m` in integers.
fn case_one(modulus: usize, n: usize, tau: &[usize], c: &[C64], l: i64) -> LineFunction {
    let m = modulus / n;
    LineFunction::from_fn(modulus, |k| {
        let (r, h) = ((k / n) as i64, k % n);
        let e = r * tau[h] as i64 + n as i64 * (r * (r - 1) / 2);
        c[h] * root_of_unity(l * e.rem_euclid(m as i64), m)
    })
}

/// A Björck–Saffari biunimodular function.
///
/// Case 2 (`n` odd, `m` even) returns `g(k) = z_{k mod 2} f(k mod N/2)` with
/// `z = (1, i)` and `f` the case-1 function on `Z_{N/2}`.
pub fn bjorck_saffari(spec: &BjorckSaffariSpec) -> Result<LineFunction> {
    validate(spec)?;
    let (pn, _) = spec.parameter_dims();
    if spec.case_tag == 1 {
        return Ok(case_one(spec.modulus, pn, &spec.tau, &spec.phases, spec.rho_exponent));
    }
    let half = spec.modulus / 2;
    let (_, _, inner_case) = applicable_case(half);
    if inner_case != 1 {
        return Err(Error::NotApplicable(format!("inner modulus {half} is not case 1")));
    }
    let f = case_one(half, pn, &spec.tau, &spec.phases, spec.rho_exponent);
    let z = [C64::new(1.0, 0.0), C64::new(0.0, 1.0)];
    Ok(LineFunction::from_fn(spec.modulus, |k| z[k % 2] * f.values[k % half]))
}

/// `diag_from_lambda(f ⊗ g)`, which has `N²` unit Schmidt coefficients.
pub fn max_entangled_unitary(f: &LineFunction, g: &LineFunction) -> Result<BipartiteOperator> {
    if f.n != g.n {
        return Err(Error::Shape(format!("f on Z_{} and g on Z_{}", f.n, g.n)));
    }
    for (name, h) in [("f", f), ("g", g)] {
        if !is_biunimodular(h, BIUNIMODULAR_TOL) {
            return Err(Error::Precondition(format!("{name} is not biunimodular")));
        }
    }
    Ok(diag_from_lambda(&GridFunction::tensor(&f.values, &g.values)?))
}

/// Uniformly spaced phases `e^{2πi j/q}` used to build parameter grids.
pub fn phase_grid(q: usize) -> Vec<C64> {
    (0..q).map(|j| C64::from_polar(1.0, TAU * j as f64 / q as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::norm;
    use crate::random::{random_vector, seeded, unimodular};
    use crate::schmidt::{is_maximally_entangled, schmidt_decompose, DEFAULT_REL_TOL};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    fn line(v: &[C64]) -> LineFunction {
        LineFunction::new(v.len(), v.to_vec()).unwrap()
    }

    #[test]
    fn dft1_examples() {
        let one = LineFunction::from_fn(5, |_| c(1.0, 0.0));
        let hat = dft1(&one);
        assert!((hat.values[0] - c(5f64.sqrt(), 0.0)).norm() < 1e-14);
        assert!(hat.values[1..].iter().all(|z| z.norm() < 1e-14));
        let f = line(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!(close(dft1(&f).values(), &[c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(0.0, -1.0)], 1e-14));
    }

    #[test]
    fn dft1_is_unitary_and_matches_dft2() {
        let mut rng = seeded(1);
        for n in 1..8 {
            let f = line(&random_vector(&mut rng, n));
            let g = line(&random_vector(&mut rng, n));
            assert!((norm(dft1(&f).values()) - norm(f.values())).abs() < 1e-12);
            let lhs = dft2(&GridFunction::tensor(f.values(), g.values()).unwrap());
            let rhs = GridFunction::tensor(dft1(&f).values(), dft1(&g).values()).unwrap();
            assert!(close(lhs.values(), rhs.values(), 1e-12));
        }
    }

    #[test]
    fn biunimodularity_test() {
        assert!(!is_biunimodular(&LineFunction::from_fn(3, |_| c(1.0, 0.0)), 1e-10));
        assert!(is_biunimodular(&LineFunction::from_fn(1, |_| c(1.0, 0.0)), 1e-10));
        let w = root_of_unity(1, 3);
        assert!(is_biunimodular(&line(&[c(1.0, 0.0), w, w]), 1e-10));
        assert!(is_biunimodular(&line(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]), 1e-10));
        assert!(!is_biunimodular(&line(&[c(2.0, 0.0), c(0.0, 0.0)]), 1e-10));
    }

    #[test]
    fn gaussian_examples() {
        let w = root_of_unity(1, 3);
        assert!(close(gaussian(3, 1, 0).unwrap().values(), &[c(1.0, 0.0), w, w], 1e-15));
        assert!(is_biunimodular(&gaussian(5, 2, 1).unwrap(), 1e-10));
        assert!(matches!(gaussian(9, 3, 0), Err(Error::Domain(_))));
        assert!(matches!(gaussian(0, 1, 0), Err(Error::Domain(_))));
        // even N: parameters are ignored
        assert_eq!(gaussian(6, 1, 0).unwrap(), gaussian(6, 5, 3).unwrap());
    }

    #[test]
    fn even_gaussian_uses_half_phase() {
        let e = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let g4 = gaussian(4, 1, 0).unwrap();
        assert!(close(g4.values(), &[c(1.0, 0.0), e, c(-1.0, 0.0), e], 1e-15));
        // the full-period phase e^{2πik²/N} is not biunimodular for even N
        for n in (2..=16).step_by(2) {
            let full = LineFunction::from_fn(n, |k| root_of_unity((k * k) as i64, n));
            assert!(!is_biunimodular(&full, 1e-6), "N={n}");
            assert!(is_biunimodular(&gaussian(n, 0, 0).unwrap(), 1e-10), "N={n}");
        }
    }

    #[test]
    fn square_divisors_and_cases() {
        assert_eq!(applicable_case(4), (2, 2, 1));
        assert_eq!(applicable_case(8), (2, 4, 1));
        assert_eq!(applicable_case(9), (3, 3, 1));
        assert_eq!(applicable_case(12), (2, 6, 1));
        assert_eq!(applicable_case(16), (4, 4, 1));
        assert_eq!(applicable_case(18), (3, 6, 2));
        assert_eq!(largest_square_divisor_root(7), 1);
        assert_eq!(largest_square_divisor_root(72), 6);
    }

    #[test]
    fn bjorck_saffari_n4_example() {
        let spec = BjorckSaffariSpec::new(4, vec![0, 1], vec![c(1.0, 0.0); 2], 1);
        let f = bjorck_saffari(&spec).unwrap();
        assert!(close(f.values(), &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)], 1e-15));
    }

    #[test]
    fn bjorck_saffari_is_biunimodular() {
        let mut rng = seeded(5);
        for n in [4, 8, 9, 12, 16, 18, 32, 36] {
            let spec = BjorckSaffariSpec::canonical(n);
            let (pn, _) = spec.parameter_dims();
            let phases = (0..pn).map(|_| unimodular(&mut rng)).collect();
            let mut tau: Vec<usize> = (0..pn).collect();
            tau.rotate_left(1);
            let spec = BjorckSaffariSpec { tau, phases, ..spec };
            assert!(is_biunimodular(&bjorck_saffari(&spec).unwrap(), 1e-10), "N={n}");
        }
    }

    #[test]
    fn bjorck_saffari_case_two_structure() {
        let spec = BjorckSaffariSpec::canonical(18);
        assert_eq!(spec.case_tag, 2);
        let g = bjorck_saffari(&spec).unwrap();
        let inner = BjorckSaffariSpec::canonical(9);
        let f = bjorck_saffari(&inner).unwrap();
        for k in 0..18 {
            let z = if k % 2 == 0 { c(1.0, 0.0) } else { c(0.0, 1.0) };
            assert!((g.values()[k] - z * f.values()[k % 9]).norm() < 1e-15);
        }
    }

    #[test]
    fn bjorck_saffari_errors() {
        let bad = |spec: BjorckSaffariSpec| bjorck_saffari(&spec).unwrap_err();
        assert!(matches!(bad(BjorckSaffariSpec::new(6, vec![0], vec![c(1.0, 0.0)], 1)), Error::NotApplicable(_)));
        let mut spec = BjorckSaffariSpec::canonical(9);
        spec.case_tag = 2;
        assert!(matches!(bad(spec), Error::Domain(_)));
        assert!(matches!(bad(BjorckSaffariSpec::new(9, vec![0, 0, 1], vec![c(1.0, 0.0); 3], 1)), Error::Domain(_)));
        assert!(matches!(bad(BjorckSaffariSpec::new(9, vec![0, 1, 2], vec![c(2.0, 0.0); 3], 1)), Error::Domain(_)));
        assert!(matches!(bad(BjorckSaffariSpec::new(9, vec![0, 1, 2], vec![c(1.0, 0.0); 3], 3)), Error::Domain(_)));
        assert!(matches!(bad(BjorckSaffariSpec::new(9, vec![0, 1], vec![c(1.0, 0.0); 2], 1)), Error::Shape(_)));
    }

    #[test]
    fn parameters_are_injective_on_grid() {
        // (c, τ) with ρ fixed, then ρ with τ = id
        let phases = phase_grid(3);
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut seen: Vec<LineFunction> = vec![];
        for tau in perms {
            for (i, j) in [(0, 0), (1, 0), (0, 2)] {
                let cs = vec![phases[0], phases[i], phases[j]];
                let f = bjorck_saffari(&BjorckSaffariSpec::new(9, tau.to_vec(), cs, 1)).unwrap();
                assert!(seen.iter().all(|g| !close(g.values(), f.values(), 1e-9)));
                seen.push(f);
            }
        }
        let a = bjorck_saffari(&BjorckSaffariSpec::new(16, vec![0, 1, 2, 3], vec![c(1.0, 0.0); 4], 1)).unwrap();
        let b = bjorck_saffari(&BjorckSaffariSpec::new(16, vec![0, 1, 2, 3], vec![c(1.0, 0.0); 4], 3)).unwrap();
        assert!(!close(a.values(), b.values(), 1e-9));
    }

    #[test]
    fn rho_and_tau_trade_off() {
        // ρ ↦ ρ² together with τ ↦ 2τ mod 3 leaves the function unchanged
        let ones = vec![c(1.0, 0.0); 3];
        let a = bjorck_saffari(&BjorckSaffariSpec::new(9, vec![0, 1, 2], ones.clone(), 1)).unwrap();
        let b = bjorck_saffari(&BjorckSaffariSpec::new(9, vec![0, 2, 1], ones, 2)).unwrap();
        assert!(close(a.values(), b.values(), 1e-12));
    }

    #[test]
    fn lifted_unitaries_are_maximally_entangled() {
        let g3 = gaussian(3, 1, 0).unwrap();
        let f4 = line(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
        for (f, n) in [(&g3, 3usize), (&f4, 4)] {
            let u = max_entangled_unitary(f, f).unwrap();
            assert!(u.matrix().unitarity_residual() < 1e-10);
            let d = schmidt_decompose(&u, DEFAULT_REL_TOL).unwrap();
            assert_eq!(d.len(), n * n);
            assert!(d.coefficients().iter().all(|x| (x - 1.0).abs() < 1e-9));
            assert!(is_maximally_entangled(&d, DEFAULT_REL_TOL));
        }
        let one = LineFunction::from_fn(3, |_| c(1.0, 0.0));
        assert!(matches!(max_entangled_unitary(&one, &one), Err(Error::Precondition(_))));
        assert!(matches!(max_entangled_unitary(&g3, &f4), Err(Error::Shape(_))));
    }

    #[test]
    fn line_function_json() {
        let f = gaussian(3, 1, 0).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with("{\"N\":3,\"values\":[[1.0,0.0]"));
        assert_eq!(serde_json::from_str::<LineFunction>(&s).unwrap(), f);
        assert!(serde_json::from_str::<LineFunction>("{\"N\":2,\"values\":[[1,0]]}").is_err());
    }
}
