//! Unitaries on `C³⊗C³` with every operator-Schmidt number `S ∈ {1,…,9}`.
//!
//! `S ∈ {1, 3, 9}` come from tensor products `g_a ⊗ g_b` lifted through
//! [`diag_from_lambda`]; `S ∈ {5, 6, 7, 8}` from the published table of
//! unimodular `λ_S`; `S ∈ {2, 4}` cannot arise from the diagonal family (see
//! [`impossibility_certificates`]) and use the explicit controlled-shift
//! unitaries `U`, `V` and `UV` instead.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::schmidt::{gram_residual, is_maximally_entangled, schmidt_decompose, BipartiteOperator, BipartiteShape};
use crate::weyl::{analytic_schmidt, diag_from_lambda, dft2, root_of_unity, weyl_pair, GridFunction};

/// `ω = e^{2πi/3}`.
pub fn omega() -> C64 {
    root_of_unity(1, 3)
}

fn w(k: i64) -> C64 {
    root_of_unity(k, 3)
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn grid(rows: [[C64; 3]; 3]) -> GridFunction {
    GridFunction::from_fn(3, |j, k| rows[j][k])
}

/// The unimodular `λ_S` on `Z_3²` whose transform has support of size `S`.
/// Row `j`, column `k` holds `λ(j, k)`.
pub fn lambda_table(s: usize) -> Result<GridFunction> {
    let one = re(1.0);
    let g = match s {
        5 => [[one, -one, one], [w(1), -w(1), w(2)], [w(2), -w(2), w(1)]],
        6 => [[one, one, one], [w(1), w(1), w(2)], [w(2), w(2), w(1)]],
        7 => [[one, w(1), w(2)], [one, -w(2), w(1)], [-one, w(2), -w(1)]],
        8 => [[w(1), w(1), w(2)], [one, -w(2), w(2)], [-one, one, -w(1)]],
        _ => return Err(Error::Domain(format!("no table entry for S = {s}; expected 5..=8"))),
    };
    Ok(grid(g))
}

/// The published closed forms of `λ̂_S` for `S ∈ {5, 6, 7, 8}`, used as an
/// external reference for [`dft2`].
pub fn reference_transform(s: usize) -> Result<GridFunction> {
    let (z, o) = (re(0.0), re(1.0));
    let third = |x: C64| x / 3.0;
    let g = match s {
        5 => [[z, z, z], [o, w(2), w(1)], [z, o - w(1), o - w(2)]],
        6 => [[z, z, z], [o, w(2), w(1)], [re(2.0), o + w(1), o + w(2)]],
        7 => [
            [z, z, third(re(3.0))],
            [third(re(-2.0) + w(1) * 2.0), third(o + w(1) * 2.0), third(re(7.0) + w(1) * 2.0)],
            [third(re(2.0) - w(1) * 2.0), third(-o - w(1) * 2.0), third(-o - w(1) * 2.0)],
        ],
        8 => [
            [z, third(re(-3.0) + w(1) * 3.0), third(re(3.0))],
            [third(re(-2.0) + w(1) * 2.0), third(o + w(1) * 2.0), third(re(4.0) + w(1) * 5.0)],
            [third(-o + w(1)), third(-o - w(1) * 2.0), third(-o - w(1) * 2.0)],
        ],
        _ => return Err(Error::Domain(format!("no reference transform for S = {s}"))),
    };
    Ok(grid(g))
}

/// `g₃ = (1, 1, ω)`; its 1-D transform has full support on `Z_3`.
pub fn g3() -> [C64; 3] {
    [re(1.0), re(1.0), omega()]
}

/// `λ(j, k) = g_a(j) g_b(k)` with `ab = S`, `g₁ ≡ 1` and `g₃` from [`g3`].
pub fn lambda_tensor(s: usize) -> Result<GridFunction> {
    let g1 = [re(1.0); 3];
    let (ga, gb) = match s {
        1 => (g1, g1),
        3 => (g3(), g1),
        9 => (g3(), g3()),
        _ => return Err(Error::Domain(format!("tensor construction covers S ∈ {{1,3,9}}, got {s}"))),
    };
    GridFunction::tensor(&ga, &gb)
}

/// A point of `Z_3²`.
pub type Point = (usize, usize);

fn translate(x: Point, v: Point) -> Point {
    ((x.0 + v.0) % 3, (x.1 + v.1) % 3)
}

/// Witness that a support set `P ⊂ Z_3²` of size 2 or 4 has a nonzero shift
/// `v` under which exactly one point `x ∈ P` lands back in `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateS24 {
    #[serde(rename = "P")]
    pub p: Vec<Point>,
    pub v: Point,
    pub x: Point,
}

impl CertificateS24 {
    /// Re-check the witness by brute-force translation count.
    pub fn verify(&self) -> bool {
        let hits: Vec<Point> = self.p.iter().copied().filter(|&x| self.p.contains(&translate(x, self.v))).collect();
        self.v != (0, 0) && hits == [self.x]
    }
}

/// First nonzero `v` (lexicographic) with a unique translate inside `p`.
pub fn find_certificate(p: &[Point]) -> Option<CertificateS24> {
    let shifts = (0..9).map(|i| (i / 3, i % 3)).filter(|&v| v != (0, 0));
    for v in shifts {
        let hits: Vec<Point> = p.iter().copied().filter(|&x| p.contains(&translate(x, v))).collect();
        if let [x] = hits[..] {
            return Some(CertificateS24 { p: p.to_vec(), v, x });
        }
    }
    None
}

/// Certificates for all 36 + 126 subsets of `Z_3²` with cardinality 2 or 4.
///
/// If `λ` is unimodular the autocorrelation of `λ̂` vanishes at every nonzero
/// shift, but a unique-translate shift leaves a single nonzero product in
/// that autocorrelation, so no such `P` is the support of a unimodular `λ̂`.
pub fn impossibility_certificates() -> Result<Vec<CertificateS24>> {
    let mut out = vec![];
    for mask in 0u32..(1 << 9) {
        let size = mask.count_ones();
        if size != 2 && size != 4 {
            continue;
        }
        let p: Vec<Point> = (0..9).filter(|i| mask & (1 << i) != 0).map(|i| (i / 3, i % 3)).collect();
        match find_certificate(&p) {
            Some(c) => out.push(c),
            None => return Err(Error::CertificationFailure(format!("no witness for P = {p:?}"))),
        }
    }
    Ok(out)
}

fn projectors() -> (ComplexMatrix, ComplexMatrix) {
    let p1 = ComplexMatrix::diag(&[re(1.0), re(0.0), re(0.0)]);
    let p2 = ComplexMatrix::diag(&[re(0.0), re(1.0), re(1.0)]);
    (p1, p2)
}

fn sum_of_products(terms: &[(ComplexMatrix, ComplexMatrix)]) -> BipartiteOperator {
    let mut m = ComplexMatrix::zeros(9, 9);
    for (x, y) in terms {
        m = &m + &x.kron(y);
    }
    BipartiteOperator::new(BipartiteShape::square(3, 3).expect("3"), m).expect("9x9")
}

/// Term lists `(X_k, Y_k)` of `U = P₁⊗R + P₂⊗I`, `V = R⊗P₁ + I⊗P₂` and
/// `UV = P₁R⊗RP₁ + P₁⊗RP₂ + P₂R⊗P₁ + P₂⊗P₂`. Within each list the `X_k` are
/// pairwise orthogonal, as are the `Y_k`.
pub fn explicit_terms() -> [Vec<(ComplexMatrix, ComplexMatrix)>; 3] {
    let r = weyl_pair(3).expect("3").shift;
    let id = ComplexMatrix::identity(3);
    let (p1, p2) = projectors();
    let u = vec![(p1.clone(), r.clone()), (p2.clone(), id.clone())];
    let v = vec![(r.clone(), p1.clone()), (id, p2.clone())];
    let uv = vec![
        (p1.matmul(&r), r.matmul(&p1)),
        (p1.clone(), r.matmul(&p2)),
        (p2.matmul(&r), p1),
        (p2.clone(), p2),
    ];
    [u, v, uv]
}

/// The unitaries `U`, `V` (Schmidt number 2) and `UV` (Schmidt number 4).
pub fn explicit_s2_s4() -> (BipartiteOperator, BipartiteOperator, BipartiteOperator) {
    let [u, v, uv] = explicit_terms();
    (sum_of_products(&u), sum_of_products(&v), sum_of_products(&uv))
}

/// Coefficients read off an orthogonal term list: `‖X_k‖·‖Y_k‖`.
fn term_coefficients(terms: &[(ComplexMatrix, ComplexMatrix)]) -> Result<Vec<f64>> {
    let normalize = |m: &ComplexMatrix| m.scale(re(1.0 / m.frobenius_norm()));
    let xs: Vec<_> = terms.iter().map(|(x, _)| normalize(x)).collect();
    let ys: Vec<_> = terms.iter().map(|(_, y)| normalize(y)).collect();
    if gram_residual(&xs) > 1e-12 || gram_residual(&ys) > 1e-12 {
        return Err(Error::Verification("explicit terms are not orthogonal".into()));
    }
    let mut c: Vec<f64> = terms.iter().map(|(x, y)| x.frobenius_norm() * y.frobenius_norm()).collect();
    c.sort_by(|a, b| b.total_cmp(a));
    Ok(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    TensorProduct,
    Table,
    ExplicitUnitary,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    #[serde(rename = "S")]
    pub s: usize,
    pub construction: Construction,
    #[serde(skip)]
    pub operator: BipartiteOperator,
    /// From the closed form: `|λ̂|` or the explicit term norms.
    pub expected_coefficients: Vec<f64>,
    /// From the realignment oracle.
    pub coefficients: Vec<f64>,
    pub unitarity_residual: f64,
    pub maximally_entangled: bool,
}

const UNITARITY_TOL: f64 = 1e-10;
const COEFFICIENT_TOL: f64 = 1e-9;

fn entry(s: usize, construction: Construction, operator: BipartiteOperator, expected: Vec<f64>, rel_tol: f64) -> Result<CatalogEntry> {
    let d = schmidt_decompose(&operator, rel_tol)?;
    let unitarity_residual = operator.matrix().unitarity_residual();
    if unitarity_residual > UNITARITY_TOL {
        return Err(Error::Verification(format!("S={s}: unitarity residual {unitarity_residual:e}")));
    }
    if d.len() != s {
        return Err(Error::Verification(format!("S={s}: oracle Schmidt number {}", d.len())));
    }
    match crate::schmidt::coefficient_deviation(&expected, d.coefficients()) {
        Some(dev) if dev <= COEFFICIENT_TOL => {}
        other => return Err(Error::Verification(format!("S={s}: closed form vs oracle deviation {other:?}"))),
    }
    Ok(CatalogEntry {
        s,
        construction,
        maximally_entangled: is_maximally_entangled(&d, rel_tol),
        coefficients: d.coefficients().to_vec(),
        expected_coefficients: expected,
        unitarity_residual,
        operator,
    })
}

/// Nine oracle-verified unitaries, one per Schmidt number `S = 1..=9`.
pub fn full_catalog(rel_tol: f64) -> Result<Vec<CatalogEntry>> {
    let [u_terms, _, uv_terms] = explicit_terms();
    let (u, _, uv) = explicit_s2_s4();
    let mut out = Vec::with_capacity(9);
    for s in 1..=9 {
        let e = match s {
            1 | 3 | 9 | 5..=8 => {
                let (lambda, construction) = if matches!(s, 1 | 3 | 9) {
                    (lambda_tensor(s)?, Construction::TensorProduct)
                } else {
                    (lambda_table(s)?, Construction::Table)
                };
                let expected = analytic_schmidt(&lambda, rel_tol)?.coefficients().to_vec();
                entry(s, construction, diag_from_lambda(&lambda), expected, rel_tol)?
            }
            2 => entry(s, Construction::ExplicitUnitary, u.clone(), term_coefficients(&u_terms)?, rel_tol)?,
            4 => entry(s, Construction::ExplicitUnitary, uv.clone(), term_coefficients(&uv_terms)?, rel_tol)?,
            _ => unreachable!(),
        };
        out.push(e);
    }
    Ok(out)
}

/// Cardinality of the support of `λ̂`, counting `|λ̂| > tol`.
pub fn transform_support_size(lambda: &GridFunction, tol: f64) -> usize {
    dft2(lambda).support(tol).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{seeded, unimodular};
    use crate::schmidt::{schmidt_number, DEFAULT_REL_TOL};

    fn max_diff(a: &GridFunction, b: &GridFunction) -> f64 {
        a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn tables_match_reference_transforms() {
        for s in 5..=8 {
            let l = lambda_table(s).unwrap();
            assert!(l.is_unimodular(1e-15));
            assert!(max_diff(&dft2(&l), &reference_transform(s).unwrap()) < 1e-12, "S={s}");
            assert_eq!(transform_support_size(&l, 1e-9), s);
        }
        // row convention: entry (1,0) of the S=5 transform is 1
        assert!((dft2(&lambda_table(5).unwrap()).get(1, 0) - re(1.0)).norm() < 1e-12);
        assert!((reference_transform(7).unwrap().get(0, 2) - re(1.0)).norm() < 1e-15);
        assert!(lambda_table(4).is_err() && lambda_table(9).is_err());
    }

    #[test]
    fn tensor_supports() {
        assert_eq!(dft2(&lambda_tensor(1).unwrap()).support(1e-9), vec![(0, 0)]);
        assert_eq!(transform_support_size(&lambda_tensor(3).unwrap(), 1e-9), 3);
        assert_eq!(transform_support_size(&lambda_tensor(9).unwrap(), 1e-9), 9);
        assert!(lambda_tensor(2).is_err());
        // ĝ₃ has full support, checked by enumeration of the 1-D transform
        let g = g3();
        for a in 0..3 {
            let hat: C64 = (0..3).map(|k| root_of_unity((a * k) as i64, 3) * g[k]).sum();
            assert!(hat.norm() > 0.5);
        }
    }

    #[test]
    fn certificate_examples() {
        let c = find_certificate(&[(0, 0), (0, 1)]).unwrap();
        assert_eq!((c.v, c.x), ((0, 1), (0, 0)));
        let c = find_certificate(&[(0, 0), (0, 1), (0, 2), (1, 0)]).unwrap();
        assert!(c.verify());
        let all = impossibility_certificates().unwrap();
        assert_eq!(all.len(), 162);
        assert!(all.iter().all(CertificateS24::verify));
    }

    #[test]
    fn certificate_rejects_bad_witness() {
        let c = CertificateS24 { p: vec![(0, 0), (0, 1)], v: (1, 1), x: (0, 0) };
        assert!(!c.verify());
    }

    #[test]
    fn full_row_has_no_certificate() {
        // a coset of a subgroup is invariant under its own shifts and no
        // other shift gives a unique translate
        assert!(find_certificate(&[(0, 0), (0, 1), (0, 2)]).is_none());
    }

    #[test]
    fn unimodular_autocorrelation_vanishes_off_zero() {
        let mut rng = seeded(12);
        for _ in 0..20 {
            let l = GridFunction::from_fn(3, |_, _| unimodular(&mut rng));
            let h = dft2(&l);
            for v in (0..9).map(|i| (i / 3, i % 3)) {
                let ac: C64 = (0..9)
                    .map(|i| (i / 3, i % 3))
                    .map(|w| {
                        let t = translate(w, v);
                        h.get(t.0, t.1).conj() * h.get(w.0, w.1)
                    })
                    .sum();
                let target = if v == (0, 0) { 9.0 } else { 0.0 };
                assert!((ac - re(target)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn explicit_unitaries() {
        let (u, v, uv) = explicit_s2_s4();
        for op in [&u, &v, &uv] {
            assert!(op.matrix().unitarity_residual() < 1e-12);
        }
        assert_eq!(schmidt_number(&u, DEFAULT_REL_TOL).unwrap(), 2);
        assert_eq!(schmidt_number(&v, DEFAULT_REL_TOL).unwrap(), 2);
        assert_eq!(schmidt_number(&uv, DEFAULT_REL_TOL).unwrap(), 4);
        let product = u.compose(&v).unwrap();
        assert!((product.matrix() - uv.matrix()).max_abs() < 1e-14);
    }

    #[test]
    fn catalog_has_all_nine() {
        let cat = full_catalog(DEFAULT_REL_TOL).unwrap();
        let ss: Vec<usize> = cat.iter().map(|e| e.coefficients.len()).collect();
        assert_eq!(ss, (1..=9).collect::<Vec<_>>());
        assert!((cat[0].coefficients[0] - 3.0).abs() < 1e-12);
        // λ₆: coefficients {2, 1, 1, 1, 1, 1}
        let c6 = &cat[5].coefficients;
        assert!((c6[0] - 2.0).abs() < 1e-12 && c6[1..].iter().all(|c| (c - 1.0).abs() < 1e-12));
        // UV: {2, √2, √2, 1}
        let c4 = &cat[3].coefficients;
        let want = [2.0, 2f64.sqrt(), 2f64.sqrt(), 1.0];
        assert!(c4.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12));
        // g₃ = (1,1,ω) is itself biunimodular, so the S=9 entry has nine
        // equal coefficients
        assert!(cat[8].maximally_entangled);
        assert!(!cat[0].maximally_entangled);
    }
}
