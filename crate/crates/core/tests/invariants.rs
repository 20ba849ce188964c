//! Property tests over the public API.

use num_complex::Complex64 as C64;
use opschmidt::biunimodular::{bjorck_saffari, dft1, is_biunimodular, BjorckSaffariSpec, LineFunction};
use opschmidt::magic::d_map;
use opschmidt::matrix::norm;
use opschmidt::qft::{check_spec, factorizations};
use opschmidt::random::{random_matrix, random_unitary, random_vector, seeded, unimodular};
use opschmidt::schmidt::{coefficient_deviation, schmidt_decompose};
use opschmidt::weyl::{analytic_schmidt, dft2, diag_from_lambda, idft2, GridFunction};
use opschmidt::{BipartiteOperator, BipartiteShape, DEFAULT_REL_TOL};
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = [usize; 4]> {
    [1usize..4, 1usize..4, 1usize..4, 1usize..4]
}

fn random_operator(d: [usize; 4], seed: u64) -> BipartiteOperator {
    let mut rng = seeded(seed);
    let shape = BipartiteShape::new(d[0], d[1], d[2], d[3]).unwrap();
    BipartiteOperator::new(shape, random_matrix(&mut rng, d[2] * d[3], d[0] * d[1])).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decomposition_reconstructs_and_is_orthonormal(d in dims(), seed in any::<u64>()) {
        let f = random_operator(d, seed);
        let dec = schmidt_decompose(&f, DEFAULT_REL_TOL).unwrap();
        let scale = f.matrix().frobenius_norm();
        prop_assert!(dec.reconstruction_residual(&f) <= 1e-12 * scale.max(1.0));
        prop_assert!(dec.orthonormality_residual() <= 1e-12);
        prop_assert!(dec.len() <= f.shape().max_schmidt_number());
        prop_assert!(dec.coefficients().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn squared_coefficients_sum_to_squared_norm(d in dims(), seed in any::<u64>()) {
        let f = random_operator(d, seed);
        let dec = schmidt_decompose(&f, DEFAULT_REL_TOL).unwrap();
        let fro2 = f.matrix().frobenius_norm().powi(2);
        prop_assert!((dec.squared_norm() - fro2).abs() <= 1e-12 * fro2);
    }

    #[test]
    fn local_unitaries_preserve_coefficients(d in dims(), seed in any::<u64>()) {
        let f = random_operator(d, seed);
        let mut rng = seeded(seed.wrapping_add(1));
        let [a, b, ap, bp] = d;
        let out = random_unitary(&mut rng, ap).kron(&random_unitary(&mut rng, bp));
        let inp = random_unitary(&mut rng, a).kron(&random_unitary(&mut rng, b));
        let g = BipartiteOperator::new(f.shape(), out.matmul(f.matrix()).matmul(&inp)).unwrap();
        let cf = schmidt_decompose(&f, DEFAULT_REL_TOL).unwrap();
        let cg = schmidt_decompose(&g, DEFAULT_REL_TOL).unwrap();
        let dev = coefficient_deviation(cf.coefficients(), cg.coefficients());
        prop_assert!(dev.is_some_and(|x| x <= 1e-10 * cf.coefficients()[0]), "{:?}", dev);
    }

    #[test]
    fn dft2_inverts_and_preserves_norm(n in 1usize..7, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let v = random_vector(&mut rng, n * n);
        let g = GridFunction::new(n, v.clone()).unwrap();
        let back = idft2(&dft2(&g));
        prop_assert!(back.values().iter().zip(&v).all(|(x, y)| (x - y).norm() < 1e-12));
        prop_assert!((norm(dft2(&g).values()) - norm(&v)).abs() < 1e-12);
    }

    #[test]
    fn dft1_preserves_norm(n in 1usize..20, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let f = LineFunction::new(n, random_vector(&mut rng, n)).unwrap();
        prop_assert!((norm(dft1(&f).values()) - norm(f.values())).abs() < 1e-12);
    }

    #[test]
    fn diagonal_family_matches_oracle(n in 1usize..5, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let lambda = GridFunction::from_fn(n, |_, _| unimodular(&mut rng));
        let op = diag_from_lambda(&lambda);
        prop_assert!(op.matrix().unitarity_residual() < 1e-12);
        let analytic = analytic_schmidt(&lambda, DEFAULT_REL_TOL).unwrap();
        prop_assert!(analytic.reconstruction_residual(&op) < 1e-12);
        let oracle = schmidt_decompose(&op, DEFAULT_REL_TOL).unwrap();
        let dev = coefficient_deviation(analytic.coefficients(), oracle.coefficients());
        prop_assert!(dev.is_some_and(|x| x <= 1e-9));
    }

    #[test]
    fn bjorck_saffari_random_parameters(
        n in prop::sample::select(vec![4usize, 8, 9, 12, 16, 18, 25, 27]),
        seed in any::<u64>(),
        l in 1i64..50,
    ) {
        let spec = BjorckSaffariSpec::canonical(n);
        let (pn, pm) = spec.parameter_dims();
        prop_assume!(opschmidt::biunimodular::gcd(l as u64 % pm as u64, pm as u64) == 1);
        let mut rng = seeded(seed);
        let phases = (0..pn).map(|_| unimodular(&mut rng)).collect();
        let mut tau: Vec<usize> = (0..pn).collect();
        tau.rotate_right((seed % pn as u64) as usize);
        let spec = BjorckSaffariSpec { tau, phases, rho_exponent: l, ..spec };
        prop_assert!(is_biunimodular(&bjorck_saffari(&spec).unwrap(), 1e-10));
    }

    #[test]
    fn qft_checks_pass(n in 1usize..13, pick in any::<prop::sample::Index>()) {
        let specs = factorizations(n);
        let spec = specs[pick.index(specs.len())];
        let c = check_spec(&spec, DEFAULT_REL_TOL).unwrap();
        prop_assert!(c.passed(1e-9), "{:?}", c);
    }

    #[test]
    fn d_map_is_homogeneous(n in 1usize..5, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let psi = random_vector(&mut rng, n * n);
        let c = C64::new(0.3, -1.7);
        let scaled: Vec<C64> = psi.iter().map(|z| z * c).collect();
        let f = c.conj().powu(n as u32 - 1);
        let lhs = d_map(&scaled).unwrap();
        let rhs: Vec<C64> = d_map(&psi).unwrap().into_iter().map(|z| z * f).collect();
        let scale = norm(&rhs).max(1.0);
        prop_assert!(lhs.iter().zip(&rhs).all(|(x, y)| (x - y).norm() <= 1e-10 * scale));
    }
}
