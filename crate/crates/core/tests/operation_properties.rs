use proptest::prelude::*;
use qreverse::linalg::{hermitian_eig, operator_span_dim, ToleranceConfig};
use qreverse::operations::{find_remix_unitary, operations_equal, remix_residual, QuantumOperation};
use qreverse::random::{random_density, random_operation, random_unitary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn remix_preserves_the_operation(seed in any::<u64>(), dim in 2usize..5, n in 1usize..4, extra in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let deterministic: bool = rng.random();
        let e = random_operation(&mut rng, dim, n, deterministic);
        let u = random_unitary(&mut rng, n + extra);
        let f = e.remix(&u, &tol()).unwrap();
        prop_assert!(operations_equal(&e, &f, &tol()));
        let found = find_remix_unitary(&e, &f, &tol());
        prop_assert!(found.is_some());
        prop_assert!(remix_residual(&e, &f, &found.unwrap()) < 1e-9);
    }

    #[test]
    fn composition_is_associative_on_states(seed in any::<u64>(), dim in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_operation(&mut rng, dim, 2, true);
        let b = random_operation(&mut rng, dim, 2, false);
        let c = random_operation(&mut rng, dim, 2, true);
        let rho = random_density(&mut rng, dim);
        let left = QuantumOperation::compose(&c, &QuantumOperation::compose(&b, &a).unwrap()).unwrap();
        let right = QuantumOperation::compose(&QuantumOperation::compose(&c, &b).unwrap(), &a).unwrap();
        let x = left.apply(&rho, &tol()).unwrap();
        let y = right.apply(&rho, &tol()).unwrap();
        prop_assert!(x.matrix().distance(y.matrix()) < 1e-9);
    }

    #[test]
    fn traces_and_choi_positivity(seed in any::<u64>(), dim in 2usize..5, n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let deterministic: bool = rng.random();
        let e = random_operation(&mut rng, dim, n, deterministic);
        let rho = random_density(&mut rng, dim);
        let t = e.apply(&rho, &tol()).unwrap().trace();
        prop_assert!(t > 0.0 && t <= 1.0 + 1e-9);
        let choi = e.choi();
        let spectrum = hermitian_eig(&choi.matrix, &tol()).unwrap();
        prop_assert!(*spectrum.eigenvalues.last().unwrap() > -1e-9);
    }

    #[test]
    fn minimal_decomposition_is_independent(seed in any::<u64>(), dim in 2usize..4, n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_operation(&mut rng, dim, n, true);
        // Pad to a redundant decomposition first.
        let u = random_unitary(&mut rng, n + 2);
        let redundant = e.remix(&u, &tol()).unwrap();
        let minimal = redundant.minimal_decomposition(&tol()).unwrap();
        prop_assert_eq!(minimal.len(), n);
        prop_assert_eq!(operator_span_dim(minimal.kraus(), &tol()).unwrap(), minimal.len());
        prop_assert!(operations_equal(&minimal, &e, &tol()));
    }
}
