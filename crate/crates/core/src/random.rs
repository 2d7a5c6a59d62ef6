//! Random unitaries, states and operations for property tests, plus a
//! generator of operations that are reversible on a known code by construction.

use nalgebra::{DMatrix, QR};
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, ToleranceConfig, C64};
use crate::operations::{DensityOperator, QuantumOperation};
use crate::reversibility::CodeSubspace;

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g: DMatrix<C64> = ginibre(rng, n, n).into_nalgebra();
    let qr = QR::new(g);
    let (mut q, r) = (qr.q(), qr.r());
    for (k, mut col) in q.column_iter_mut().enumerate() {
        let rkk = r[(k, k)];
        if rkk.norm() > 0.0 {
            col *= rkk / rkk.norm();
        }
    }
    ComplexMatrix::wrap(q)
}

/// Full-rank random density operator `G G^dag / tr(G G^dag)`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityOperator {
    random_density_of_rank(rng, n, n)
}

/// Random density operator of rank at most `rank`.
pub fn random_density_of_rank<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> DensityOperator {
    let g = ginibre(rng, n, rank.max(1));
    let m = &g * &g.dagger();
    let t = m.trace().re;
    DensityOperator::from_trusted(m.scale_real(1.0 / t), true)
}

/// Random density operator supported on `code`.
pub fn random_code_state<R: Rng + ?Sized>(rng: &mut R, code: &CodeSubspace) -> DensityOperator {
    let inner = random_density(rng, code.code_dim());
    let b = code.basis_matrix();
    DensityOperator::from_trusted(&(b * inner.matrix()) * &b.dagger(), true)
}

/// `m^{-1/2}` of a positive definite matrix.
fn inverse_sqrt(m: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    let spectrum = hermitian_eig(m, tol)?;
    if let Some(&min) = spectrum.eigenvalues.last() {
        if min <= tol.rank_cutoff {
            return Err(Error::NotPositive { eigenvalue: min });
        }
    }
    let inv: Vec<f64> = spectrum.eigenvalues.iter().map(|x| 1.0 / x.sqrt()).collect();
    let v = &spectrum.eigenvectors;
    Ok(&(v * &ComplexMatrix::diagonal(&inv)) * &v.dagger())
}

/// Random operation with `n_ops` decomposition operators. Deterministic
/// operations are normalized by `S^{-1/2}` with `S = sum G^dag G`; otherwise
/// the largest eigenvalue of the POVM element is drawn uniformly from `[0.2, 1)`.
pub fn random_operation<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    n_ops: usize,
    deterministic: bool,
) -> QuantumOperation {
    let tol = ToleranceConfig::default();
    let gs: Vec<ComplexMatrix> = (0..n_ops.max(1)).map(|_| ginibre(rng, dim, dim)).collect();
    let s = gs.iter().fold(ComplexMatrix::zeros(dim, dim), |acc, g| &acc + &(&g.dagger() * g));
    let kraus = if deterministic {
        let norm = inverse_sqrt(&s, &tol).expect("Ginibre sums are positive definite");
        gs.iter().map(|g| g * &norm).collect()
    } else {
        let top = hermitian_eig(&s, &tol).expect("Hermitian").eigenvalues[0];
        let target: f64 = rng.random_range(0.2..1.0);
        let f = (target / top).sqrt();
        gs.iter().map(|g| g.scale_real(f)).collect()
    };
    QuantumOperation::new(kraus, &tol).expect("constructed within bounds")
}

/// Operation `{sqrt(mu^2) U}` with Haar `U` and `mu^2` uniform in `[0.1, 1]`.
pub fn random_scaled_unitary<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
) -> (QuantumOperation, f64, ComplexMatrix) {
    let u = random_unitary(rng, dim);
    let mu_squared: f64 = rng.random_range(0.1..=1.0);
    let e = QuantumOperation::new(vec![u.scale_real(mu_squared.sqrt())], &ToleranceConfig::default())
        .expect("scaled unitary is trace-decreasing");
    (e, mu_squared, u)
}

/// Operation reversible on `code` by construction, with known weights.
#[derive(Debug, Clone)]
pub struct ReversibleInstance {
    pub operation: QuantumOperation,
    pub code: CodeSubspace,
    /// `d_j`, which sum to `mu^2`.
    pub weights: Vec<f64>,
    pub mu_squared: f64,
}

/// Builds `Ã_j = sqrt(d_j) U_j P_M + C_j P_{M-perp}` with the `U_j` mapping a
/// random code onto mutually orthogonal subspaces, then remixes the `Ã_j` by a
/// random unitary so the decomposition handed out is not the canonical one.
/// The off-code part `C_j` is random and halved until the operation is
/// trace-decreasing, which leaves `P E P = mu^2 P` untouched.
pub fn random_reversible_instance<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    code_dim: usize,
    syndromes: usize,
) -> Result<ReversibleInstance> {
    if code_dim == 0 || syndromes == 0 || code_dim * syndromes > dim {
        return Err(Error::Shape(format!(
            "{syndromes} syndromes of a {code_dim}-dimensional code do not fit in {dim} dimensions"
        )));
    }
    let tol = ToleranceConfig::default();
    let q = random_unitary(rng, dim);
    let basis = q.column_block(0, code_dim);
    let perp = (code_dim < dim).then(|| q.column_block(code_dim, dim - code_dim));
    let code = CodeSubspace::new((0..code_dim).map(|k| basis.column_block(k, 1)).collect(), &tol)?;
    let targets = random_unitary(rng, dim);

    let raw: Vec<f64> = (0..syndromes).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    let mu_squared: f64 = rng.random_range(0.3..0.95);
    let weights: Vec<f64> = raw.iter().map(|x| mu_squared * x / total).collect();

    let on_code: Vec<ComplexMatrix> = weights
        .iter()
        .enumerate()
        .map(|(j, w)| (&targets.column_block(j * code_dim, code_dim) * &basis.dagger()).scale_real(w.sqrt()))
        .collect();
    let off_code: Vec<ComplexMatrix> = match &perp {
        Some(perp) => (0..syndromes).map(|_| &ginibre(rng, dim, dim - code_dim) * &perp.dagger()).collect(),
        None => vec![ComplexMatrix::zeros(dim, dim); syndromes],
    };

    let mut scale = 1.0;
    let canonical = loop {
        let ops: Vec<ComplexMatrix> =
            on_code.iter().zip(&off_code).map(|(a, c)| a + &c.scale_real(scale)).collect();
        let povm = ops.iter().fold(ComplexMatrix::zeros(dim, dim), |acc, a| &acc + &(&a.dagger() * a));
        if hermitian_eig(&povm, &tol)?.eigenvalues[0] <= 1.0 - tol.eq_tol {
            break ops;
        }
        scale *= 0.5;
    };

    let u = random_unitary(rng, syndromes);
    let operation = QuantumOperation::new(canonical, &tol)?.remix(&u, &tol)?;
    Ok(ReversibleInstance { operation, code, weights, mu_squared })
}

/// Deterministic operation reversible on a random code: `A_j = sqrt(lambda_j) U_j`
/// with full unitaries `U_j` that carry the code onto mutually orthogonal
/// blocks, remixed by a random unitary. Here `mu^2 = 1`.
pub fn random_reversible_channel<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    code_dim: usize,
    syndromes: usize,
) -> Result<ReversibleInstance> {
    if code_dim == 0 || syndromes == 0 || code_dim * syndromes > dim {
        return Err(Error::Shape(format!(
            "{syndromes} syndromes of a {code_dim}-dimensional code do not fit in {dim} dimensions"
        )));
    }
    let tol = ToleranceConfig::default();
    let q = random_unitary(rng, dim);
    let code = CodeSubspace::new((0..code_dim).map(|k| q.column_block(k, 1)).collect(), &tol)?;
    let targets = random_unitary(rng, dim);
    let raw: Vec<f64> = (0..syndromes).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let canonical: Vec<ComplexMatrix> = weights
        .iter()
        .enumerate()
        .map(|(j, w)| {
            // Cyclic shift by j blocks sends column i of q to column i + j*d of targets.
            let shift = ComplexMatrix::from_fn(dim, dim, |row, col| {
                if row == (col + j * code_dim) % dim {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            (&(&targets * &shift) * &q.dagger()).scale_real(w.sqrt())
        })
        .collect();
    let u = random_unitary(rng, syndromes);
    let operation = QuantumOperation::new(canonical, &tol)?.remix(&u, &tol)?;
    Ok(ReversibleInstance { operation, code, weights, mu_squared: 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..6 {
            assert!(random_unitary(&mut rng, n).unitarity_residual() < 1e-12);
        }
    }

    #[test]
    fn densities_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let tol = ToleranceConfig::default();
        let rho = random_density_of_rank(&mut rng, 4, 2);
        assert!(DensityOperator::new(rho.matrix().clone(), &tol).is_ok());
        assert_eq!(hermitian_eig(rho.matrix(), &tol).unwrap().rank(1e-10), 2);
    }

    #[test]
    fn operations_respect_requested_kind() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let tol = ToleranceConfig::default();
        for _ in 0..20 {
            assert!(random_operation(&mut rng, 3, 3, true).is_deterministic(&tol));
            assert!(!random_operation(&mut rng, 3, 2, false).is_deterministic(&tol));
        }
    }

    #[test]
    fn reversible_instance_has_requested_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let inst = random_reversible_instance(&mut rng, 8, 2, 3).unwrap();
        assert_eq!(inst.operation.len(), 3);
        let p = inst.code.projector();
        let pep = &(p * &inst.operation.povm_element()) * p;
        assert!(pep.distance(&p.scale_real(inst.mu_squared)) < 1e-10);
        assert!((inst.weights.iter().sum::<f64>() - inst.mu_squared).abs() < 1e-12);
        assert!(random_reversible_instance(&mut rng, 4, 2, 3).is_err());
    }

    #[test]
    fn reversible_channel_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let inst = random_reversible_channel(&mut rng, 8, 2, 4).unwrap();
        assert!(inst.operation.is_deterministic(&ToleranceConfig::default()));
    }
}
