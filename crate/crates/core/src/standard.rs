//! Frequently used operators, codes and operations.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{tensor_product, ComplexMatrix, ToleranceConfig, C64};
use crate::operations::QuantumOperation;
use crate::reversibility::CodeSubspace;

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).expect("static shape")
}

pub fn pauli_y() -> ComplexMatrix {
    let i = C64::new(0.0, 1.0);
    ComplexMatrix::from_rows(&[vec![C64::new(0.0, 0.0), -i], vec![i, C64::new(0.0, 0.0)]])
        .expect("static shape")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).expect("static shape")
}

/// `op` acting on qubit `target` (0 = leftmost tensor factor) of `n` qubits.
pub fn on_qubit(n: usize, target: usize, op: &ComplexMatrix) -> ComplexMatrix {
    assert!(target < n, "qubit {target} out of range for {n} qubits");
    (0..n)
        .map(|k| if k == target { op.clone() } else { ComplexMatrix::identity(2) })
        .reduce(|acc, f| tensor_product(&acc, &f))
        .expect("at least one qubit")
}

/// Phase flip `{I/sqrt2, Z/sqrt2}`.
pub fn phase_flip() -> QuantumOperation {
    QuantumOperation::new(
        vec![ComplexMatrix::identity(2).scale_real(FRAC_1_SQRT_2), pauli_z().scale_real(FRAC_1_SQRT_2)],
        &ToleranceConfig::default(),
    )
    .expect("phase flip is deterministic")
}

/// The same phase flip written with projectors `{(I + Z)/2, (I - Z)/2}`.
pub fn phase_flip_projective() -> QuantumOperation {
    let i = ComplexMatrix::identity(2);
    let z = pauli_z();
    QuantumOperation::new(
        vec![(&i + &z).scale_real(0.5), (&i - &z).scale_real(0.5)],
        &ToleranceConfig::default(),
    )
    .expect("projectors are complete")
}

/// Three-qubit bit-flip noise `{sqrt(p0) I, sqrt(p1) X1, sqrt(p2) X2, sqrt(p3) X3}`.
pub fn bit_flip_code_noise(p: &[f64]) -> Result<QuantumOperation> {
    if p.len() != 4 {
        return Err(Error::Shape(format!("bit-flip noise needs 4 probabilities, got {}", p.len())));
    }
    if let Some((index, &value)) = p.iter().enumerate().find(|(_, &x)| x.is_nan() || x < 0.0) {
        return Err(Error::ZeroProbability { index, value });
    }
    let mut kraus = vec![ComplexMatrix::identity(8).scale_real(p[0].sqrt())];
    for (q, &pq) in p[1..].iter().enumerate() {
        kraus.push(on_qubit(3, q, &pauli_x()).scale_real(pq.sqrt()));
    }
    QuantumOperation::new(kraus, &ToleranceConfig::default())
}

/// `span{|000>, |111>}`.
pub fn repetition_code() -> CodeSubspace {
    CodeSubspace::new(
        vec![ComplexMatrix::basis_ket(8, 0), ComplexMatrix::basis_ket(8, 7)],
        &ToleranceConfig::default(),
    )
    .expect("orthonormal basis")
}

/// `{sqrt(1/2) I, sqrt(1/2) Z⊗Z}` on two qubits.
pub fn zz_dephasing() -> QuantumOperation {
    let zz = tensor_product(&pauli_z(), &pauli_z());
    QuantumOperation::new(
        vec![ComplexMatrix::identity(4).scale_real(FRAC_1_SQRT_2), zz.scale_real(FRAC_1_SQRT_2)],
        &ToleranceConfig::default(),
    )
    .expect("deterministic")
}

/// `span{|00>, |11>}`, on which `Z⊗Z` acts as the identity.
pub fn even_parity_code() -> CodeSubspace {
    CodeSubspace::new(
        vec![ComplexMatrix::basis_ket(4, 0), ComplexMatrix::basis_ket(4, 3)],
        &ToleranceConfig::default(),
    )
    .expect("orthonormal basis")
}

/// Amplitude damping `{|0><0| + sqrt(1-g)|1><1|, sqrt(g)|0><1|}`.
pub fn amplitude_damping(gamma: f64) -> Result<QuantumOperation> {
    let k0 = ComplexMatrix::diagonal(&[1.0, (1.0 - gamma).sqrt()]);
    let k1 = ComplexMatrix::from_real_rows(&[&[0.0, gamma.sqrt()], &[0.0, 0.0]])?;
    QuantumOperation::new(vec![k0, k1], &ToleranceConfig::default())
}

/// Only the decay branch `{sqrt(g)|0><1|}` of amplitude damping.
pub fn decay_branch(gamma: f64) -> Result<QuantumOperation> {
    let k1 = ComplexMatrix::from_real_rows(&[&[0.0, gamma.sqrt()], &[0.0, 0.0]])?;
    QuantumOperation::new(vec![k1], &ToleranceConfig::default())
}

pub fn full_space(dim: usize) -> CodeSubspace {
    CodeSubspace::new(
        (0..dim).map(|k| ComplexMatrix::basis_ket(dim, k)).collect(),
        &ToleranceConfig::default(),
    )
    .expect("standard basis")
}
