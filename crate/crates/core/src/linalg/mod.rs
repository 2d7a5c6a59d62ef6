//! Dense complex linear algebra: products, partial traces, Hermitian
//! spectra, unitary completion and entropy functions.

mod decomp;
mod entropy;
mod matrix;
mod tolerance;

pub use decomp::{
    hermitian_eig, least_squares, orthonormal_complement, polar_unitary, projector_range, psd_spectrum,
    unitary_factor, with_global_phase_convention, HermitianSpectrum,
};
pub(crate) use entropy::spectral_entropy;
pub use entropy::{binary_entropy, shannon_entropy, von_neumann_entropy};
pub(crate) use matrix::ZERO;
pub use matrix::{partial_trace, tensor_product, ComplexMatrix, Keep, C64};
pub use tolerance::ToleranceConfig;

/// Rank of a Gram matrix `G_jk = tr(X_j^dag X_k)` of the given operators.
pub fn operator_span_dim(ops: &[ComplexMatrix], tol: &ToleranceConfig) -> crate::Result<usize> {
    if ops.is_empty() {
        return Ok(0);
    }
    let n = ops.len();
    let gram = ComplexMatrix::from_fn(n, n, |j, k| ops[j].hs_inner(&ops[k]));
    Ok(hermitian_eig(&gram, tol)?.rank(tol.rank_cutoff))
}
