use nalgebra::{DMatrix, SymmetricEigen, SVD};

use super::matrix::{ComplexMatrix, C64, ZERO};
use super::tolerance::ToleranceConfig;
use crate::error::{Error, Result};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors, column `k` paired with `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianSpectrum {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        &(v * &ComplexMatrix::diagonal(&self.eigenvalues)) * &v.dagger()
    }

    /// Number of eigenvalues strictly above `cutoff`.
    pub fn rank(&self, cutoff: f64) -> usize {
        self.eigenvalues.iter().filter(|&&x| x > cutoff).count()
    }

    pub fn eigenvector(&self, k: usize) -> ComplexMatrix {
        self.eigenvectors.column_block(k, 1)
    }
}

/// Rotates a column so that its largest-magnitude entry is real and positive.
pub(crate) fn fix_column_phase(col: &mut [C64]) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in col.iter().enumerate() {
        // Small margin so near-ties resolve to the lowest index.
        if z.norm() > best_mag + 1e-12 {
            best_mag = z.norm();
            best = i;
        }
    }
    if best_mag > 0.0 {
        let phase = col[best].conj() / col[best].norm();
        for z in col.iter_mut() {
            *z *= phase;
        }
    }
}

/// `u` times the global phase that makes the largest-magnitude entry of its
/// first column real and positive.
pub fn with_global_phase_convention(u: &ComplexMatrix) -> ComplexMatrix {
    let first: Vec<C64> = (0..u.rows()).map(|i| u.get(i, 0)).collect();
    let mut fixed = first.clone();
    fix_column_phase(&mut fixed);
    match first.iter().position(|z| z.norm() > 0.0) {
        Some(k) => u.scale(fixed[k] / first[k]),
        None => u.clone(),
    }
}

pub(crate) fn fix_phases(m: &mut DMatrix<C64>) {
    for mut c in m.column_iter_mut() {
        fix_column_phase(c.as_mut_slice());
    }
}

pub fn hermitian_eig(m: &ComplexMatrix, tol: &ToleranceConfig) -> Result<HermitianSpectrum> {
    let n = m.ensure_square("Hermitian eigendecomposition input")?;
    let deviation = m.hermitian_deviation();
    if deviation > tol.eq_tol * m.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let h = m.hermitian_part();
    let eig = SymmetricEigen::new(h.into_nalgebra());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = DMatrix::from_element(n, n, ZERO);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    fix_phases(&mut vecs);
    Ok(HermitianSpectrum { eigenvalues, eigenvectors: ComplexMatrix::wrap(vecs) })
}

/// Checks `m` is Hermitian with no eigenvalue below `-rank_cutoff`, returning its spectrum.
pub fn psd_spectrum(m: &ComplexMatrix, tol: &ToleranceConfig) -> Result<HermitianSpectrum> {
    let spectrum = hermitian_eig(m, tol)?;
    if let Some(&min) = spectrum.eigenvalues.last() {
        if min < -tol.rank_cutoff.max(tol.eq_tol * m.frobenius_norm()) {
            return Err(Error::NotPositive { eigenvalue: min });
        }
    }
    Ok(spectrum)
}

/// Orthonormal basis (as columns) of the range of an orthogonal projector.
/// Returns `None` when the projector is zero.
pub fn projector_range(p: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Option<ComplexMatrix>> {
    let spectrum = hermitian_eig(p, tol)?;
    let r = spectrum.eigenvalues.iter().filter(|&&x| x > 0.5).count();
    Ok((r > 0).then(|| spectrum.eigenvectors.column_block(0, r)))
}

/// Orthonormal basis of the orthogonal complement of the column span of an
/// isometry `y` (columns already orthonormal). `None` when `y` is square.
pub fn orthonormal_complement(y: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Option<ComplexMatrix>> {
    let n = y.rows();
    let q = &ComplexMatrix::identity(n) - &(y * &y.dagger());
    projector_range(&q, tol)
}

/// Singular value decomposition `m = u diag(s) v^dag` with descending `s`.
pub(crate) fn svd(m: &ComplexMatrix) -> (ComplexMatrix, Vec<f64>, ComplexMatrix) {
    let svd = SVD::new(m.as_nalgebra().clone(), true, true);
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let k = order.len();
    let mut uo = DMatrix::from_element(u.nrows(), k, ZERO);
    let mut vo = DMatrix::from_element(v_t.ncols(), k, ZERO);
    let mut s = Vec::with_capacity(k);
    for (dst, &src) in order.iter().enumerate() {
        uo.set_column(dst, &u.column(src));
        vo.set_column(dst, &v_t.row(src).adjoint());
        s.push(svd.singular_values[src]);
    }
    (ComplexMatrix::wrap(uo), s, ComplexMatrix::wrap(vo))
}

/// Unitary polar factor of a square matrix (`u v^dag` from its SVD).
pub fn polar_unitary(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    m.ensure_square("polar decomposition input")?;
    let (u, _, v) = svd(m);
    Ok(&u * &v.dagger())
}

/// Least-squares solution `x` of `a x = b` via the SVD pseudo-inverse, with
/// singular values below `cutoff` (relative to the largest) treated as zero.
pub fn least_squares(a: &ComplexMatrix, b: &ComplexMatrix, cutoff: f64) -> Result<ComplexMatrix> {
    if a.rows() != b.rows() {
        return Err(Error::Shape(format!("least squares: {} rows vs {} rows", a.rows(), b.rows())));
    }
    let (u, s, v) = svd(a);
    let smax = s.first().copied().unwrap_or(0.0);
    let inv: Vec<f64> =
        s.iter().map(|&x| if smax > 0.0 && x > cutoff * smax { 1.0 / x } else { 0.0 }).collect();
    let ub = &u.dagger() * b;
    let scaled = ComplexMatrix::from_fn(ub.rows(), ub.cols(), |i, j| ub.get(i, j) * inv[i]);
    Ok(&v * &scaled)
}

/// Completes the isometry that `a` defines on the support of `support_projector`
/// into a full unitary.
///
/// Requires `P a^dag a P = c P` with `c > 0`. Returns `(U, c)` with
/// `a P = sqrt(c) U P`. Off the support, `U` maps the complement of the support
/// onto the complement of the image by the unitary closest to the action of
/// `a / sqrt(c)` there.
pub fn unitary_factor(
    a: &ComplexMatrix,
    support_projector: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<(ComplexMatrix, f64)> {
    let n = a.ensure_square("unitary_factor operator")?;
    a.ensure_same_shape(support_projector, "unitary_factor operator vs projector")?;
    let p = support_projector;
    let basis = projector_range(p, tol)?.ok_or(Error::SupportViolation { residual: f64::INFINITY })?;
    let r = basis.cols();
    let pa = &(&(p * &a.dagger()) * a) * p;
    let c = pa.trace().re / r as f64;
    if c <= tol.rank_cutoff {
        return Err(Error::SupportViolation { residual: pa.frobenius_norm() });
    }
    let residual = pa.distance(&p.scale_real(c));
    if residual > tol.eq_tol * c.max(1.0) {
        return Err(Error::SupportViolation { residual });
    }
    let k = a.scale_real(1.0 / c.sqrt());
    let image = &k * &basis;
    let mut u = &image * &basis.dagger();
    if r < n {
        let support_comp = orthonormal_complement(&basis, tol)?
            .ok_or_else(|| Error::Shape("support complement is empty".into()))?;
        let image_comp = orthonormal_complement(&image, tol)?
            .ok_or_else(|| Error::Shape("image complement is empty".into()))?;
        let overlap = &(&image_comp.dagger() * &k) * &support_comp;
        let q = polar_unitary(&overlap)?;
        u = &u + &(&(&image_comp * &q) * &support_comp.dagger());
    }
    Ok((u, c))
}
