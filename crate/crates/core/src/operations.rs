//! Quantum operations in operator-sum form.
//!
//! A [`CpMap`] is any completely positive map `X -> sum_j A_j X A_j^dag`; a
//! [`QuantumOperation`] is a `CpMap` whose decomposition is trace decreasing,
//! `sum_j A_j^dag A_j <= I`. Two decompositions describe the same operation
//! exactly when their Choi matrices agree, and then they are related by a
//! unitary remixing `B_j = sum_k u_jk A_k` after zero padding.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, polar_unitary, psd_spectrum, ComplexMatrix, ToleranceConfig, C64, ZERO};

/// Completely positive map given by decomposition operators, with no trace
/// constraint. Adjoints of operations live here.
#[derive(Debug, Clone, PartialEq)]
pub struct CpMap {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl CpMap {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::EmptyKraus)?;
        let dim = first.ensure_square("decomposition operator")?;
        for a in &kraus {
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::Shape(format!(
                    "decomposition operators must all be {dim}x{dim}, found {}x{}",
                    a.rows(),
                    a.cols()
                )));
            }
        }
        Ok(Self { dim, kraus })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }

    /// `sum_j A_j x A_j^dag` for an arbitrary (not necessarily Hermitian) `x`.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for a in &self.kraus {
            out = &out + &(&(a * x) * &a.dagger());
        }
        out
    }

    /// `sum_j A_j^dag A_j`.
    pub fn povm_element(&self) -> ComplexMatrix {
        let mut e = ComplexMatrix::zeros(self.dim, self.dim);
        for a in &self.kraus {
            e = &e + &(&a.dagger() * a);
        }
        e
    }

    /// Map with decomposition `{A_j^dag}`, satisfying `(N, E(O)) = (E^dag(N), O)`
    /// for the Hilbert-Schmidt pairing.
    pub fn adjoint(&self) -> CpMap {
        CpMap { dim: self.dim, kraus: self.kraus.iter().map(ComplexMatrix::dagger).collect() }
    }

    /// `second ∘ first`, decomposition `{B_l A_j}` ordered with `j` varying fastest.
    pub fn compose(second: &CpMap, first: &CpMap) -> Result<CpMap> {
        if second.dim != first.dim {
            return Err(Error::Shape(format!(
                "cannot compose maps on {} and {} dimensions",
                second.dim, first.dim
            )));
        }
        let kraus = second.kraus.iter().flat_map(|b| first.kraus.iter().map(move |a| b * a)).collect();
        Ok(CpMap { dim: first.dim, kraus })
    }

    /// Decomposition `{A_j X}`; with `X` a projector this is the restriction to its range.
    pub fn right_multiply(&self, x: &ComplexMatrix) -> CpMap {
        CpMap { dim: self.dim, kraus: self.kraus.iter().map(|a| a * x).collect() }
    }

    pub fn choi(&self) -> ChoiMatrix {
        let d = self.dim;
        let vecs: Vec<ComplexMatrix> = self.kraus.iter().map(choi_vector).collect();
        let mut m = ComplexMatrix::zeros(d * d, d * d);
        for v in &vecs {
            m = &m + &ComplexMatrix::projector(v);
        }
        ChoiMatrix { dim: d, matrix: m }
    }

    /// Decomposition padded with zero operators to length `n`.
    pub fn padded(&self, n: usize) -> Vec<ComplexMatrix> {
        let mut k = self.kraus.clone();
        while k.len() < n {
            k.push(ComplexMatrix::zeros(self.dim, self.dim));
        }
        k
    }

    /// Unitary remixing `B_j = sum_k u_jk A_k`, padding with zeros up to the size of `u`.
    pub fn remix(&self, u: &ComplexMatrix, tol: &ToleranceConfig) -> Result<CpMap> {
        let n = u.ensure_square("remixing matrix")?;
        if n < self.kraus.len() {
            return Err(Error::Shape(format!(
                "remixing matrix of size {n} is smaller than the decomposition ({})",
                self.kraus.len()
            )));
        }
        let residual = u.unitarity_residual();
        if residual > tol.eq_tol * (n as f64).sqrt() {
            return Err(Error::NotUnitary { residual });
        }
        Ok(CpMap { dim: self.dim, kraus: remix_operators(&self.padded(n), u) })
    }
}

/// `|A>> = sum_m |m> ⊗ A|m>`; its projector summed over the decomposition is
/// `sum_{m,n} |m><n| ⊗ E(|m><n|)`.
fn choi_vector(a: &ComplexMatrix) -> ComplexMatrix {
    let d = a.rows();
    ComplexMatrix::from_fn(d * d, 1, |idx, _| {
        let (m, i) = (idx / d, idx % d);
        a.get(i, m)
    })
}

pub(crate) fn remix_operators(ops: &[ComplexMatrix], u: &ComplexMatrix) -> Vec<ComplexMatrix> {
    let d = ops[0].rows();
    (0..u.rows())
        .map(|j| {
            ops.iter()
                .enumerate()
                .fold(ComplexMatrix::zeros(d, d), |acc, (k, a)| &acc + &a.scale(u.get(j, k)))
        })
        .collect()
}

/// Eigenvalues (descending) of a Hermitian weight matrix together with the
/// remixing `u = V^dag` that diagonalizes it, `u W u^dag = diag(lambda)`.
pub(crate) fn diagonalizing_remix(
    w: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<(Vec<f64>, ComplexMatrix)> {
    let spectrum = hermitian_eig(w, tol)?;
    Ok((spectrum.eigenvalues, spectrum.eigenvectors.dagger()))
}

/// Choi matrix `sum_{m,n} |m><n| ⊗ E(|m><n|)` of a map on a `dim`-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    pub dim: usize,
    pub matrix: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn relative_distance(&self, other: &ChoiMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.matrix.relative_distance(&other.matrix)
    }
}

/// Density operator, either normalized or the raw (trace `<= 1`) output of an operation.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    normalized: bool,
}

impl DensityOperator {
    /// Validates a Hermitian, positive semidefinite, unit-trace matrix.
    pub fn new(matrix: ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        Self::validated(matrix, true, tol)
    }

    /// Validates a positive operator with trace in `(0, 1 + eq_tol]`.
    pub fn unnormalized(matrix: ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        Self::validated(matrix, false, tol)
    }

    fn validated(matrix: ComplexMatrix, normalized: bool, tol: &ToleranceConfig) -> Result<Self> {
        psd_spectrum(&matrix, tol)?;
        let trace = matrix.trace().re;
        let ok = if normalized {
            (trace - 1.0).abs() <= tol.eq_tol
        } else {
            trace > 0.0 && trace <= 1.0 + tol.eq_tol
        };
        if !ok {
            return Err(Error::BadTrace { trace });
        }
        Ok(Self { matrix: matrix.hermitian_part(), normalized })
    }

    /// Pure state `|psi><psi|` from a nonzero column vector, normalizing it.
    pub fn from_ket(ket: &ComplexMatrix) -> Result<Self> {
        if ket.cols() != 1 {
            return Err(Error::Shape(format!("ket must be a column, got {} columns", ket.cols())));
        }
        let norm = ket.frobenius_norm();
        if norm == 0.0 {
            return Err(Error::Shape("ket is the zero vector".into()));
        }
        let v = ket.scale_real(1.0 / norm);
        Ok(Self { matrix: ComplexMatrix::projector(&v), normalized: true })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64), normalized: true }
    }

    pub(crate) fn from_trusted(matrix: ComplexMatrix, normalized: bool) -> Self {
        Self { matrix, normalized }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Rescaled to unit trace, returning the previous trace alongside.
    pub fn normalize(&self) -> (DensityOperator, f64) {
        let t = self.trace();
        (Self { matrix: self.matrix.scale_real(1.0 / t), normalized: true }, t)
    }
}

/// Trace-decreasing completely positive map.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumOperation {
    map: CpMap,
}

impl QuantumOperation {
    pub fn new(kraus: Vec<ComplexMatrix>, tol: &ToleranceConfig) -> Result<Self> {
        Self::from_map(CpMap::new(kraus)?, tol)
    }

    pub fn from_map(map: CpMap, tol: &ToleranceConfig) -> Result<Self> {
        let e = map.povm_element();
        let spectrum = hermitian_eig(&e, tol)?;
        let max_eigenvalue = spectrum.eigenvalues[0];
        if max_eigenvalue > 1.0 + tol.eq_tol {
            return Err(Error::NotTraceDecreasing { max_eigenvalue });
        }
        Ok(Self { map })
    }

    pub(crate) fn from_map_unchecked(map: CpMap) -> Self {
        Self { map }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_map_unchecked(CpMap { dim, kraus: vec![ComplexMatrix::identity(dim)] })
    }

    /// Conjugation by `u`, which must be unitary.
    pub fn unitary(u: ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        u.ensure_square("unitary")?;
        let residual = u.unitarity_residual();
        if residual > tol.eq_tol * (u.rows() as f64).sqrt() {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self::from_map_unchecked(CpMap::new(vec![u])?))
    }

    pub fn as_map(&self) -> &CpMap {
        &self.map
    }

    pub fn into_map(self) -> CpMap {
        self.map
    }

    pub fn dim(&self) -> usize {
        self.map.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.map.kraus
    }

    pub fn len(&self) -> usize {
        self.map.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.kraus.is_empty()
    }

    fn check_state(&self, rho: &DensityOperator) -> Result<()> {
        if rho.dim() != self.dim() {
            return Err(Error::Shape(format!(
                "state of dimension {} for an operation on {}",
                rho.dim(),
                self.dim()
            )));
        }
        if !rho.is_normalized() {
            return Err(Error::BadTrace { trace: rho.trace() });
        }
        Ok(())
    }

    /// Unnormalized output `E(rho)`.
    pub fn apply(&self, rho: &DensityOperator, tol: &ToleranceConfig) -> Result<DensityOperator> {
        self.check_state(rho)?;
        let out = self.map.apply_operator(rho.matrix()).hermitian_part();
        let trace = out.trace().re;
        if trace < tol.rank_cutoff {
            return Err(Error::Annihilated { trace });
        }
        if trace > 1.0 + tol.eq_tol {
            return Err(Error::BadTrace { trace });
        }
        Ok(DensityOperator::from_trusted(out, false))
    }

    /// `E(rho) / tr E(rho)` together with the probability `tr E(rho)`.
    pub fn apply_normalized(
        &self,
        rho: &DensityOperator,
        tol: &ToleranceConfig,
    ) -> Result<(DensityOperator, f64)> {
        Ok(self.apply(rho, tol)?.normalize())
    }

    pub fn povm_element(&self) -> ComplexMatrix {
        self.map.povm_element()
    }

    pub fn compose(second: &QuantumOperation, first: &QuantumOperation) -> Result<QuantumOperation> {
        Ok(Self::from_map_unchecked(CpMap::compose(&second.map, &first.map)?))
    }

    pub fn adjoint(&self) -> CpMap {
        self.map.adjoint()
    }

    pub fn choi(&self) -> ChoiMatrix {
        self.map.choi()
    }

    pub fn remix(&self, u: &ComplexMatrix, tol: &ToleranceConfig) -> Result<QuantumOperation> {
        Ok(Self::from_map_unchecked(self.map.remix(u, tol)?))
    }

    pub fn is_deterministic(&self, tol: &ToleranceConfig) -> bool {
        self.completeness_residual() <= tol.eq_tol
    }

    /// `||sum A^dag A - I||_F / ||I||_F`.
    pub fn completeness_residual(&self) -> f64 {
        self.povm_element().relative_distance(&ComplexMatrix::identity(self.dim()))
    }

    pub fn is_pure(&self, tol: &ToleranceConfig) -> Result<bool> {
        let min = self.minimal_decomposition(tol)?;
        Ok(min.len() == 1 && min.kraus()[0].frobenius_norm() > 0.0)
    }

    /// Canonical decomposition with respect to `I/D` with zero operators removed.
    pub fn minimal_decomposition(&self, tol: &ToleranceConfig) -> Result<QuantumOperation> {
        let kraus = minimal_operators(&self.map.kraus, tol)?;
        if kraus.is_empty() {
            // Zero map: a single zero operator is the shortest representation.
            return Ok(Self::from_map_unchecked(CpMap {
                dim: self.dim(),
                kraus: vec![ComplexMatrix::zeros(self.dim(), self.dim())],
            }));
        }
        Ok(Self::from_map_unchecked(CpMap { dim: self.dim(), kraus }))
    }
}

/// Remixes `ops` so their Gram matrix is diagonal and drops operators whose
/// normalized weight is below the rank cutoff.
pub(crate) fn minimal_operators(ops: &[ComplexMatrix], tol: &ToleranceConfig) -> Result<Vec<ComplexMatrix>> {
    let n = ops.len();
    // W_jk = tr(A_j A_k^dag) / tr(E(I)).
    let gram = ComplexMatrix::from_fn(n, n, |j, k| ops[k].hs_inner(&ops[j]));
    let total = gram.trace().re;
    if total <= 0.0 {
        return Ok(Vec::new());
    }
    let w = gram.scale_real(1.0 / total);
    let (lambda, u) = diagonalizing_remix(&w, tol)?;
    let remixed = remix_operators(ops, &u);
    Ok(remixed.into_iter().zip(lambda).filter(|(_, l)| *l >= tol.rank_cutoff).map(|(a, _)| a).collect())
}

pub fn operations_equal(e1: &QuantumOperation, e2: &QuantumOperation, tol: &ToleranceConfig) -> bool {
    e1.dim() == e2.dim() && e1.choi().relative_distance(&e2.choi()) <= tol.eq_tol
}

/// Unitary `u` with `e2.kraus[j] = sum_k u_jk e1.kraus[k]` after zero padding,
/// or `None` when the two decompositions describe different operations.
pub fn find_remix_unitary(
    e1: &QuantumOperation,
    e2: &QuantumOperation,
    tol: &ToleranceConfig,
) -> Option<ComplexMatrix> {
    if !operations_equal(e1, e2, tol) {
        return None;
    }
    let n = e1.len().max(e2.len());
    let x1 = stacked_vectors(&e1.as_map().padded(n));
    let x2 = stacked_vectors(&e2.as_map().padded(n));
    // X2 = X1 u^T. With G = X1^dag X1 the polar factor of X1^dag X2 = G u^T
    // agrees with u^T on the range of G, which is all X1 sees.
    let overlap = &x1.dagger() * &x2;
    let w = polar_unitary(&overlap).ok()?;
    let u = w.transpose();
    let residual = remix_residual(e1, e2, &u);
    (residual <= tol.eq_tol).then_some(u)
}

/// Relative Frobenius residual of `B_j - sum_k u_jk A_k` over the whole decomposition.
pub fn remix_residual(e1: &QuantumOperation, e2: &QuantumOperation, u: &ComplexMatrix) -> f64 {
    let n = u.rows();
    if n < e1.len() || n < e2.len() {
        return f64::INFINITY;
    }
    let rebuilt = remix_operators(&e1.as_map().padded(n), u);
    let target = e2.as_map().padded(n);
    let mut diff = 0.0;
    let mut scale = 0.0f64;
    for (a, b) in rebuilt.iter().zip(&target) {
        diff += a.distance(b).powi(2);
        scale += b.frobenius_norm().powi(2);
    }
    let diff = diff.sqrt();
    if scale == 0.0 {
        diff
    } else {
        diff / scale.sqrt()
    }
}

/// `D^2 x n` matrix whose columns are the column-stacked operators.
fn stacked_vectors(ops: &[ComplexMatrix]) -> ComplexMatrix {
    let d2 = ops[0].rows() * ops[0].cols();
    let cols: Vec<Vec<C64>> = ops.iter().map(ComplexMatrix::vectorize).collect();
    ComplexMatrix::from_fn(d2, ops.len(), |i, j| cols[j].get(i).copied().unwrap_or(ZERO))
}
