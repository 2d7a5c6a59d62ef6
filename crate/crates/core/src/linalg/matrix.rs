use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix with at least one row and one column and finite
/// entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix {}x{} ", self.rows(), self.cols())?;
        f.debug_list()
            .entries(
                (0..self.rows()).map(|i| (0..self.cols()).map(|j| self.inner[(i, j)]).collect::<Vec<_>>()),
            )
            .finish()
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("matrix must be non-empty, got {rows}x{cols}")));
        }
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Self::from_nalgebra(DMatrix::from_row_slice(rows, cols, &entries))
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Shape("rows have unequal lengths".into()));
        }
        Self::new(nrows, ncols, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> =
            rows.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn from_nalgebra(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() == 0 || inner.ncols() == 0 {
            return Err(Error::Shape("matrix must be non-empty".into()));
        }
        for j in 0..inner.ncols() {
            for i in 0..inner.nrows() {
                let z = inner[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self { inner })
    }

    /// Wraps a matrix produced by arithmetic on already-validated values.
    pub(crate) fn wrap(inner: DMatrix<C64>) -> Self {
        debug_assert!(inner.nrows() > 0 && inner.ncols() > 0);
        Self { inner }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix must be non-empty");
        Self::wrap(DMatrix::from_fn(rows, cols, f))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { C64::new(values[i], 0.0) } else { ZERO })
    }

    /// Column vector from its components.
    pub fn column(components: &[C64]) -> Result<Self> {
        Self::new(components.len(), 1, components.to_vec())
    }

    /// Computational basis ket `|index>` in `dim` dimensions.
    pub fn basis_ket(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        Self::from_fn(dim, 1, |i, _| if i == index { ONE } else { ZERO })
    }

    /// Outer product `|a><b|` of two column vectors.
    pub fn outer(a: &Self, b: &Self) -> Self {
        a * &b.dagger()
    }

    /// Projector `|v><v|` onto a column vector.
    pub fn projector(v: &Self) -> Self {
        Self::outer(v, v)
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn into_nalgebra(self) -> DMatrix<C64> {
        self.inner
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.inner[(row, col)]
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    pub fn dagger(&self) -> Self {
        Self::wrap(self.inner.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self::wrap(self.inner.transpose())
    }

    pub fn conj(&self) -> Self {
        Self::wrap(self.inner.map(|z| z.conj()))
    }

    pub fn trace(&self) -> C64 {
        self.inner.diagonal().iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self::wrap(self.inner.map(|z| z * factor))
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        Self::wrap(self.inner.map(|z| z * factor))
    }

    /// Hilbert-Schmidt inner product `tr(self^dag other)`.
    pub fn hs_inner(&self, other: &Self) -> C64 {
        self.inner.iter().zip(other.inner.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// `||self - other||_F`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.inner.iter().zip(other.inner.iter()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    /// `||self - other||_F / max(||self||_F, ||other||_F)`, zero when both vanish.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        let scale = self.frobenius_norm().max(other.frobenius_norm());
        let diff = self.distance(other);
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }

    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.distance(&self.dagger())
    }

    /// Hermitian part `(m + m^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::wrap((&self.inner + self.inner.adjoint()) * C64::new(0.5, 0.0))
    }

    /// Unitarity residual `max(||U^dag U - I||_F, ||U U^dag - I||_F)`.
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let id = Self::identity(self.rows());
        let a = (&self.dagger() * self).distance(&id);
        let b = (self * &self.dagger()).distance(&id);
        a.max(b)
    }

    /// Columns `start..start + count` as a new matrix.
    pub fn column_block(&self, start: usize, count: usize) -> Self {
        Self::wrap(self.inner.columns(start, count).into_owned())
    }

    /// Column-stacked vector: entry `col * rows + row` holds `self[row, col]`.
    pub fn vectorize(&self) -> Vec<C64> {
        self.inner.iter().copied().collect()
    }

    /// Horizontal concatenation of matrices with a common row count.
    pub fn hstack(blocks: &[Self]) -> Result<Self> {
        let first = blocks.first().ok_or_else(|| Error::Shape("hstack of zero blocks".into()))?;
        let rows = first.rows();
        if blocks.iter().any(|b| b.rows() != rows) {
            return Err(Error::Shape("hstack blocks need equal row counts".into()));
        }
        let cols: usize = blocks.iter().map(Self::cols).sum();
        let mut out = DMatrix::from_element(rows, cols, ZERO);
        let mut offset = 0;
        for b in blocks {
            out.columns_mut(offset, b.cols()).copy_from(&b.inner);
            offset += b.cols();
        }
        Ok(Self::wrap(out))
    }

    pub(crate) fn ensure_square(&self, what: &str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(Error::Shape(format!("{what} must be square, got {}x{}", self.rows(), self.cols())))
        }
    }

    pub(crate) fn ensure_same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.rows() == other.rows() && self.cols() == other.cols() {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )))
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols(),
            rhs.rows(),
            "matrix product of {}x{} and {}x{}",
            self.rows(),
            self.cols(),
            rhs.rows(),
            rhs.cols()
        );
        ComplexMatrix::wrap(&self.inner * &rhs.inner)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows(), self.cols()), (rhs.rows(), rhs.cols()));
        ComplexMatrix::wrap(&self.inner + &rhs.inner)
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self + &rhs
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows(), self.cols()), (rhs.rows(), rhs.cols()));
        ComplexMatrix::wrap(&self.inner - &rhs.inner)
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self - &rhs
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        ComplexMatrix::wrap(-&self.inner)
    }
}

/// Kronecker product; `(a ⊗ b)[i*p + k, j*q + l] = a[i, j] * b[k, l]` for `b` of shape `p x q`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::wrap(a.inner.kronecker(&b.inner))
}

/// Which factor of a bipartite space survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Partial trace of a square matrix on `A ⊗ B` with factor dimensions `dims`.
pub fn partial_trace(m: &ComplexMatrix, dims: (usize, usize), keep: Keep) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    let n = m.ensure_square("partial trace input")?;
    if da == 0 || db == 0 || da * db != n {
        return Err(Error::Shape(format!("partial trace: {n}x{n} matrix does not factor as {da}*{db}")));
    }
    let out = match keep {
        Keep::A => {
            ComplexMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m.get(i * db + k, j * db + k)).sum())
        }
        Keep::B => {
            ComplexMatrix::from_fn(db, db, |k, l| (0..da).map(|i| m.get(i * db + k, i * db + l)).sum())
        }
    };
    Ok(out)
}
