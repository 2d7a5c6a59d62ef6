//! Entanglement fidelity, entropy exchange and the entropy inequalities that
//! bound them.
//!
//! The reference system `R` purifies the input state `rho` of `Q` through the
//! spectral decomposition of `rho`, so `|Psi> = sum_m sqrt(p_m) |m>_R ⊗ |phi_m>_Q`
//! with `R` as the left tensor factor.

use crate::error::{Error, Result};
use crate::linalg::{
    binary_entropy, hermitian_eig, partial_trace, shannon_entropy, spectral_entropy, tensor_product,
    von_neumann_entropy, ComplexMatrix, Keep, ToleranceConfig,
};
use crate::operations::{diagonalizing_remix, CpMap, DensityOperator, QuantumOperation};

/// Outcome of checking `lesser <= greater` with slack `greater - lesser`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityCheck {
    pub lesser: f64,
    pub greater: f64,
    pub slack: f64,
    pub holds: bool,
    pub saturated: bool,
}

impl InequalityCheck {
    pub fn new(lesser: f64, greater: f64, tol: &ToleranceConfig) -> Self {
        let slack = greater - lesser;
        Self {
            lesser,
            greater,
            slack,
            holds: slack >= -tol.eq_tol,
            saturated: slack.abs() < tol.saturation_tol(),
        }
    }
}

/// Spectral purification of a normalized state.
#[derive(Debug, Clone, PartialEq)]
pub struct Purification {
    /// Joint ket on `R ⊗ Q`, dimension `D^2`.
    pub vector: ComplexMatrix,
    /// Schmidt weights `p_m` (eigenvalues of `rho`, descending).
    pub weights: Vec<f64>,
    /// Eigenvectors `|phi_m>` of `rho` as columns.
    pub system_basis: ComplexMatrix,
}

impl Purification {
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.vector)
    }
}

pub fn purify(rho: &DensityOperator, tol: &ToleranceConfig) -> Result<Purification> {
    if !rho.is_normalized() {
        return Err(Error::BadTrace { trace: rho.trace() });
    }
    let d = rho.dim();
    let spectrum = hermitian_eig(rho.matrix(), tol)?;
    let weights: Vec<f64> = spectrum.eigenvalues.iter().map(|&p| p.max(0.0)).collect();
    let basis = spectrum.eigenvectors;
    let vector = ComplexMatrix::from_fn(d * d, 1, |idx, _| {
        let (m, i) = (idx / d, idx % d);
        basis.get(i, m) * weights[m].sqrt()
    });
    Ok(Purification { vector, weights, system_basis: basis })
}

/// Normalized joint state `(I^R ⊗ E)(|Psi><Psi|) / tr E(rho)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RQState {
    pub matrix: ComplexMatrix,
    pub purification: Purification,
    pub system_dim: usize,
}

impl RQState {
    pub fn reference_state(&self) -> ComplexMatrix {
        partial_trace(&self.matrix, (self.system_dim, self.system_dim), Keep::A)
            .expect("joint state factors by construction")
    }

    pub fn system_state(&self) -> ComplexMatrix {
        partial_trace(&self.matrix, (self.system_dim, self.system_dim), Keep::B)
            .expect("joint state factors by construction")
    }
}

fn output_trace(e: &CpMap, rho: &DensityOperator, tol: &ToleranceConfig) -> Result<f64> {
    if rho.dim() != e.dim() {
        return Err(Error::Shape(format!(
            "state of dimension {} for an operation on {}",
            rho.dim(),
            e.dim()
        )));
    }
    if !rho.is_normalized() {
        return Err(Error::BadTrace { trace: rho.trace() });
    }
    let trace = e.apply_operator(rho.matrix()).trace().re;
    if trace < tol.rank_cutoff {
        return Err(Error::Annihilated { trace });
    }
    Ok(trace)
}

pub fn rq_output_state(
    e: &QuantumOperation,
    rho: &DensityOperator,
    tol: &ToleranceConfig,
) -> Result<RQState> {
    let trace = output_trace(e.as_map(), rho, tol)?;
    let purification = purify(rho, tol)?;
    let d = e.dim();
    let id_r = ComplexMatrix::identity(d);
    let psi = &purification.vector;
    let mut joint = ComplexMatrix::zeros(d * d, d * d);
    for a in e.kraus() {
        let v = &tensor_product(&id_r, a) * psi;
        joint = &joint + &ComplexMatrix::projector(&v);
    }
    Ok(RQState { matrix: joint.scale_real(1.0 / trace), purification, system_dim: d })
}

/// `rho^{R'} = tr_Q(rho^{RQ'})`.
pub fn r_output_state(
    e: &QuantumOperation,
    rho: &DensityOperator,
    tol: &ToleranceConfig,
) -> Result<DensityOperator> {
    let rq = rq_output_state(e, rho, tol)?;
    DensityOperator::new(rq.reference_state().hermitian_part(), tol)
}

/// `F_e = sum_j |tr(rho A_j)|^2 / tr E(rho)`.
pub fn entanglement_fidelity(
    e: &QuantumOperation,
    rho: &DensityOperator,
    tol: &ToleranceConfig,
) -> Result<f64> {
    let trace = output_trace(e.as_map(), rho, tol)?;
    let overlap: f64 = e.kraus().iter().map(|a| (rho.matrix() * a).trace().norm_sqr()).sum();
    Ok(overlap / trace)
}

/// `W_jk = tr(A_j rho A_k^dag) / tr E(rho)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WMatrix {
    pub matrix: ComplexMatrix,
    /// `tr E(rho)`.
    pub output_trace: f64,
}

impl WMatrix {
    /// Diagonal `q_j`, the weight of each decomposition operator in the output.
    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.matrix.rows()).map(|j| self.matrix.get(j, j).re).collect()
    }

    pub fn entropy(&self, tol: &ToleranceConfig) -> Result<f64> {
        von_neumann_entropy(&self.matrix, tol)
    }

    /// Frobenius norm of the off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        let n = self.matrix.rows();
        let mut s = 0.0;
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    s += self.matrix.get(j, k).norm_sqr();
                }
            }
        }
        s.sqrt()
    }
}

pub fn w_matrix(e: &QuantumOperation, rho: &DensityOperator, tol: &ToleranceConfig) -> Result<WMatrix> {
    w_matrix_of_map(e.as_map(), rho, tol)
}

pub(crate) fn w_matrix_of_map(e: &CpMap, rho: &DensityOperator, tol: &ToleranceConfig) -> Result<WMatrix> {
    let trace = output_trace(e, rho, tol)?;
    let ops = e.kraus();
    let n = ops.len();
    let with_state: Vec<ComplexMatrix> = ops.iter().map(|a| a * rho.matrix()).collect();
    let mut w = ComplexMatrix::from_fn(n, n, |j, k| ops[k].hs_inner(&with_state[j]) / trace);
    w = w.hermitian_part();
    Ok(WMatrix { matrix: w, output_trace: trace })
}

/// `S_e(rho, E) = S(W)`.
pub fn entropy_exchange(e: &QuantumOperation, rho: &DensityOperator, tol: &ToleranceConfig) -> Result<f64> {
    w_matrix(e, rho, tol)?.entropy(tol)
}

/// Remixed decomposition whose `W` matrix is diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalDecomposition {
    pub operation: QuantumOperation,
    /// Eigenvalues of `W`, descending.
    pub eigenvalues: Vec<f64>,
    /// `u` with `Ã_j = sum_k u_jk A_k`.
    pub remix_unitary: ComplexMatrix,
}

impl CanonicalDecomposition {
    pub fn entropy(&self, tol: &ToleranceConfig) -> f64 {
        spectral_entropy(&self.eigenvalues, tol)
    }
}

pub fn canonical_decomposition(
    e: &QuantumOperation,
    rho: &DensityOperator,
    tol: &ToleranceConfig,
) -> Result<CanonicalDecomposition> {
    let w = w_matrix(e, rho, tol)?;
    let (eigenvalues, u) = diagonalizing_remix(&w.matrix, tol)?;
    let operation = e.remix(&u, tol)?;
    Ok(CanonicalDecomposition {
        operation,
        eigenvalues: eigenvalues.into_iter().map(|x| x.max(0.0)).collect(),
        remix_unitary: u,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoReport {
    pub entropy_exchange: f64,
    pub fidelity: f64,
    /// `h(F_e) + (1 - F_e) log(D^2 - 1)`.
    pub bound: f64,
    pub check: InequalityCheck,
}

pub fn fano_check(e: &QuantumOperation, rho: &DensityOperator, tol: &ToleranceConfig) -> Result<FanoReport> {
    let s_e = entropy_exchange(e, rho, tol)?;
    let f = entanglement_fidelity(e, rho, tol)?;
    let d2 = (e.dim() * e.dim()) as f64;
    let tail = if d2 > 1.0 { (1.0 - f) * tol.log(d2 - 1.0) } else { 0.0 };
    let bound = binary_entropy(f, tol) + tail;
    Ok(FanoReport { entropy_exchange: s_e, fidelity: f, bound, check: InequalityCheck::new(s_e, bound, tol) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubadditivityReport {
    pub s_reference: f64,
    pub s_system: f64,
    pub entropy_exchange: f64,
    /// `S_e <= S(R') + S(Q')`.
    pub rq: InequalityCheck,
    /// `S(Q') <= S(R') + S_e`.
    pub re: InequalityCheck,
    /// `S(R') <= S(Q') + S_e`.
    pub qe: InequalityCheck,
    /// `|S(Q') - S(R')| <= S_e`.
    pub araki_lieb: InequalityCheck,
}

impl SubadditivityReport {
    pub fn all_hold(&self) -> bool {
        self.rq.holds && self.re.holds && self.qe.holds && self.araki_lieb.holds
    }
}

pub fn subadditivity_report(
    e: &QuantumOperation,
    rho: &DensityOperator,
    tol: &ToleranceConfig,
) -> Result<SubadditivityReport> {
    let rq = rq_output_state(e, rho, tol)?;
    let s_r = von_neumann_entropy(&rq.reference_state(), tol)?;
    let s_q = von_neumann_entropy(&rq.system_state(), tol)?;
    let s_e = entropy_exchange(e, rho, tol)?;
    Ok(SubadditivityReport {
        s_reference: s_r,
        s_system: s_q,
        entropy_exchange: s_e,
        rq: InequalityCheck::new(s_e, s_r + s_q, tol),
        re: InequalityCheck::new(s_q, s_r + s_e, tol),
        qe: InequalityCheck::new(s_r, s_q + s_e, tol),
        araki_lieb: InequalityCheck::new((s_q - s_r).abs(), s_e, tol),
    })
}

/// `S_e <= H(q)` for the diagonal of `W` in the given decomposition.
pub fn shannon_bound_check(
    e: &QuantumOperation,
    rho: &DensityOperator,
    tol: &ToleranceConfig,
) -> Result<InequalityCheck> {
    let w = w_matrix(e, rho, tol)?;
    let s_e = w.entropy(tol)?;
    let h = shannon_entropy(&w.probabilities(), tol)?;
    Ok(InequalityCheck::new(s_e, h, tol))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataProcessingReport {
    pub s_reference: f64,
    /// `S(Q') - S_e(rho, E)`.
    pub after_first: f64,
    /// `S(Q'') - S_e(rho, D∘E)`.
    pub after_second: f64,
    pub left: InequalityCheck,
    pub right: InequalityCheck,
}

pub fn data_processing_check(
    e: &QuantumOperation,
    d: &QuantumOperation,
    rho: &DensityOperator,
    tol: &ToleranceConfig,
) -> Result<DataProcessingReport> {
    if !d.is_deterministic(tol) {
        return Err(Error::NotDeterministic { residual: d.completeness_residual() });
    }
    let s_r = von_neumann_entropy(r_output_state(e, rho, tol)?.matrix(), tol)?;
    let (q1, _) = e.apply_normalized(rho, tol)?;
    let after_first = von_neumann_entropy(q1.matrix(), tol)? - entropy_exchange(e, rho, tol)?;
    let de = QuantumOperation::compose(d, e)?;
    let (q2, _) = de.apply_normalized(rho, tol)?;
    let after_second = von_neumann_entropy(q2.matrix(), tol)? - entropy_exchange(&de, rho, tol)?;
    Ok(DataProcessingReport {
        s_reference: s_r,
        after_first,
        after_second,
        left: InequalityCheck::new(after_first, s_r, tol),
        right: InequalityCheck::new(after_second, after_first, tol),
    })
}

/// `S_e(rho, D) >= S(rho) - S(D(rho))` for a deterministic `D`.
pub fn entropy_reduction_check(
    d: &QuantumOperation,
    rho: &DensityOperator,
    tol: &ToleranceConfig,
) -> Result<EntropyReduction> {
    if !d.is_deterministic(tol) {
        return Err(Error::NotDeterministic { residual: d.completeness_residual() });
    }
    let before = von_neumann_entropy(rho.matrix(), tol)?;
    let (out, _) = d.apply_normalized(rho, tol)?;
    let after = von_neumann_entropy(out.matrix(), tol)?;
    let s_e = entropy_exchange(d, rho, tol)?;
    Ok(EntropyReduction {
        entropy_before: before,
        entropy_after: after,
        entropy_exchange: s_e,
        check: InequalityCheck::new(before - after, s_e, tol),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReduction {
    pub entropy_before: f64,
    pub entropy_after: f64,
    pub entropy_exchange: f64,
    pub check: InequalityCheck,
}
