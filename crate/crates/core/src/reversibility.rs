//! Reversibility of quantum operations on a code subspace `M`.
//!
//! Two independent routes decide whether an operation can be undone on `M`:
//! the entropic test at `rho = P_M/d` (no loss of coherent information) and
//! the algebraic test `P_M A_k^dag A_j P_M = m_jk P_M` with `m` positive. The
//! algebraic route also yields an explicit reversal: diagonalize `m`, polar
//! decompose each remixed operator on `M`, and undo the unitary inside the
//! syndrome subspace it selects.

use crate::error::{Error, Result};
use crate::info::entropy_exchange;
use crate::linalg::{
    hermitian_eig, least_squares, operator_span_dim, unitary_factor, von_neumann_entropy,
    with_global_phase_convention, ComplexMatrix, ToleranceConfig, C64,
};
use crate::operations::{
    diagonalizing_remix, minimal_operators, remix_operators, CpMap, DensityOperator, QuantumOperation,
};

/// Subspace spanned by an orthonormal set of kets.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeSubspace {
    basis: Vec<ComplexMatrix>,
    basis_matrix: ComplexMatrix,
    projector: ComplexMatrix,
}

impl CodeSubspace {
    pub fn new(basis: Vec<ComplexMatrix>, tol: &ToleranceConfig) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::Shape("code basis is empty".into()));
        }
        let dim = basis[0].rows();
        if basis.iter().any(|v| v.cols() != 1 || v.rows() != dim) {
            return Err(Error::Shape(format!("code basis vectors must be {dim}x1 columns")));
        }
        if basis.len() > dim {
            return Err(Error::Shape(format!("{} basis vectors in a {dim}-dimensional space", basis.len())));
        }
        let basis_matrix = ComplexMatrix::hstack(&basis)?;
        let gram = &basis_matrix.dagger() * &basis_matrix;
        let residual = gram.distance(&ComplexMatrix::identity(basis.len()));
        if residual > tol.eq_tol * (basis.len() as f64).sqrt() {
            return Err(Error::NotOrthonormal { residual });
        }
        let projector = &basis_matrix * &basis_matrix.dagger();
        Ok(Self { basis, basis_matrix, projector })
    }

    /// Dimension `D` of the ambient space.
    pub fn dim(&self) -> usize {
        self.projector.rows()
    }

    /// Dimension `d` of the code.
    pub fn code_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> &ComplexMatrix {
        &self.basis_matrix
    }

    pub fn projector(&self) -> &ComplexMatrix {
        &self.projector
    }

    pub fn complement_projector(&self) -> ComplexMatrix {
        &ComplexMatrix::identity(self.dim()) - &self.projector
    }

    /// `P_M / d`.
    pub fn maximally_mixed_state(&self) -> DensityOperator {
        DensityOperator::from_trusted(self.projector.scale_real(1.0 / self.code_dim() as f64), true)
    }

    /// `||rho - P rho P||_F`, zero exactly when `rho` is supported on the code.
    pub fn leakage(&self, rho: &ComplexMatrix) -> f64 {
        let p = &self.projector;
        rho.distance(&(&(p * rho) * p))
    }

    /// `|phi_m><phi_n|` for all pairs of basis kets, row-major in `(m, n)`.
    pub fn operator_basis(&self) -> Vec<ComplexMatrix> {
        let mut out = Vec::with_capacity(self.code_dim() * self.code_dim());
        for a in &self.basis {
            for b in &self.basis {
                out.push(ComplexMatrix::outer(a, b));
            }
        }
        out
    }

    fn check_operation(&self, e: &CpMap) -> Result<()> {
        if e.dim() != self.dim() {
            return Err(Error::Shape(format!(
                "operation on {} dimensions with a code in {} dimensions",
                e.dim(),
                self.dim()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Condition1Report {
    pub holds: bool,
    /// `tr(P E P) / d`.
    pub mu_squared: f64,
    /// `||P E P - mu^2 P||_F`.
    pub residual: f64,
}

/// The measurement reveals nothing about the code state: `P E P = mu^2 P`.
pub fn condition1_check(
    e: &QuantumOperation,
    code: &CodeSubspace,
    tol: &ToleranceConfig,
) -> Result<Condition1Report> {
    code.check_operation(e.as_map())?;
    let p = code.projector();
    let pep = &(p * &e.povm_element()) * p;
    let mu_squared = pep.trace().re / code.code_dim() as f64;
    if mu_squared <= tol.rank_cutoff {
        return Err(Error::Annihilated { trace: mu_squared });
    }
    let residual = pep.distance(&p.scale_real(mu_squared));
    Ok(Condition1Report { holds: residual < tol.eq_tol * code.code_dim() as f64, mu_squared, residual })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Condition2Report {
    pub holds: bool,
    /// `S(rho)`.
    pub input_entropy: f64,
    /// `S(E(rho) / tr E(rho))`.
    pub output_entropy: f64,
    pub entropy_exchange: f64,
    /// `input_entropy - (output_entropy - entropy_exchange)`.
    pub gap: f64,
}

impl Condition2Report {
    /// `S(E(rho)/tr) - S_e`.
    pub fn rhs(&self) -> f64 {
        self.output_entropy - self.entropy_exchange
    }
}

/// No coherent information is lost: `S(rho) = S(E(rho)/tr) - S_e(rho, E)` at `rho = P_M/d`.
pub fn condition2_check(
    e: &QuantumOperation,
    code: &CodeSubspace,
    tol: &ToleranceConfig,
) -> Result<Condition2Report> {
    condition2_check_state(e, code, &code.maximally_mixed_state(), tol)
}

/// Entropic condition evaluated at an arbitrary state supported on the code.
pub fn condition2_check_state(
    e: &QuantumOperation,
    code: &CodeSubspace,
    rho: &DensityOperator,
    tol: &ToleranceConfig,
) -> Result<Condition2Report> {
    code.check_operation(e.as_map())?;
    let leakage = code.leakage(rho.matrix());
    if leakage > tol.eq_tol {
        return Err(Error::NotOnCode { leakage });
    }
    let input_entropy = von_neumann_entropy(rho.matrix(), tol)?;
    let (out, _) = e.apply_normalized(rho, tol)?;
    let output_entropy = von_neumann_entropy(out.matrix(), tol)?;
    let s_e = entropy_exchange(e, rho, tol)?;
    let gap = input_entropy - (output_entropy - s_e);
    Ok(Condition2Report {
        holds: gap.abs() < tol.eq_tol,
        input_entropy,
        output_entropy,
        entropy_exchange: s_e,
        gap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    Condition1Failed,
    Condition2Failed,
    MNotProportional,
    AnnihilatesCode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReversibilityVerdict {
    pub reversible: bool,
    pub mu_squared: Option<f64>,
    pub failure_reason: Option<FailureReason>,
    pub condition1: Option<Condition1Report>,
    pub condition2: Option<Condition2Report>,
    /// Worst `m` proportionality residual when the algebraic route was used.
    pub m_residual: Option<f64>,
}

impl ReversibilityVerdict {
    fn annihilated() -> Self {
        Self {
            reversible: false,
            mu_squared: None,
            failure_reason: Some(FailureReason::AnnihilatesCode),
            condition1: None,
            condition2: None,
            m_residual: None,
        }
    }
}

/// Entropic verdict from the condition at `P_M/d`, which also implies `P E P = mu^2 P`.
/// Both condition reports are attached.
pub fn info_theoretic_reversibility(
    e: &QuantumOperation,
    code: &CodeSubspace,
    tol: &ToleranceConfig,
) -> Result<ReversibilityVerdict> {
    let c1 = match condition1_check(e, code, tol) {
        Ok(c) => c,
        Err(Error::Annihilated { .. }) => return Ok(ReversibilityVerdict::annihilated()),
        Err(err) => return Err(err),
    };
    let c2 = match condition2_check(e, code, tol) {
        Ok(c) => c,
        Err(Error::Annihilated { .. }) => return Ok(ReversibilityVerdict::annihilated()),
        Err(err) => return Err(err),
    };
    let reversible = c2.holds;
    let failure_reason = if reversible {
        None
    } else if !c1.holds {
        Some(FailureReason::Condition1Failed)
    } else {
        Some(FailureReason::Condition2Failed)
    };
    Ok(ReversibilityVerdict {
        reversible,
        mu_squared: reversible.then_some(c1.mu_squared),
        failure_reason,
        condition1: Some(c1),
        condition2: Some(c2),
        m_residual: None,
    })
}

/// `m_jk = tr(P A_k^dag A_j P) / d`.
#[derive(Debug, Clone, PartialEq)]
pub struct MMatrix {
    pub matrix: ComplexMatrix,
    /// `tr m`.
    pub mu_squared: f64,
    /// Worst `||P A_k^dag A_j P - m_jk P||_F` over all pairs.
    pub proportionality_residual: f64,
    /// Smallest eigenvalue of `m`.
    pub min_eigenvalue: f64,
}

/// Returns `m` and whether `P A_k^dag A_j P = m_jk P` holds with `m` positive.
pub fn algebraic_m_matrix(
    e: &QuantumOperation,
    code: &CodeSubspace,
    tol: &ToleranceConfig,
) -> Result<(MMatrix, bool)> {
    code.check_operation(e.as_map())?;
    let p = code.projector();
    let d = code.code_dim() as f64;
    let restricted: Vec<ComplexMatrix> = e.kraus().iter().map(|a| a * p).collect();
    let n = restricted.len();
    let mut worst: f64 = 0.0;
    let mut entries = vec![C64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for k in 0..n {
            let block = &restricted[k].dagger() * &restricted[j];
            let mjk = block.trace() / d;
            worst = worst.max(block.distance(&p.scale(mjk)));
            entries[j * n + k] = mjk;
        }
    }
    let m = ComplexMatrix::new(n, n, entries)?.hermitian_part();
    let spectrum = hermitian_eig(&m, tol)?;
    let min_eigenvalue = *spectrum.eigenvalues.last().expect("nonempty");
    let mu_squared = m.trace().re;
    let holds = worst < tol.eq_tol && min_eigenvalue >= -tol.rank_cutoff && mu_squared > tol.rank_cutoff;
    Ok((MMatrix { matrix: m, mu_squared, proportionality_residual: worst, min_eigenvalue }, holds))
}

/// Algebraic verdict, in the same shape as the entropic one.
pub fn algebraic_reversibility(
    e: &QuantumOperation,
    code: &CodeSubspace,
    tol: &ToleranceConfig,
) -> Result<ReversibilityVerdict> {
    let (m, holds) = algebraic_m_matrix(e, code, tol)?;
    let failure_reason = if holds {
        None
    } else if m.mu_squared <= tol.rank_cutoff {
        Some(FailureReason::AnnihilatesCode)
    } else {
        Some(FailureReason::MNotProportional)
    };
    Ok(ReversibilityVerdict {
        reversible: holds,
        mu_squared: holds.then_some(m.mu_squared),
        failure_reason,
        condition1: None,
        condition2: None,
        m_residual: Some(m.proportionality_residual),
    })
}

/// Explicit reversal built from the eigen-decomposition of `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversalConstruction {
    /// Eigenvalues `d_j` of `m`, descending.
    pub weights: Vec<f64>,
    /// `lambda_j = d_j / mu^2`.
    pub lambdas: Vec<f64>,
    pub mu_squared: f64,
    /// `u` with `Ã_j = sum_k u_jk A_k`, so `P Ã_k^dag Ã_j P = d_j delta_jk P`.
    pub remix_unitary: ComplexMatrix,
    pub canonical_operators: Vec<ComplexMatrix>,
    /// `U_j` with `Ã_j P = sqrt(d_j) U_j P`, one per nonzero weight.
    pub unitaries: Vec<ComplexMatrix>,
    /// `P_j = U_j P U_j^dag`, mutually orthogonal.
    pub syndrome_projectors: Vec<ComplexMatrix>,
    /// `P_N = sum_j P_j`.
    pub n_projector: ComplexMatrix,
    /// `{U_j^dag P_j}` followed by `I - P_N` when that is nonzero.
    pub reversal: QuantumOperation,
    pub degenerate: bool,
    /// Worst `||P_k P_j||_F` for `j != k`.
    pub orthogonality_residual: f64,
}

impl ReversalConstruction {
    pub fn syndrome_count(&self) -> usize {
        self.syndrome_projectors.len()
    }

    pub fn complement_projector(&self) -> ComplexMatrix {
        &ComplexMatrix::identity(self.n_projector.rows()) - &self.n_projector
    }

    /// Reversal decomposition restricted to `N`: `{U_j^dag P_j}`.
    pub fn syndrome_operators(&self) -> Vec<ComplexMatrix> {
        self.reversal.kraus()[..self.syndrome_count()].to_vec()
    }
}

pub fn construct_reversal(
    e: &QuantumOperation,
    code: &CodeSubspace,
    tol: &ToleranceConfig,
) -> Result<ReversalConstruction> {
    let (m, holds) = algebraic_m_matrix(e, code, tol)?;
    if !holds {
        return Err(Error::NotReversible(format!(
            "m proportionality residual {:.3e}, min eigenvalue {:.3e}, trace {:.3e}",
            m.proportionality_residual, m.min_eigenvalue, m.mu_squared
        )));
    }
    let p = code.projector();
    let dim = code.dim();
    let (weights, u) = diagonalizing_remix(&m.matrix, tol)?;
    let weights: Vec<f64> = weights.into_iter().map(|w| w.max(0.0)).collect();
    let canonical_operators = remix_operators(e.kraus(), &u);

    let mut unitaries = Vec::new();
    let mut syndrome_projectors = Vec::new();
    for (a, &w) in canonical_operators.iter().zip(&weights) {
        if w <= tol.rank_cutoff {
            continue;
        }
        let (uj, _) = unitary_factor(a, p, tol)?;
        syndrome_projectors.push(&(&uj * p) * &uj.dagger());
        unitaries.push(uj);
    }

    let mut orthogonality_residual: f64 = 0.0;
    for (j, pj) in syndrome_projectors.iter().enumerate() {
        for pk in &syndrome_projectors[j + 1..] {
            orthogonality_residual = orthogonality_residual.max((pk * pj).frobenius_norm());
        }
    }
    if orthogonality_residual > tol.eq_tol {
        return Err(Error::NotReversible(format!(
            "syndrome subspaces overlap (residual {orthogonality_residual:.3e})"
        )));
    }

    let n_projector = syndrome_projectors.iter().fold(ComplexMatrix::zeros(dim, dim), |acc, pj| &acc + pj);
    let complement = &ComplexMatrix::identity(dim) - &n_projector;
    let mut kraus: Vec<ComplexMatrix> =
        unitaries.iter().zip(&syndrome_projectors).map(|(uj, pj)| &uj.dagger() * pj).collect();
    if complement.trace().re > 0.5 {
        kraus.push(complement);
    }
    let reversal = QuantumOperation::new(kraus, tol)?;

    let zero_weights = weights.iter().filter(|&&w| w <= tol.rank_cutoff).count();
    let redundant = e.len() - operator_span_dim(e.kraus(), tol)?;
    let mu_squared = m.mu_squared;
    Ok(ReversalConstruction {
        lambdas: weights.iter().map(|w| w / mu_squared).collect(),
        weights,
        mu_squared,
        remix_unitary: u,
        canonical_operators,
        unitaries,
        syndrome_projectors,
        n_projector,
        reversal,
        degenerate: zero_weights > redundant,
        orthogonality_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationReport {
    pub ok: bool,
    pub mu_squared: f64,
    pub worst_residual: f64,
}

/// Checks `R(E(X)) = mu^2 X` on every `|phi_m><phi_n|` of the code, which by
/// linearity covers all operators supported on `M`.
pub fn verify_reversal(
    r: &QuantumOperation,
    e: &QuantumOperation,
    code: &CodeSubspace,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    if !r.is_deterministic(tol) {
        return Err(Error::NotDeterministic { residual: r.completeness_residual() });
    }
    code.check_operation(e.as_map())?;
    code.check_operation(r.as_map())?;
    let p = code.projector();
    let mu_squared = (&(p * &e.povm_element()) * p).trace().re / code.code_dim() as f64;
    let mut worst: f64 = 0.0;
    for x in code.operator_basis() {
        let y = r.as_map().apply_operator(&e.as_map().apply_operator(&x));
        worst = worst.max(y.distance(&x.scale_real(mu_squared)));
    }
    Ok(VerificationReport {
        ok: worst < tol.eq_tol && mu_squared > tol.rank_cutoff,
        mu_squared,
        worst_residual: worst,
    })
}

/// Unitary undoing an operation on `M`: `A_j P = c_j U^dag P`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryReversal {
    /// `U`, which undoes the operation.
    pub reversal_unitary: ComplexMatrix,
    pub coefficients: Vec<C64>,
    /// `sum_j |c_j|^2`.
    pub mu_squared: f64,
    pub residual: f64,
}

impl UnitaryReversal {
    /// `U^dag`, the unitary the operation applies on `M`.
    pub fn forward_unitary(&self) -> ComplexMatrix {
        self.reversal_unitary.dagger()
    }
}

/// Some unitary reverses `e` on the code exactly when the restriction of `e`
/// to the code is a multiple of a single isometry.
pub fn unitary_reversibility(
    e: &QuantumOperation,
    code: &CodeSubspace,
    tol: &ToleranceConfig,
) -> Result<Option<UnitaryReversal>> {
    code.check_operation(e.as_map())?;
    let p = code.projector();
    let restricted = e.as_map().right_multiply(p);
    let minimal = minimal_operators(restricted.kraus(), tol)?;
    if minimal.len() != 1 {
        return Ok(None);
    }
    let mut v = match unitary_factor(&minimal[0], p, tol) {
        Ok((v, _)) => v,
        Err(Error::SupportViolation { .. }) => return Ok(None),
        Err(err) => return Err(err),
    };
    let d = code.code_dim() as f64;
    let vdag_p = &v.dagger() * p;
    let mut coefficients: Vec<C64> = e.kraus().iter().map(|a| (&vdag_p * a).trace() / d).collect();
    // First non-negligible coefficient real positive; V absorbs the phase.
    if let Some(c) = coefficients.iter().find(|c| c.norm() > tol.eq_tol).copied() {
        let phase = c / c.norm();
        v = v.scale(phase);
        for x in &mut coefficients {
            *x *= phase.conj();
        }
    }
    let vp = &v * p;
    let residual =
        e.kraus().iter().zip(&coefficients).map(|(a, c)| (a * p).distance(&vp.scale(*c))).fold(0.0, f64::max);
    if residual > tol.eq_tol {
        return Ok(None);
    }
    let mu_squared = coefficients.iter().map(|c| c.norm_sqr()).sum();
    Ok(Some(UnitaryReversal { reversal_unitary: v.dagger(), coefficients, mu_squared, residual }))
}

/// `(mu^2, U)` with `E(rho) = mu^2 U rho U^dag` when `e` is reversible on the
/// whole space, else `None`. `U` follows the first-column phase convention.
pub fn whole_space_check(
    e: &QuantumOperation,
    tol: &ToleranceConfig,
) -> Result<Option<(f64, ComplexMatrix)>> {
    let dim = e.dim();
    let full = CodeSubspace::new((0..dim).map(|k| ComplexMatrix::basis_ket(dim, k)).collect(), tol)?;
    let verdict = info_theoretic_reversibility(e, &full, tol)?;
    if !verdict.reversible {
        return Ok(None);
    }
    let Some(ur) = unitary_reversibility(e, &full, tol)? else {
        return Ok(None);
    };
    Ok(Some((ur.mu_squared, with_global_phase_convention(&ur.forward_unitary()))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpanVerdict {
    /// Every operator of `f` is a combination of those of the reference.
    Reversible,
    /// Some operator of `f` lies outside that span; this test is silent.
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpanReport {
    pub verdict: SpanVerdict,
    /// Relative least-squares residual of `B_j = sum_k b_jk A_k`.
    pub residual: f64,
    /// `b`, when representable.
    pub coefficients: Option<ComplexMatrix>,
    /// `n = b m b^dag`.
    pub n_matrix: Option<ComplexMatrix>,
    /// `tr n`.
    pub nu_squared: Option<f64>,
    /// Whether the reference reversal also reverses `f`, with factor `nu^2`.
    pub reversed_by_same_reversal: Option<bool>,
}

/// Operations built from combinations of a reversible operation's
/// decomposition operators are reversed by the same reversal.
pub fn span_reversibility(
    e_reference: &QuantumOperation,
    code: &CodeSubspace,
    f: &QuantumOperation,
    tol: &ToleranceConfig,
) -> Result<SpanReport> {
    code.check_operation(f.as_map())?;
    let (m, holds) = algebraic_m_matrix(e_reference, code, tol)?;
    if !holds {
        return Err(Error::NotReversible("reference operation fails the m-matrix test".into()));
    }
    let columns = |ops: &[ComplexMatrix]| {
        let d2 = ops[0].rows() * ops[0].cols();
        let vecs: Vec<Vec<C64>> = ops.iter().map(ComplexMatrix::vectorize).collect();
        ComplexMatrix::from_fn(d2, ops.len(), |i, j| vecs[j][i])
    };
    let x = columns(e_reference.kraus());
    let target = columns(f.kraus());
    let y = least_squares(&x, &target, 1e-12)?;
    let residual = (&x * &y).relative_distance(&target);
    if residual > tol.eq_tol {
        return Ok(SpanReport {
            verdict: SpanVerdict::Unknown,
            residual,
            coefficients: None,
            n_matrix: None,
            nu_squared: None,
            reversed_by_same_reversal: None,
        });
    }
    let b = y.transpose();
    let n = &(&b * &m.matrix) * &b.dagger();
    let nu_squared = n.trace().re;
    let reversal = construct_reversal(e_reference, code, tol)?.reversal;
    let check = verify_reversal(&reversal, f, code, tol)?;
    let same = check.ok && (check.mu_squared - nu_squared).abs() < tol.eq_tol;
    Ok(SpanReport {
        verdict: SpanVerdict::Reversible,
        residual,
        coefficients: Some(b),
        n_matrix: Some(n),
        nu_squared: Some(nu_squared),
        reversed_by_same_reversal: Some(same),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjointReport {
    pub holds: bool,
    pub gamma_squared: f64,
    pub residual: f64,
    /// `tr m^2 = sum_j d_j^2`, when the m-matrix test passes.
    pub gamma_squared_from_m: Option<f64>,
}

/// `E_M^dag ∘ E_M = gamma^2 id` on operators supported on `M`.
pub fn adjoint_condition_check(
    e: &QuantumOperation,
    code: &CodeSubspace,
    tol: &ToleranceConfig,
) -> Result<AdjointReport> {
    code.check_operation(e.as_map())?;
    let restricted = e.as_map().right_multiply(code.projector());
    let adjoint = restricted.adjoint();
    let basis = code.operator_basis();
    let images: Vec<ComplexMatrix> =
        basis.iter().map(|x| adjoint.apply_operator(&restricted.apply_operator(x))).collect();
    let gamma_squared =
        basis.iter().zip(&images).map(|(x, y)| x.hs_inner(y).re).sum::<f64>() / basis.len() as f64;
    let residual =
        basis.iter().zip(&images).map(|(x, y)| y.distance(&x.scale_real(gamma_squared))).fold(0.0, f64::max);
    let (m, m_holds) = algebraic_m_matrix(e, code, tol)?;
    let gamma_squared_from_m = m_holds.then(|| (&m.matrix * &m.matrix).trace().re);
    Ok(AdjointReport {
        holds: residual < tol.eq_tol && gamma_squared > tol.rank_cutoff,
        gamma_squared,
        residual,
        gamma_squared_from_m,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegeneracyReport {
    pub degenerate: bool,
    /// Dimension of the operator span of the decomposition.
    pub span_dim_full: usize,
    /// Dimension of the operator span of `{A_j P}`.
    pub span_dim_restricted: usize,
    /// Eigenvalues of `m` at or below the rank cutoff.
    pub zero_weights: usize,
    /// `zero_weights` equals the number of operators minus `span_dim_restricted`.
    pub consistent: bool,
}

pub fn degeneracy_report(
    e: &QuantumOperation,
    code: &CodeSubspace,
    tol: &ToleranceConfig,
) -> Result<DegeneracyReport> {
    let (m, holds) = algebraic_m_matrix(e, code, tol)?;
    if !holds {
        return Err(Error::NotReversible("m-matrix test fails".into()));
    }
    let span_dim_full = operator_span_dim(e.kraus(), tol)?;
    let restricted = e.as_map().right_multiply(code.projector());
    let span_dim_restricted = operator_span_dim(restricted.kraus(), tol)?;
    let spectrum = hermitian_eig(&m.matrix, tol)?;
    let zero_weights = spectrum.eigenvalues.iter().filter(|&&w| w <= tol.rank_cutoff).count();
    Ok(DegeneracyReport {
        degenerate: span_dim_restricted < span_dim_full,
        span_dim_full,
        span_dim_restricted,
        zero_weights,
        consistent: zero_weights == e.len() - span_dim_restricted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::{
        bit_flip_code_noise, decay_branch, even_parity_code, full_space, on_qubit, pauli_x, pauli_y, pauli_z,
        phase_flip, repetition_code, zz_dephasing,
    };
    use std::f64::consts::FRAC_1_SQRT_2;

    const P: [f64; 4] = [0.9, 0.05, 0.03, 0.02];

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn bit_flip() -> QuantumOperation {
        bit_flip_code_noise(&P).unwrap()
    }

    fn hadamard() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]]).unwrap().scale_real(FRAC_1_SQRT_2)
    }

    fn x_on(q: usize) -> ComplexMatrix {
        on_qubit(3, q, &pauli_x())
    }

    #[test]
    fn code_subspace_rejects_non_orthonormal_basis() {
        let a = ComplexMatrix::basis_ket(2, 0);
        let b = ComplexMatrix::column(&[C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)]).unwrap();
        assert!(matches!(CodeSubspace::new(vec![a, b], &tol()), Err(Error::NotOrthonormal { .. })));
        let code = repetition_code();
        assert_eq!((code.dim(), code.code_dim()), (8, 2));
        let p = code.projector();
        assert!((p * p).distance(p) < 1e-15);
    }

    #[test]
    fn condition1_examples() {
        let projector0 =
            QuantumOperation::new(vec![ComplexMatrix::projector(&ComplexMatrix::basis_ket(2, 0))], &tol())
                .unwrap();
        let code0 = CodeSubspace::new(vec![ComplexMatrix::basis_ket(2, 0)], &tol()).unwrap();
        let c = condition1_check(&projector0, &code0, &tol()).unwrap();
        assert!(c.holds);
        assert!((c.mu_squared - 1.0).abs() < 1e-12);

        let c = condition1_check(&bit_flip(), &repetition_code(), &tol()).unwrap();
        assert!(c.holds);
        assert!((c.mu_squared - 1.0).abs() < 1e-12);

        let c = condition1_check(&decay_branch(0.5).unwrap(), &full_space(2), &tol()).unwrap();
        assert!(!c.holds);
        assert!((c.mu_squared - 0.25).abs() < 1e-12);

        // |1><1| annihilates span{|0>}.
        let kill =
            QuantumOperation::new(vec![ComplexMatrix::projector(&ComplexMatrix::basis_ket(2, 1))], &tol())
                .unwrap();
        assert!(matches!(condition1_check(&kill, &code0, &tol()), Err(Error::Annihilated { .. })));
    }

    #[test]
    fn condition2_bit_flip_matches_shannon_oracle() {
        let c = condition2_check(&bit_flip(), &repetition_code(), &tol()).unwrap();
        let h: f64 = P.iter().map(|p| -p * p.log2()).sum();
        assert!(c.holds);
        assert!((c.input_entropy - 1.0).abs() < 1e-12);
        assert!((c.output_entropy - (1.0 + h)).abs() < 1e-10);
        assert!((c.entropy_exchange - h).abs() < 1e-10);
        assert!((c.rhs() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn condition2_fails_for_full_depolarizing() {
        let ops = vec![ComplexMatrix::identity(2), pauli_x(), pauli_y(), pauli_z()]
            .into_iter()
            .map(|x| x.scale_real(0.5))
            .collect();
        let e = QuantumOperation::new(ops, &tol()).unwrap();
        let c = condition2_check(&e, &full_space(2), &tol()).unwrap();
        assert!(!c.holds);
        assert!((c.output_entropy - 1.0).abs() < 1e-12);
        assert!((c.entropy_exchange - 2.0).abs() < 1e-10);
        assert!((c.rhs() + 1.0).abs() < 1e-10);
        let v = info_theoretic_reversibility(&e, &full_space(2), &tol()).unwrap();
        assert_eq!(v.failure_reason, Some(FailureReason::Condition2Failed));
    }

    #[test]
    fn state_variant_rejects_states_off_the_code() {
        let rho = DensityOperator::maximally_mixed(8);
        assert!(matches!(
            condition2_check_state(&bit_flip(), &repetition_code(), &rho, &tol()),
            Err(Error::NotOnCode { .. })
        ));
    }

    #[test]
    fn verdicts_on_examples() {
        let v = info_theoretic_reversibility(&bit_flip(), &repetition_code(), &tol()).unwrap();
        assert!(v.reversible);
        assert!((v.mu_squared.unwrap() - 1.0).abs() < 1e-12);

        let v = info_theoretic_reversibility(&decay_branch(0.5).unwrap(), &full_space(2), &tol()).unwrap();
        assert!(!v.reversible);
        assert_eq!(v.failure_reason, Some(FailureReason::Condition1Failed));
        assert!(!v.condition1.unwrap().holds);

        let u = QuantumOperation::unitary(hadamard(), &tol()).unwrap();
        let code0 = CodeSubspace::new(vec![ComplexMatrix::basis_ket(2, 1)], &tol()).unwrap();
        for code in [full_space(2), code0] {
            assert!(info_theoretic_reversibility(&u, &code, &tol()).unwrap().reversible);
            assert!(algebraic_reversibility(&u, &code, &tol()).unwrap().reversible);
        }

        let kill =
            QuantumOperation::new(vec![ComplexMatrix::projector(&ComplexMatrix::basis_ket(2, 1))], &tol())
                .unwrap();
        let code0 = CodeSubspace::new(vec![ComplexMatrix::basis_ket(2, 0)], &tol()).unwrap();
        let v = info_theoretic_reversibility(&kill, &code0, &tol()).unwrap();
        assert_eq!(v.failure_reason, Some(FailureReason::AnnihilatesCode));
        let v = algebraic_reversibility(&kill, &code0, &tol()).unwrap();
        assert_eq!(v.failure_reason, Some(FailureReason::AnnihilatesCode));
    }

    #[test]
    fn m_matrix_examples() {
        let (m, holds) = algebraic_m_matrix(&bit_flip(), &repetition_code(), &tol()).unwrap();
        assert!(holds);
        assert!(m.matrix.distance(&ComplexMatrix::diagonal(&P)) < 1e-12);
        assert!((m.mu_squared - 1.0).abs() < 1e-12);

        let (m, holds) = algebraic_m_matrix(&zz_dephasing(), &even_parity_code(), &tol()).unwrap();
        assert!(holds);
        let half = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        assert!(m.matrix.distance(&half) < 1e-12);

        let (m, holds) = algebraic_m_matrix(&decay_branch(0.5).unwrap(), &full_space(2), &tol()).unwrap();
        assert!(!holds);
        assert!(m.proportionality_residual > 0.1);
        let v = algebraic_reversibility(&decay_branch(0.5).unwrap(), &full_space(2), &tol()).unwrap();
        assert_eq!(v.failure_reason, Some(FailureReason::MNotProportional));
    }

    #[test]
    fn bit_flip_reversal_flips_back_each_syndrome() {
        let e = bit_flip();
        let code = repetition_code();
        let r = construct_reversal(&e, &code, &tol()).unwrap();
        assert_eq!(r.syndrome_count(), 4);
        assert!(!r.degenerate);
        for (w, p) in r.weights.iter().zip(P) {
            assert!((w - p).abs() < 1e-12);
        }
        let expected_u = [ComplexMatrix::identity(8), x_on(0), x_on(1), x_on(2)];
        let kets = [(0, 7), (4, 3), (2, 5), (1, 6)];
        for ((u, pj), (a, b)) in r.unitaries.iter().zip(&r.syndrome_projectors).zip(kets) {
            assert!(expected_u.iter().any(|x| x.distance(u) < 1e-10));
            let want = &ComplexMatrix::projector(&ComplexMatrix::basis_ket(8, a))
                + &ComplexMatrix::projector(&ComplexMatrix::basis_ket(8, b));
            assert!(pj.distance(&want) < 1e-10);
        }
        for (j, pj) in r.syndrome_projectors.iter().enumerate() {
            for (k, pk) in r.syndrome_projectors.iter().enumerate() {
                let want = if j == k { pj.clone() } else { ComplexMatrix::zeros(8, 8) };
                assert!((pk * pj).distance(&want) < 1e-10);
            }
        }
        assert!(r.n_projector.distance(&ComplexMatrix::identity(8)) < 1e-10);
        assert_eq!(r.reversal.len(), 4);
        assert!(r.reversal.is_deterministic(&tol()));
        let p = code.projector();
        for ((a, u), w) in r.canonical_operators.iter().zip(&r.unitaries).zip(&r.weights) {
            assert!((a * p).distance(&(u * p).scale_real(w.sqrt())) < 1e-10);
        }
        let check = verify_reversal(&r.reversal, &e, &code, &tol()).unwrap();
        assert!(check.ok, "{check:?}");
        assert!((check.mu_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_code_has_one_syndrome() {
        let e = zz_dephasing();
        let code = even_parity_code();
        let r = construct_reversal(&e, &code, &tol()).unwrap();
        assert!((r.weights[0] - 1.0).abs() < 1e-12);
        assert!(r.weights[1].abs() < 1e-12);
        assert_eq!(r.syndrome_count(), 1);
        assert!(r.degenerate);
        assert!(r.syndrome_projectors[0].distance(code.projector()) < 1e-10);
        let restricted = &r.syndrome_operators()[0] * code.projector();
        assert!(restricted.distance(code.projector()) < 1e-10);
        assert!(verify_reversal(&r.reversal, &e, &code, &tol()).unwrap().ok);

        let d = degeneracy_report(&e, &code, &tol()).unwrap();
        assert!(d.degenerate && d.consistent);
        assert_eq!((d.span_dim_full, d.span_dim_restricted, d.zero_weights), (2, 1, 1));

        let d = degeneracy_report(&bit_flip(), &repetition_code(), &tol()).unwrap();
        assert!(!d.degenerate && d.consistent);
        assert_eq!((d.span_dim_full, d.span_dim_restricted), (4, 4));
    }

    #[test]
    fn redundant_decomposition_is_not_degenerate() {
        let h = hadamard();
        let e = QuantumOperation::new(vec![h.scale_real(0.6f64.sqrt()), h.scale_real(0.4f64.sqrt())], &tol())
            .unwrap();
        let r = construct_reversal(&e, &full_space(2), &tol()).unwrap();
        assert_eq!(r.syndrome_count(), 1);
        assert!(!r.degenerate);
        assert!(!degeneracy_report(&e, &full_space(2), &tol()).unwrap().degenerate);
    }

    #[test]
    fn unitary_operation_reversal() {
        let u = hadamard();
        let e = QuantumOperation::unitary(u.clone(), &tol()).unwrap();
        let code = CodeSubspace::new(vec![ComplexMatrix::basis_ket(2, 0)], &tol()).unwrap();
        let r = construct_reversal(&e, &code, &tol()).unwrap();
        assert_eq!(r.syndrome_count(), 1);
        assert_eq!(r.reversal.len(), 2);
        let image = &(&u * code.projector()) * &u.dagger();
        assert!(r.syndrome_projectors[0].distance(&image) < 1e-10);
        assert!(verify_reversal(&r.reversal, &e, &code, &tol()).unwrap().ok);
    }

    #[test]
    fn identity_does_not_reverse_bit_flip() {
        let check =
            verify_reversal(&QuantumOperation::identity(8), &bit_flip(), &repetition_code(), &tol()).unwrap();
        assert!(!check.ok);
        let lossy = QuantumOperation::new(vec![ComplexMatrix::identity(8).scale_real(0.5)], &tol()).unwrap();
        assert!(matches!(
            verify_reversal(&lossy, &bit_flip(), &repetition_code(), &tol()),
            Err(Error::NotDeterministic { .. })
        ));
    }

    #[test]
    fn unitary_reversibility_examples() {
        let h = hadamard();
        let e = QuantumOperation::new(vec![h.scale_real(0.6f64.sqrt()), h.scale_real(0.4f64.sqrt())], &tol())
            .unwrap();
        let ur = unitary_reversibility(&e, &full_space(2), &tol()).unwrap().unwrap();
        assert!(ur.forward_unitary().distance(&h) < 1e-10);
        assert!((ur.coefficients[0].re - 0.6f64.sqrt()).abs() < 1e-10);
        assert!((ur.coefficients[1].re - 0.4f64.sqrt()).abs() < 1e-10);
        assert!((ur.mu_squared - 1.0).abs() < 1e-10);

        let code = even_parity_code();
        let ur = unitary_reversibility(&zz_dephasing(), &code, &tol()).unwrap().unwrap();
        let p = code.projector();
        assert!((&ur.reversal_unitary * p).distance(p) < 1e-10);
        for c in &ur.coefficients {
            assert!((c - C64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-10);
        }

        assert!(unitary_reversibility(&bit_flip(), &repetition_code(), &tol()).unwrap().is_none());
    }

    #[test]
    fn whole_space_examples() {
        let e = QuantumOperation::new(vec![pauli_x().scale_real(FRAC_1_SQRT_2)], &tol()).unwrap();
        let (mu2, u) = whole_space_check(&e, &tol()).unwrap().unwrap();
        assert!((mu2 - 0.5).abs() < 1e-12);
        assert!(u.distance(&pauli_x()) < 1e-10);

        assert!(whole_space_check(&phase_flip(), &tol()).unwrap().is_none());

        let (mu2, u) = whole_space_check(&QuantumOperation::identity(3), &tol()).unwrap().unwrap();
        assert!((mu2 - 1.0).abs() < 1e-12);
        assert!(u.distance(&ComplexMatrix::identity(3)) < 1e-10);

        // A global phase on the operator is removed by the convention.
        let e = QuantumOperation::new(vec![pauli_y()], &tol()).unwrap();
        let (_, u) = whole_space_check(&e, &tol()).unwrap().unwrap();
        assert!(u.get(1, 0).im.abs() < 1e-12 && u.get(1, 0).re > 0.0);
    }

    #[test]
    fn span_examples() {
        let e = bit_flip();
        let code = repetition_code();
        let c = FRAC_1_SQRT_2;
        let u = ComplexMatrix::from_real_rows(&[
            &[c, c, 0.0, 0.0],
            &[c, -c, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        let f = e.remix(&u, &tol()).unwrap();
        let s = span_reversibility(&e, &code, &f, &tol()).unwrap();
        assert_eq!(s.verdict, SpanVerdict::Reversible);
        assert_eq!(s.reversed_by_same_reversal, Some(true));
        assert!((s.nu_squared.unwrap() - 1.0).abs() < 1e-10);
        let (m, _) = algebraic_m_matrix(&e, &code, &tol()).unwrap();
        let umu = &(&u * &m.matrix) * &u.dagger();
        assert!(s.n_matrix.unwrap().distance(&umu) < 1e-10);

        let i = ComplexMatrix::identity(8);
        let x1 = x_on(0);
        let f = QuantumOperation::new(vec![(&i + &x1).scale_real(0.5), (&i - &x1).scale_real(0.5)], &tol())
            .unwrap();
        let s = span_reversibility(&e, &code, &f, &tol()).unwrap();
        assert_eq!(s.verdict, SpanVerdict::Reversible);
        assert_eq!(s.reversed_by_same_reversal, Some(true));
        // b = [[1/(2 sqrt p0), 1/(2 sqrt p1), 0, 0], [.., -..]]: n = b m b^dag = I/2 each.
        assert!((s.nu_squared.unwrap() - 1.0).abs() < 1e-10);
        let b = s.coefficients.unwrap();
        assert!((b.get(0, 0).re - 0.5 / P[0].sqrt()).abs() < 1e-9);
        assert!((b.get(1, 1).re + 0.5 / P[1].sqrt()).abs() < 1e-9);

        let f = QuantumOperation::new(vec![on_qubit(3, 0, &pauli_z())], &tol()).unwrap();
        let s = span_reversibility(&e, &code, &f, &tol()).unwrap();
        assert_eq!(s.verdict, SpanVerdict::Unknown);
        assert!(s.residual > 0.1);
    }

    #[test]
    fn adjoint_examples() {
        let u = QuantumOperation::unitary(hadamard(), &tol()).unwrap();
        let a = adjoint_condition_check(&u, &full_space(2), &tol()).unwrap();
        assert!(a.holds);
        assert!((a.gamma_squared - 1.0).abs() < 1e-12);

        let a = adjoint_condition_check(&bit_flip(), &repetition_code(), &tol()).unwrap();
        let sum_sq: f64 = P.iter().map(|p| p * p).sum();
        assert!(a.holds);
        assert!((a.gamma_squared - sum_sq).abs() < 1e-12);
        assert!((a.gamma_squared_from_m.unwrap() - sum_sq).abs() < 1e-12);

        let a = adjoint_condition_check(&decay_branch(0.5).unwrap(), &full_space(2), &tol()).unwrap();
        assert!(!a.holds);
        assert_eq!(a.gamma_squared_from_m, None);
    }

    #[test]
    fn reversal_rejects_irreversible_input() {
        assert!(matches!(
            construct_reversal(&decay_branch(0.5).unwrap(), &full_space(2), &tol()),
            Err(Error::NotReversible(_))
        ));
        assert!(matches!(construct_reversal(&bit_flip(), &full_space(4), &tol()), Err(Error::Shape(_))));
    }
}
