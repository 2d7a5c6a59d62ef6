//! Machine-readable reports. Every inequality carries its slack.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use qreverse::demon::{CycleLedger, RecordModel, SecondLawReport};
use qreverse::info::{FanoReport, InequalityCheck, SubadditivityReport};
use qreverse::linalg::ToleranceConfig;
use qreverse::reversibility::{
    AdjointReport, Condition1Report, Condition2Report, DegeneracyReport, FailureReason, MMatrix,
    VerificationReport,
};

use crate::document::{matrix_to_doc, LogBase, MatrixDoc};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    /// Names of the inputs the command was run on.
    pub inputs: BTreeMap<String, String>,
    pub tolerance: ToleranceReport,
    /// Why the verdict is negative, when it is.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reverse: Option<ReverseReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entropy: Option<EntropyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub demon: Option<DemonReport>,
    pub exit_status: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceReport {
    pub eq_tol: f64,
    pub rank_cutoff: f64,
    pub log_base: LogBase,
}

impl ToleranceReport {
    pub fn new(tol: &ToleranceConfig, base: LogBase) -> Self {
        Self { eq_tol: tol.eq_tol, rank_cutoff: tol.rank_cutoff, log_base: base }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityDoc {
    pub lesser: f64,
    pub greater: f64,
    pub slack: f64,
    pub holds: bool,
    pub saturated: bool,
}

impl From<InequalityCheck> for InequalityDoc {
    fn from(c: InequalityCheck) -> Self {
        Self { lesser: c.lesser, greater: c.greater, slack: c.slack, holds: c.holds, saturated: c.saturated }
    }
}

pub fn failure_name(reason: FailureReason) -> &'static str {
    match reason {
        FailureReason::Condition1Failed => "condition1_failed",
        FailureReason::Condition2Failed => "condition2_failed",
        FailureReason::MNotProportional => "m_not_proportional",
        FailureReason::AnnihilatesCode => "annihilates_code",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Condition1Doc {
    pub holds: bool,
    pub mu_squared: f64,
    pub residual: f64,
}

impl From<Condition1Report> for Condition1Doc {
    fn from(c: Condition1Report) -> Self {
        Self { holds: c.holds, mu_squared: c.mu_squared, residual: c.residual }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Condition2Doc {
    pub holds: bool,
    /// `S(rho)` at `rho = P/d`.
    pub lhs: f64,
    /// `S(E(rho)/tr) - S_e(rho, E)`.
    pub rhs: f64,
    pub output_entropy: f64,
    pub entropy_exchange: f64,
    pub gap: f64,
}

impl From<Condition2Report> for Condition2Doc {
    fn from(c: Condition2Report) -> Self {
        Self {
            holds: c.holds,
            lhs: c.input_entropy,
            rhs: c.rhs(),
            output_entropy: c.output_entropy,
            entropy_exchange: c.entropy_exchange,
            gap: c.gap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MMatrixDoc {
    pub holds: bool,
    pub matrix: MatrixDoc,
    pub mu_squared: f64,
    pub proportionality_residual: f64,
    pub min_eigenvalue: f64,
}

impl MMatrixDoc {
    pub fn new(m: &MMatrix, holds: bool) -> Self {
        Self {
            holds,
            matrix: matrix_to_doc(&m.matrix),
            mu_squared: m.mu_squared,
            proportionality_residual: m.proportionality_residual,
            min_eigenvalue: m.min_eigenvalue,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyDoc {
    pub degenerate: bool,
    pub span_dim_full: usize,
    pub span_dim_restricted: usize,
    pub zero_weights: usize,
    pub consistent: bool,
}

impl From<DegeneracyReport> for DegeneracyDoc {
    fn from(d: DegeneracyReport) -> Self {
        Self {
            degenerate: d.degenerate,
            span_dim_full: d.span_dim_full,
            span_dim_restricted: d.span_dim_restricted,
            zero_weights: d.zero_weights,
            consistent: d.consistent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdjointDoc {
    pub holds: bool,
    pub gamma_squared: f64,
    pub residual: f64,
    pub gamma_squared_from_m: Option<f64>,
}

impl From<AdjointReport> for AdjointDoc {
    fn from(a: AdjointReport) -> Self {
        Self {
            holds: a.holds,
            gamma_squared: a.gamma_squared,
            residual: a.residual,
            gamma_squared_from_m: a.gamma_squared_from_m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub reversible: bool,
    pub failure_reason: Option<String>,
    pub mu_squared: Option<f64>,
    pub condition1: Option<Condition1Doc>,
    pub condition2: Option<Condition2Doc>,
    pub m_matrix: MMatrixDoc,
    /// Whether the entropic and algebraic verdicts agree.
    pub routes_agree: bool,
    pub degeneracy: Option<DegeneracyDoc>,
    pub adjoint: AdjointDoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationDoc {
    pub ok: bool,
    pub mu_squared: f64,
    pub worst_residual: f64,
}

impl From<VerificationReport> for VerificationDoc {
    fn from(v: VerificationReport) -> Self {
        Self { ok: v.ok, mu_squared: v.mu_squared, worst_residual: v.worst_residual }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReverseReport {
    pub mu_squared: f64,
    /// `d_j`, descending.
    pub weights: Vec<f64>,
    /// `lambda_j = d_j / mu^2`.
    pub lambdas: Vec<f64>,
    pub degenerate: bool,
    pub syndrome_count: usize,
    pub syndrome_projectors: Vec<MatrixDoc>,
    pub reversal_kraus: Vec<MatrixDoc>,
    pub orthogonality_residual: f64,
    pub verification: VerificationDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FanoDoc {
    pub entropy_exchange: f64,
    pub fidelity: f64,
    pub bound: f64,
    pub check: InequalityDoc,
}

impl From<FanoReport> for FanoDoc {
    fn from(f: FanoReport) -> Self {
        Self {
            entropy_exchange: f.entropy_exchange,
            fidelity: f.fidelity,
            bound: f.bound,
            check: f.check.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubadditivityDoc {
    pub s_reference: f64,
    pub s_system: f64,
    pub entropy_exchange: f64,
    pub rq: InequalityDoc,
    pub re: InequalityDoc,
    pub qe: InequalityDoc,
    pub araki_lieb: InequalityDoc,
}

impl From<SubadditivityReport> for SubadditivityDoc {
    fn from(s: SubadditivityReport) -> Self {
        Self {
            s_reference: s.s_reference,
            s_system: s.s_system,
            entropy_exchange: s.entropy_exchange,
            rq: s.rq.into(),
            re: s.re.into(),
            qe: s.qe.into(),
            araki_lieb: s.araki_lieb.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub output_trace: f64,
    pub entanglement_fidelity: f64,
    pub entropy_exchange: f64,
    /// Eigenvalues of `W`, descending.
    pub w_eigenvalues: Vec<f64>,
    /// Diagonal of `W` in the given decomposition.
    pub w_diagonal: Vec<f64>,
    pub fano: FanoDoc,
    pub subadditivity: SubadditivityDoc,
    /// `S_e <= H(diag W)`.
    pub shannon_bound: InequalityDoc,
    pub all_hold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondLawDoc {
    /// `sum p_i I_i >= H`.
    pub records_vs_shannon: InequalityDoc,
    /// `H >= S_e`.
    pub shannon_vs_exchange: InequalityDoc,
    /// `S_e >= -dS_c`.
    pub exchange_vs_entropy_reduction: InequalityDoc,
    pub holds: bool,
    pub saturated: bool,
}

impl From<&SecondLawReport> for SecondLawDoc {
    fn from(s: &SecondLawReport) -> Self {
        Self {
            records_vs_shannon: s.links[0].into(),
            shannon_vs_exchange: s.links[1].into(),
            exchange_vs_entropy_reduction: s.links[2].into(),
            holds: s.holds,
            saturated: s.saturated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemonReport {
    pub scheme: String,
    pub record_model: String,
    pub labels: Vec<String>,
    pub probabilities: Vec<f64>,
    pub record_lengths: Vec<f64>,
    pub pruned: Vec<String>,
    pub delta_s: f64,
    pub delta_s_c: f64,
    pub shannon_h: f64,
    pub entropy_exchange_reversal: f64,
    pub avg_record_length: f64,
    pub correction_succeeded: Vec<bool>,
    pub closure_residual: f64,
    pub cycle_closed: bool,
    pub second_law: SecondLawDoc,
}

impl DemonReport {
    pub fn new(scheme: &str, ledger: &CycleLedger) -> Self {
        Self {
            scheme: scheme.to_string(),
            record_model: match ledger.record_model {
                RecordModel::Ideal => "ideal",
                RecordModel::ShannonCode => "shannon",
            }
            .to_string(),
            labels: ledger.labels.clone(),
            probabilities: ledger.probabilities.clone(),
            record_lengths: ledger.record_lengths.clone(),
            pruned: ledger.pruned.clone(),
            delta_s: ledger.delta_s,
            delta_s_c: ledger.delta_s_c,
            shannon_h: ledger.shannon_h,
            entropy_exchange_reversal: ledger.entropy_exchange_reversal,
            avg_record_length: ledger.avg_record_length,
            correction_succeeded: ledger.correction_succeeded.clone(),
            closure_residual: ledger.closure_residual,
            cycle_closed: ledger.cycle_closed,
            second_law: (&ledger.second_law).into(),
        }
    }
}
