//! Entropy ledger of an error-correcting demon.
//!
//! One cycle runs in four stages: noise takes the code state `rho` to
//! `rho_n`; the demon performs a pure measurement `{B_i}` and stores the
//! outcome `i`; it applies the conditional unitary `V_i`; and the record is
//! erased. The ledger tracks the entropy changes of the system, the Shannon
//! information of the records, and the entropy exchange of the correction
//! `{V_i B_i}`, and checks the chain
//!
//! `sum_i p_i I_i + dS_c >= H(p) + dS_c >= S_e(rho_n, R) + dS_c >= 0`.
//!
//! The algorithmic information `I_i` of a record is not computable; it is
//! modeled by the record length under an ideal or a Shannon code.

use crate::error::{Error, Result};
use crate::info::{entropy_exchange, InequalityCheck};
use crate::linalg::{shannon_entropy, von_neumann_entropy, ComplexMatrix, ToleranceConfig};
use crate::operations::{DensityOperator, QuantumOperation};
use crate::reversibility::{construct_reversal, CodeSubspace};

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub label: String,
    /// Measurement operator `B_i`.
    pub measurement: ComplexMatrix,
    /// Conditional unitary `V_i`.
    pub correction: ComplexMatrix,
}

/// Pure measurement `{B_i}` followed by outcome-conditioned unitaries `{V_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementScheme {
    outcomes: Vec<MeasurementOutcome>,
}

impl MeasurementScheme {
    pub fn new(outcomes: Vec<MeasurementOutcome>, tol: &ToleranceConfig) -> Result<Self> {
        let first = outcomes.first().ok_or(Error::EmptyKraus)?;
        let dim = first.measurement.rows();
        let mut completeness = ComplexMatrix::zeros(dim, dim);
        for o in &outcomes {
            for (m, what) in [(&o.measurement, "measurement operator"), (&o.correction, "correction")] {
                if m.rows() != dim || m.cols() != dim {
                    return Err(Error::Shape(format!(
                        "{what} for outcome '{}' is {}x{}, expected {dim}x{dim}",
                        o.label,
                        m.rows(),
                        m.cols()
                    )));
                }
            }
            let residual = o.correction.unitarity_residual();
            if residual > tol.eq_tol * (dim as f64).sqrt() {
                return Err(Error::NotUnitary { residual });
            }
            completeness = &completeness + &(&o.measurement.dagger() * &o.measurement);
        }
        let residual = completeness.distance(&ComplexMatrix::identity(dim));
        if residual > tol.eq_tol * (dim as f64).sqrt() {
            return Err(Error::IncompleteMeasurement { residual });
        }
        Ok(Self { outcomes })
    }

    /// Scheme that measures with the operators of a deterministic operation
    /// and applies no correction afterwards.
    pub fn from_decomposition(ops: &[ComplexMatrix], tol: &ToleranceConfig) -> Result<Self> {
        let outcomes = ops
            .iter()
            .enumerate()
            .map(|(i, b)| MeasurementOutcome {
                label: format!("outcome {i}"),
                measurement: b.clone(),
                correction: ComplexMatrix::identity(b.rows()),
            })
            .collect();
        Self::new(outcomes, tol)
    }

    pub fn outcomes(&self) -> &[MeasurementOutcome] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.outcomes[0].measurement.rows()
    }

    /// The correction as a single operation, `{V_i B_i}`.
    pub fn as_operation(&self) -> QuantumOperation {
        let kraus = self.outcomes.iter().map(|o| &o.correction * &o.measurement).collect();
        QuantumOperation::new(kraus, &ToleranceConfig::default()).expect("complete measurement")
    }
}

/// Measure the syndrome projectors `P_j` of the reversal and undo `U_j`; the
/// complement of the syndrome subspaces is a final outcome with no correction.
pub fn canonical_scheme(
    e_noise: &QuantumOperation,
    code: &CodeSubspace,
    tol: &ToleranceConfig,
) -> Result<MeasurementScheme> {
    let r = construct_reversal(e_noise, code, tol)?;
    let mut outcomes: Vec<MeasurementOutcome> = r
        .syndrome_projectors
        .iter()
        .zip(&r.unitaries)
        .enumerate()
        .map(|(j, (p, u))| MeasurementOutcome {
            label: format!("syndrome {j}"),
            measurement: p.clone(),
            correction: u.dagger(),
        })
        .collect();
    let complement = r.complement_projector();
    if complement.trace().re > 0.5 {
        outcomes.push(MeasurementOutcome {
            label: "complement".into(),
            correction: ComplexMatrix::identity(complement.rows()),
            measurement: complement,
        });
    }
    MeasurementScheme::new(outcomes, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordModel {
    /// `I_i = -log p_i`.
    Ideal,
    /// `I_i = ceil(-log2 p_i)` bits.
    ShannonCode,
}

/// Record length for each outcome, in the unit of `tol.log_base`.
pub fn record_length_model(p: &[f64], model: RecordModel, tol: &ToleranceConfig) -> Result<Vec<f64>> {
    if let Some((index, &value)) = p.iter().enumerate().find(|(_, &x)| x.is_nan() || x <= 0.0) {
        return Err(Error::ZeroProbability { index, value });
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > tol.eq_tol {
        return Err(Error::NotNormalized { total });
    }
    let bits_to_unit = tol.log(2.0);
    Ok(p.iter()
        .map(|&x| {
            let bits = -x.log2();
            match model {
                RecordModel::Ideal => bits * bits_to_unit,
                // A small allowance keeps exact powers of two from rounding up.
                RecordModel::ShannonCode => (bits - 1e-12).ceil() * bits_to_unit,
            }
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct DemonConfig {
    /// Deterministic stage-one noise.
    pub noise: QuantumOperation,
    pub scheme: MeasurementScheme,
    pub initial_state: DensityOperator,
    pub code: CodeSubspace,
    pub record_model: RecordModel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecondLawReport {
    /// `sum p_i I_i >= H`, `H >= S_e`, `S_e >= -dS_c`.
    pub links: [InequalityCheck; 3],
    pub holds: bool,
    pub saturated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleLedger {
    pub record_model: RecordModel,
    /// Labels of outcomes that were kept.
    pub labels: Vec<String>,
    pub probabilities: Vec<f64>,
    pub record_lengths: Vec<f64>,
    /// Outcomes dropped because their probability is below the rank cutoff.
    pub pruned: Vec<String>,
    /// `S(rho_n) - S(rho)`.
    pub delta_s: f64,
    /// `S(rho_c) - S(rho_n)`.
    pub delta_s_c: f64,
    pub shannon_h: f64,
    /// `S_e(rho_n, {V_i B_i})`.
    pub entropy_exchange_reversal: f64,
    pub avg_record_length: f64,
    pub corrected_state: ComplexMatrix,
    /// Per kept outcome, whether `V_i rho_i V_i^dag = rho`.
    pub correction_succeeded: Vec<bool>,
    pub closure_residual: f64,
    pub cycle_closed: bool,
    pub second_law: SecondLawReport,
}

impl CycleLedger {
    pub fn chain_holds(&self) -> bool {
        self.second_law.holds
    }

    pub fn saturation(&self) -> [bool; 3] {
        self.second_law.links.map(|l| l.saturated)
    }
}

pub fn run_cycle(cfg: &DemonConfig, tol: &ToleranceConfig) -> Result<CycleLedger> {
    let dim = cfg.code.dim();
    for (what, d) in
        [("noise", cfg.noise.dim()), ("scheme", cfg.scheme.dim()), ("initial state", cfg.initial_state.dim())]
    {
        if d != dim {
            return Err(Error::Shape(format!("{what} acts on {d} dimensions, code lives in {dim}")));
        }
    }
    if !cfg.noise.is_deterministic(tol) {
        return Err(Error::NotDeterministic { residual: cfg.noise.completeness_residual() });
    }
    let rho = &cfg.initial_state;
    let leakage = cfg.code.leakage(rho.matrix());
    if leakage > tol.eq_tol {
        return Err(Error::NotOnCode { leakage });
    }

    let (rho_n, _) = cfg.noise.apply_normalized(rho, tol)?;
    let mut labels = Vec::new();
    let mut probabilities = Vec::new();
    let mut pruned = Vec::new();
    let mut correction_succeeded = Vec::new();
    let mut corrected = ComplexMatrix::zeros(dim, dim);
    for o in cfg.scheme.outcomes() {
        let branch = &(&o.measurement * rho_n.matrix()) * &o.measurement.dagger();
        let p = branch.trace().re;
        if p < tol.rank_cutoff {
            pruned.push(o.label.clone());
            continue;
        }
        let fixed = &(&o.correction * &branch) * &o.correction.dagger();
        correction_succeeded.push(fixed.scale_real(1.0 / p).distance(rho.matrix()) < tol.eq_tol);
        corrected = &corrected + &fixed;
        labels.push(o.label.clone());
        probabilities.push(p);
    }
    let kept: f64 = probabilities.iter().sum();
    let normalized: Vec<f64> = probabilities.iter().map(|p| p / kept).collect();

    let s_rho = von_neumann_entropy(rho.matrix(), tol)?;
    let s_n = von_neumann_entropy(rho_n.matrix(), tol)?;
    let s_c = von_neumann_entropy(&corrected, tol)?;
    let shannon_h = shannon_entropy(&normalized, tol)?;
    let entropy_exchange_reversal = entropy_exchange(&cfg.scheme.as_operation(), &rho_n, tol)?;
    let record_lengths = record_length_model(&normalized, cfg.record_model, tol)?;
    let avg_record_length = normalized.iter().zip(&record_lengths).map(|(p, l)| p * l).sum();
    let closure_residual = corrected.distance(rho.matrix());

    let mut ledger = CycleLedger {
        record_model: cfg.record_model,
        labels,
        probabilities,
        record_lengths,
        pruned,
        delta_s: s_n - s_rho,
        delta_s_c: s_c - s_n,
        shannon_h,
        entropy_exchange_reversal,
        avg_record_length,
        corrected_state: corrected,
        correction_succeeded,
        closure_residual,
        cycle_closed: closure_residual < tol.eq_tol,
        second_law: SecondLawReport {
            links: [InequalityCheck::new(0.0, 0.0, tol); 3],
            holds: true,
            saturated: true,
        },
    };
    ledger.second_law = second_law_check(&ledger, tol);
    Ok(ledger)
}

/// The three links of the chain, each with the common `dS_c` removed.
pub fn second_law_check(ledger: &CycleLedger, tol: &ToleranceConfig) -> SecondLawReport {
    let links = [
        InequalityCheck::new(ledger.shannon_h, ledger.avg_record_length, tol),
        InequalityCheck::new(ledger.entropy_exchange_reversal, ledger.shannon_h, tol),
        InequalityCheck::new(-ledger.delta_s_c, ledger.entropy_exchange_reversal, tol),
    ];
    SecondLawReport {
        holds: links.iter().all(|l| l.holds),
        saturated: links.iter().all(|l| l.saturated),
        links,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArakiLiebReversalReport {
    /// `S_e(rho_n, R)`.
    pub entropy_exchange: f64,
    /// `-dS_c = S(rho_n) - S(R(rho_n))`.
    pub entropy_reduction: f64,
    pub check: InequalityCheck,
    /// Equality within the saturation tolerance, as perfect correction demands.
    pub equality: bool,
}

/// `S_e(rho_n, R) >= S(rho_n) - S(R(rho_n))` for the constructed reversal `R`
/// of `e_noise`, where `rho_n` is the normalized noisy state.
pub fn araki_lieb_reversal_check(
    e_noise: &QuantumOperation,
    code: &CodeSubspace,
    rho: &DensityOperator,
    tol: &ToleranceConfig,
) -> Result<ArakiLiebReversalReport> {
    let leakage = code.leakage(rho.matrix());
    if leakage > tol.eq_tol {
        return Err(Error::NotOnCode { leakage });
    }
    let r = construct_reversal(e_noise, code, tol)?.reversal;
    let (rho_n, _) = e_noise.apply_normalized(rho, tol)?;
    let corrected = r.apply(&rho_n, tol)?;
    let s_e = entropy_exchange(&r, &rho_n, tol)?;
    let reduction = von_neumann_entropy(rho_n.matrix(), tol)? - von_neumann_entropy(corrected.matrix(), tol)?;
    let check = InequalityCheck::new(reduction, s_e, tol);
    Ok(ArakiLiebReversalReport {
        entropy_exchange: s_e,
        entropy_reduction: reduction,
        equality: check.saturated,
        check,
    })
}
