use std::collections::BTreeMap;

use qreverse::demon::{canonical_scheme, run_cycle, DemonConfig, RecordModel};
use qreverse::info::{
    entanglement_fidelity, fano_check, shannon_bound_check, subadditivity_report, w_matrix,
};
use qreverse::linalg::{hermitian_eig, ToleranceConfig};
use qreverse::reversibility::{
    adjoint_condition_check, algebraic_m_matrix, construct_reversal, degeneracy_report,
    info_theoretic_reversibility, verify_reversal,
};
use qreverse::Error;

use crate::document::{
    matrix_to_doc, vector_to_doc, InputDocument, LogBase, ToleranceOverrides, SCHEMA_VERSION,
};
use crate::report::{
    failure_name, CheckReport, DemonReport, EntropyReport, MMatrixDoc, ReportDocument, ReverseReport,
    ToleranceReport,
};
use crate::{InputError, EXIT_AFFIRMATIVE, EXIT_NEGATIVE};

/// Name under which `--scheme` selects the scheme built from the reversal.
pub const CANONICAL_SCHEME: &str = "canonical";

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Check { operation: String, code: String },
    Reverse { operation: String, code: String },
    Entropy { operation: String, state: String },
    Demon { operation: String, code: String, state: String, scheme: String, record_model: RecordModel },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Reverse { .. } => "reverse",
            Command::Entropy { .. } => "entropy",
            Command::Demon { .. } => "demon",
        }
    }

    fn inputs(&self) -> BTreeMap<String, String> {
        let pairs: Vec<(&str, &String)> = match self {
            Command::Check { operation, code } | Command::Reverse { operation, code } => {
                vec![("operation", operation), ("code", code)]
            }
            Command::Entropy { operation, state } => vec![("operation", operation), ("state", state)],
            Command::Demon { operation, code, state, scheme, .. } => {
                vec![("operation", operation), ("code", code), ("state", state), ("scheme", scheme)]
            }
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: ReportDocument,
    /// For `reverse`: the reversal as an input document, when one was built.
    pub reversal_document: Option<InputDocument>,
}

/// Runs `cmd` against `doc`. Tolerance fields in `overrides` take precedence
/// over those in the document.
pub fn run(
    doc: &InputDocument,
    cmd: &Command,
    overrides: &ToleranceOverrides,
) -> Result<Outcome, InputError> {
    let (tol, base) = overrides.or(&doc.tolerance.clone().unwrap_or_default()).resolve()?;
    let mut report = ReportDocument {
        command: cmd.name().to_string(),
        inputs: cmd.inputs(),
        tolerance: ToleranceReport::new(&tol, base),
        failure: None,
        check: None,
        reverse: None,
        entropy: None,
        demon: None,
        exit_status: EXIT_AFFIRMATIVE,
    };
    let mut reversal_document = None;
    let affirmative = match cmd {
        Command::Check { operation, code } => check(doc, operation, code, &tol, &mut report)?,
        Command::Reverse { operation, code } => {
            let (ok, emitted) = reverse(doc, operation, code, &tol, base, &mut report)?;
            reversal_document = emitted;
            ok
        }
        Command::Entropy { operation, state } => entropy(doc, operation, state, &tol, &mut report)?,
        Command::Demon { operation, code, state, scheme, record_model } => {
            demon(doc, operation, code, state, scheme, *record_model, &tol, &mut report)?
        }
    };
    report.exit_status = if affirmative { EXIT_AFFIRMATIVE } else { EXIT_NEGATIVE };
    Ok(Outcome { report, reversal_document })
}

fn analysis(what: &str) -> impl Fn(Error) -> InputError + '_ {
    move |e| InputError::invalid(what, e)
}

fn check(
    doc: &InputDocument,
    operation: &str,
    code: &str,
    tol: &ToleranceConfig,
    report: &mut ReportDocument,
) -> Result<bool, InputError> {
    let e = doc.operation(operation, tol)?;
    let code = doc.code(code, tol)?;
    let verdict = info_theoretic_reversibility(&e, &code, tol).map_err(analysis("reversibility check"))?;
    let (m, m_holds) = algebraic_m_matrix(&e, &code, tol).map_err(analysis("m-matrix test"))?;
    let degeneracy = if m_holds {
        Some(degeneracy_report(&e, &code, tol).map_err(analysis("degeneracy report"))?.into())
    } else {
        None
    };
    let adjoint = adjoint_condition_check(&e, &code, tol).map_err(analysis("adjoint condition"))?;
    report.failure = verdict.failure_reason.map(|r| failure_name(r).to_string());
    report.check = Some(CheckReport {
        reversible: verdict.reversible,
        failure_reason: report.failure.clone(),
        mu_squared: verdict.mu_squared,
        condition1: verdict.condition1.map(Into::into),
        condition2: verdict.condition2.map(Into::into),
        m_matrix: MMatrixDoc::new(&m, m_holds),
        routes_agree: verdict.reversible == m_holds,
        degeneracy,
        adjoint: adjoint.into(),
    });
    Ok(verdict.reversible)
}

fn reverse(
    doc: &InputDocument,
    operation: &str,
    code_name: &str,
    tol: &ToleranceConfig,
    base: LogBase,
    report: &mut ReportDocument,
) -> Result<(bool, Option<InputDocument>), InputError> {
    let e = doc.operation(operation, tol)?;
    let code = doc.code(code_name, tol)?;
    let r = match construct_reversal(&e, &code, tol) {
        Ok(r) => r,
        Err(Error::NotReversible(msg)) => {
            report.failure = Some(format!("not reversible: {msg}"));
            return Ok((false, None));
        }
        Err(err) => return Err(InputError::invalid("reversal construction", err)),
    };
    let verification =
        verify_reversal(&r.reversal, &e, &code, tol).map_err(analysis("reversal verification"))?;
    if !verification.ok {
        report.failure = Some(format!(
            "constructed reversal fails verification (residual {:e})",
            verification.worst_residual
        ));
    }
    let reversal_kraus: Vec<_> = r.reversal.kraus().iter().map(matrix_to_doc).collect();
    report.reverse = Some(ReverseReport {
        mu_squared: r.mu_squared,
        weights: r.weights.clone(),
        lambdas: r.lambdas.clone(),
        degenerate: r.degenerate,
        syndrome_count: r.syndrome_count(),
        syndrome_projectors: r.syndrome_projectors.iter().map(matrix_to_doc).collect(),
        reversal_kraus: reversal_kraus.clone(),
        orthogonality_residual: r.orthogonality_residual,
        verification: verification.into(),
    });
    let emitted = InputDocument {
        version: SCHEMA_VERSION.to_string(),
        dim: doc.dim,
        tolerance: Some(ToleranceOverrides {
            eq_tol: Some(tol.eq_tol),
            rank_cutoff: Some(tol.rank_cutoff),
            log_base: Some(base),
        }),
        operations: BTreeMap::from([(format!("{operation}_reversal"), reversal_kraus)]),
        codes: BTreeMap::from([(code_name.to_string(), code.basis().iter().map(vector_to_doc).collect())]),
        states: BTreeMap::new(),
        schemes: BTreeMap::new(),
    };
    Ok((verification.ok, Some(emitted)))
}

fn entropy(
    doc: &InputDocument,
    operation: &str,
    state: &str,
    tol: &ToleranceConfig,
    report: &mut ReportDocument,
) -> Result<bool, InputError> {
    let e = doc.operation(operation, tol)?;
    let rho = doc.state(state, tol)?;
    let w = match w_matrix(&e, &rho, tol) {
        Ok(w) => w,
        Err(Error::Annihilated { trace }) => {
            report.failure = Some(format!("operation annihilates the state (output trace {trace:e})"));
            return Ok(false);
        }
        Err(err) => return Err(InputError::invalid("W matrix", err)),
    };
    let entropy_exchange = w.entropy(tol).map_err(analysis("entropy exchange"))?;
    let w_eigenvalues = hermitian_eig(&w.matrix, tol)
        .map_err(analysis("W spectrum"))?
        .eigenvalues
        .into_iter()
        .map(|x| x.max(0.0))
        .collect();
    let fidelity = entanglement_fidelity(&e, &rho, tol).map_err(analysis("entanglement fidelity"))?;
    let fano = fano_check(&e, &rho, tol).map_err(analysis("Fano inequality"))?;
    let sub = subadditivity_report(&e, &rho, tol).map_err(analysis("subadditivity"))?;
    let shannon = shannon_bound_check(&e, &rho, tol).map_err(analysis("Shannon bound"))?;
    let all_hold = fano.check.holds && sub.all_hold() && shannon.holds;
    if !all_hold {
        report.failure = Some("an entropy inequality is violated beyond tolerance".into());
    }
    report.entropy = Some(EntropyReport {
        output_trace: w.output_trace,
        entanglement_fidelity: fidelity,
        entropy_exchange,
        w_eigenvalues,
        w_diagonal: w.probabilities(),
        fano: fano.into(),
        subadditivity: sub.into(),
        shannon_bound: shannon.into(),
        all_hold,
    });
    Ok(all_hold)
}

#[allow(clippy::too_many_arguments)]
fn demon(
    doc: &InputDocument,
    operation: &str,
    code: &str,
    state: &str,
    scheme_name: &str,
    record_model: RecordModel,
    tol: &ToleranceConfig,
    report: &mut ReportDocument,
) -> Result<bool, InputError> {
    let noise = doc.operation(operation, tol)?;
    let code = doc.code(code, tol)?;
    let initial_state = doc.state(state, tol)?;
    if !noise.is_deterministic(tol) {
        return Err(InputError::invalid(
            format!("noise '{operation}'"),
            Error::NotDeterministic { residual: noise.completeness_residual() },
        ));
    }
    let scheme = if scheme_name == CANONICAL_SCHEME {
        match canonical_scheme(&noise, &code, tol) {
            Ok(s) => s,
            Err(Error::NotReversible(msg)) => {
                report.failure = Some(format!("no canonical scheme, noise is not reversible: {msg}"));
                return Ok(false);
            }
            Err(err) => return Err(InputError::invalid("canonical scheme", err)),
        }
    } else {
        doc.scheme(scheme_name, tol)?
    };
    let cfg = DemonConfig { noise, scheme, initial_state, code, record_model };
    let ledger = run_cycle(&cfg, tol).map_err(analysis("demon cycle"))?;
    let ok = ledger.chain_holds() && ledger.cycle_closed;
    if !ledger.cycle_closed {
        report.failure = Some(format!("cycle does not close (residual {:e})", ledger.closure_residual));
    } else if !ledger.chain_holds() {
        report.failure = Some("second-law chain is violated".into());
    }
    report.demon = Some(DemonReport::new(scheme_name, &ledger));
    Ok(ok)
}
