//! Input documents: named operations, codes, states and measurement schemes
//! over one Hilbert space dimension.
//!
//! Complex numbers are `[re, im]` pairs; matrices are row-major nested arrays.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use qreverse::demon::{MeasurementOutcome, MeasurementScheme};
use qreverse::linalg::{ComplexMatrix, ToleranceConfig};
use qreverse::operations::{DensityOperator, QuantumOperation};
use qreverse::reversibility::CodeSubspace;

use crate::InputError;

pub const SCHEMA_VERSION: &str = "1";

pub type ComplexDoc = [f64; 2];
pub type MatrixDoc = Vec<Vec<ComplexDoc>>;
pub type VectorDoc = Vec<ComplexDoc>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum LogBase {
    #[serde(rename = "2")]
    #[value(name = "2")]
    Two,
    #[serde(rename = "e")]
    #[value(name = "e")]
    E,
}

impl LogBase {
    pub fn value(self) -> f64 {
        match self {
            LogBase::Two => 2.0,
            LogBase::E => std::f64::consts::E,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eq_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_cutoff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_base: Option<LogBase>,
}

impl ToleranceOverrides {
    /// Fields set in `self` win over those in `fallback`.
    pub fn or(&self, fallback: &ToleranceOverrides) -> ToleranceOverrides {
        ToleranceOverrides {
            eq_tol: self.eq_tol.or(fallback.eq_tol),
            rank_cutoff: self.rank_cutoff.or(fallback.rank_cutoff),
            log_base: self.log_base.or(fallback.log_base),
        }
    }

    pub fn resolve(&self) -> Result<(ToleranceConfig, LogBase), InputError> {
        let d = ToleranceConfig::default();
        let base = self.log_base.unwrap_or(LogBase::Two);
        let tol = ToleranceConfig::new(
            self.eq_tol.unwrap_or(d.eq_tol),
            self.rank_cutoff.unwrap_or(d.rank_cutoff),
            base.value(),
        )
        .map_err(|e| InputError::invalid("tolerance", e))?;
        Ok((tol, base))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateDoc {
    Matrix(MatrixDoc),
    Ket(VectorDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeDoc {
    pub label: String,
    pub measurement: MatrixDoc,
    /// Conditional unitary; the identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correction: Option<MatrixDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub version: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<ToleranceOverrides>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub operations: BTreeMap<String, Vec<MatrixDoc>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub codes: BTreeMap<String, Vec<VectorDoc>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub states: BTreeMap<String, StateDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub schemes: BTreeMap<String, Vec<OutcomeDoc>>,
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, kind: &'static str, name: &str) -> Result<&'a T, InputError> {
    map.get(name).ok_or_else(|| InputError::UnknownName { kind, name: name.to_string() })
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let doc: InputDocument = serde_json::from_str(text)?;
        if doc.version != SCHEMA_VERSION {
            return Err(InputError::Version(doc.version));
        }
        if doc.dim == 0 {
            return Err(InputError::Dimension("dim must be positive".into()));
        }
        Ok(doc)
    }

    pub fn operation(&self, name: &str, tol: &ToleranceConfig) -> Result<QuantumOperation, InputError> {
        let what = format!("operation '{name}'");
        let kraus = lookup(&self.operations, "operation", name)?
            .iter()
            .enumerate()
            .map(|(j, m)| matrix_from_doc(m, self.dim, self.dim, &format!("{what} operator {j}")))
            .collect::<Result<Vec<_>, _>>()?;
        QuantumOperation::new(kraus, tol).map_err(|e| InputError::invalid(what, e))
    }

    pub fn code(&self, name: &str, tol: &ToleranceConfig) -> Result<CodeSubspace, InputError> {
        let what = format!("code '{name}'");
        let basis = lookup(&self.codes, "code", name)?
            .iter()
            .enumerate()
            .map(|(k, v)| vector_from_doc(v, self.dim, &format!("{what} basis vector {k}")))
            .collect::<Result<Vec<_>, _>>()?;
        CodeSubspace::new(basis, tol).map_err(|e| InputError::invalid(what, e))
    }

    pub fn state(&self, name: &str, tol: &ToleranceConfig) -> Result<DensityOperator, InputError> {
        let what = format!("state '{name}'");
        match lookup(&self.states, "state", name)? {
            StateDoc::Matrix(m) => {
                let m = matrix_from_doc(m, self.dim, self.dim, &what)?;
                DensityOperator::new(m, tol).map_err(|e| InputError::invalid(what, e))
            }
            StateDoc::Ket(v) => {
                let v = vector_from_doc(v, self.dim, &what)?;
                DensityOperator::from_ket(&v).map_err(|e| InputError::invalid(what, e))
            }
        }
    }

    pub fn scheme(&self, name: &str, tol: &ToleranceConfig) -> Result<MeasurementScheme, InputError> {
        let what = format!("scheme '{name}'");
        let outcomes = lookup(&self.schemes, "scheme", name)?
            .iter()
            .map(|o| {
                let measurement = matrix_from_doc(
                    &o.measurement,
                    self.dim,
                    self.dim,
                    &format!("{what} outcome '{}'", o.label),
                )?;
                let correction = match &o.correction {
                    Some(c) => {
                        matrix_from_doc(c, self.dim, self.dim, &format!("{what} correction '{}'", o.label))?
                    }
                    None => ComplexMatrix::identity(self.dim),
                };
                Ok(MeasurementOutcome { label: o.label.clone(), measurement, correction })
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        MeasurementScheme::new(outcomes, tol).map_err(|e| InputError::invalid(what, e))
    }
}

pub fn matrix_from_doc(
    m: &MatrixDoc,
    rows: usize,
    cols: usize,
    what: &str,
) -> Result<ComplexMatrix, InputError> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(InputError::Dimension(format!("{what} must be {rows}x{cols}")));
    }
    let entries = m.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
    ComplexMatrix::new(rows, cols, entries).map_err(|e| InputError::invalid(what, e))
}

pub fn vector_from_doc(v: &VectorDoc, dim: usize, what: &str) -> Result<ComplexMatrix, InputError> {
    if v.len() != dim {
        return Err(InputError::Dimension(format!("{what} must have {dim} components, got {}", v.len())));
    }
    let entries = v.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
    ComplexMatrix::new(dim, 1, entries).map_err(|e| InputError::invalid(what, e))
}

pub fn matrix_to_doc(m: &ComplexMatrix) -> MatrixDoc {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect()).collect()
}

pub fn vector_to_doc(v: &ComplexMatrix) -> VectorDoc {
    (0..v.rows()).map(|i| [v.get(i, 0).re, v.get(i, 0).im]).collect()
}
