//! Scenario file format: a JSON document describing a state, observables,
//! and a list of checks to run. Complex numbers are two-element arrays
//! `[re, im]`; matrices are row-major nested arrays.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QmError, Result};
use crate::linops::{ComplexMatrix, ProductDims, DEFAULT_TOL};
use crate::observables::{JointPovm, Povm};
use crate::states::{DensityOperator, StateVector, UnitaryOperator};

use super::canned;

/// Default seed when a scenario or the CLI does not supply one.
pub const DEFAULT_SEED: u64 = 20_060_713;

pub type ComplexSpec = (f64, f64);
pub type MatrixSpec = Vec<Vec<ComplexSpec>>;

/// Declarative description of a check run. This is the on-disk schema;
/// `resolve` turns it into validated domain objects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub version: u32,
    pub dims: DimsSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub povm_s: Option<Vec<OutcomeSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub povm_p: Option<Vec<OutcomeSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joint: Option<JointSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_s: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_p: Option<MatrixSpec>,
    pub checks: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimsSpec {
    pub dim_s: usize,
    pub dim_p: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    /// "singlet" or "maximally_mixed"
    Named(String),
    Pure { pure: Vec<ComplexSpec> },
    Matrix { matrix: MatrixSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeSpec {
    pub label: String,
    pub effect: MatrixSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JointSpec {
    /// "independent" or "correlated"
    Named(String),
    Explicit { outcomes: Vec<JointOutcomeSpec> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointOutcomeSpec {
    pub s: String,
    pub p: String,
    pub effect: MatrixSpec,
}

/// The checks a scenario may request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckName {
    Noeffect,
    Prodmarg,
    JmfForm,
    Equivalence,
    Srf,
    Mixture,
    NoSignaling,
}

impl CheckName {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "noeffect" => Some(Self::Noeffect),
            "prodmarg" => Some(Self::Prodmarg),
            "jmf_form" => Some(Self::JmfForm),
            "equivalence" => Some(Self::Equivalence),
            "srf" | "conditionals" => Some(Self::Srf),
            "mixture" => Some(Self::Mixture),
            "no_signaling" => Some(Self::NoSignaling),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Noeffect => "noeffect",
            Self::Prodmarg => "prodmarg",
            Self::JmfForm => "jmf_form",
            Self::Equivalence => "equivalence",
            Self::Srf => "srf",
            Self::Mixture => "mixture",
            Self::NoSignaling => "no_signaling",
        }
    }
}

/// A scenario with every referenced object validated into its domain type.
#[derive(Debug, Clone)]
pub struct ResolvedScenario {
    pub dims: ProductDims,
    pub state: Option<DensityOperator>,
    pub povm_s: Option<Povm>,
    pub povm_p: Option<Povm>,
    pub joint: Option<JointPovm>,
    pub u_s: UnitaryOperator,
    pub u_p: UnitaryOperator,
    pub checks: Vec<CheckName>,
    pub tolerance: f64,
    pub seed: u64,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| QmError::ParseError(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Validate every referenced object before any check runs.
    pub fn resolve(&self) -> Result<ResolvedScenario> {
        if self.version != 1 {
            return Err(QmError::ValidationError {
                field: "version".into(),
                message: format!("unsupported version {}", self.version),
            });
        }
        if self.dims.dim_s == 0 || self.dims.dim_p == 0 {
            return Err(QmError::ValidationError {
                field: "dims".into(),
                message: "factor dimensions must be >= 1".into(),
            });
        }
        let dims = ProductDims::new(self.dims.dim_s, self.dims.dim_p);
        let tolerance = self.tolerance.unwrap_or(DEFAULT_TOL);
        if !(tolerance >= 0.0) {
            return Err(QmError::ValidationError {
                field: "tolerance".into(),
                message: format!("tolerance must be nonnegative, got {tolerance}"),
            });
        }

        let state = self
            .state
            .as_ref()
            .map(|spec| resolve_state(spec, dims, tolerance))
            .transpose()?;
        let povm_s = self
            .povm_s
            .as_ref()
            .map(|o| resolve_povm(o, dims.dim_s, tolerance, "povm_s"))
            .transpose()?;
        let povm_p = self
            .povm_p
            .as_ref()
            .map(|o| resolve_povm(o, dims.dim_p, tolerance, "povm_p"))
            .transpose()?;
        let joint = self
            .joint
            .as_ref()
            .map(|spec| resolve_joint(spec, dims, tolerance))
            .transpose()?;
        let u_s = match &self.u_s {
            Some(m) => resolve_unitary(m, dims.dim_s, tolerance, "u_s")?,
            None => UnitaryOperator::identity(dims.dim_s),
        };
        let u_p = match &self.u_p {
            Some(m) => resolve_unitary(m, dims.dim_p, tolerance, "u_p")?,
            None => UnitaryOperator::identity(dims.dim_p),
        };

        let mut checks = Vec::with_capacity(self.checks.len());
        for (i, name) in self.checks.iter().enumerate() {
            let check = CheckName::parse(name).ok_or_else(|| QmError::ValidationError {
                field: format!("checks[{i}]"),
                message: format!("unknown check '{name}'"),
            })?;
            checks.push(check);
        }

        let resolved = ResolvedScenario {
            dims,
            state,
            povm_s,
            povm_p,
            joint,
            u_s,
            u_p,
            checks,
            tolerance,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
        };
        resolved.require_check_inputs()?;
        Ok(resolved)
    }
}

impl ResolvedScenario {
    /// Every requested check must have its inputs present.
    fn require_check_inputs(&self) -> Result<()> {
        let missing = |check: CheckName, field: &str| -> QmError {
            QmError::MissingInput {
                check: check.as_str().into(),
                field: field.into(),
            }
        };
        for &check in &self.checks {
            match check {
                CheckName::Noeffect | CheckName::JmfForm | CheckName::Equivalence => {
                    if self.joint.is_none() {
                        return Err(missing(check, "joint"));
                    }
                    if self.povm_s.is_none() {
                        return Err(missing(check, "povm_s"));
                    }
                    if self.povm_p.is_none() {
                        return Err(missing(check, "povm_p"));
                    }
                }
                CheckName::Prodmarg => {
                    if self.joint.is_none() {
                        return Err(missing(check, "joint"));
                    }
                }
                CheckName::Srf => {
                    if self.state.is_none() {
                        return Err(missing(check, "state"));
                    }
                    if self.povm_s.is_none() {
                        return Err(missing(check, "povm_s"));
                    }
                    if self.povm_p.is_none() {
                        return Err(missing(check, "povm_p"));
                    }
                }
                CheckName::Mixture => {
                    if self.state.is_none() {
                        return Err(missing(check, "state"));
                    }
                    if self.povm_p.is_none() {
                        return Err(missing(check, "povm_p"));
                    }
                }
                CheckName::NoSignaling => {
                    if self.state.is_none() {
                        return Err(missing(check, "state"));
                    }
                    if self.povm_s.is_none() {
                        return Err(missing(check, "povm_s"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn to_complex((re, im): ComplexSpec) -> Complex64 {
    Complex64::new(re, im)
}

fn parse_matrix(spec: &MatrixSpec, expected_dim: usize, field: &str) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<Complex64>> = spec
        .iter()
        .map(|row| row.iter().map(|&z| to_complex(z)).collect())
        .collect();
    let matrix = ComplexMatrix::from_rows(&rows).map_err(|e| QmError::ValidationError {
        field: field.to_string(),
        message: e.to_string(),
    })?;
    if matrix.dim() != expected_dim {
        return Err(QmError::ValidationError {
            field: field.to_string(),
            message: format!("dimension {} does not match {expected_dim}", matrix.dim()),
        });
    }
    Ok(matrix)
}

fn resolve_state(spec: &StateSpec, dims: ProductDims, tol: f64) -> Result<DensityOperator> {
    let validation = |message: String| QmError::ValidationError {
        field: "state".into(),
        message,
    };
    match spec {
        StateSpec::Named(name) => match name.as_str() {
            "singlet" => {
                if dims.dim_s != 2 || dims.dim_p != 2 {
                    return Err(validation("the singlet state needs 2x2 dims".into()));
                }
                Ok(canned::singlet())
            }
            "maximally_mixed" => Ok(DensityOperator::maximally_mixed(dims.total())),
            other => Err(validation(format!("unknown named state '{other}'"))),
        },
        StateSpec::Pure { pure } => {
            if pure.len() != dims.total() {
                return Err(validation(format!(
                    "pure vector length {} does not match product dimension {}",
                    pure.len(),
                    dims.total()
                )));
            }
            let amplitudes: Vec<Complex64> = pure.iter().map(|&z| to_complex(z)).collect();
            let v = StateVector::new(amplitudes, tol)
                .map_err(|e| validation(e.to_string()))?;
            DensityOperator::pure(&v).map_err(|e| validation(e.to_string()))
        }
        StateSpec::Matrix { matrix } => {
            let m = parse_matrix(matrix, dims.total(), "state")?;
            DensityOperator::from_matrix(m, tol).map_err(|e| validation(e.to_string()))
        }
    }
}

fn resolve_povm(
    outcomes: &[OutcomeSpec],
    dim: usize,
    tol: f64,
    field: &str,
) -> Result<Povm> {
    let mut parsed = Vec::with_capacity(outcomes.len());
    for (i, outcome) in outcomes.iter().enumerate() {
        let effect = parse_matrix(&outcome.effect, dim, &format!("{field}[{i}].effect"))?;
        parsed.push((outcome.label.clone(), effect));
    }
    Povm::new(dim, parsed, tol).map_err(|e| QmError::ValidationError {
        field: field.to_string(),
        message: e.to_string(),
    })
}

fn resolve_joint(spec: &JointSpec, dims: ProductDims, tol: f64) -> Result<JointPovm> {
    let validation = |message: String| QmError::ValidationError {
        field: "joint".into(),
        message,
    };
    match spec {
        JointSpec::Named(name) => {
            if dims.dim_s != 2 || dims.dim_p != 2 {
                return Err(validation(format!("named joint '{name}' needs 2x2 dims")));
            }
            match name.as_str() {
                "independent" => Ok(canned::independent_joint()),
                "correlated" => Ok(canned::correlated_joint()),
                other => Err(validation(format!("unknown named joint '{other}'"))),
            }
        }
        JointSpec::Explicit { outcomes } => {
            let mut s_labels: Vec<String> = Vec::new();
            let mut p_labels: Vec<String> = Vec::new();
            for outcome in outcomes {
                if !s_labels.contains(&outcome.s) {
                    s_labels.push(outcome.s.clone());
                }
                if !p_labels.contains(&outcome.p) {
                    p_labels.push(outcome.p.clone());
                }
            }
            let expected = s_labels.len() * p_labels.len();
            if outcomes.len() != expected {
                return Err(validation(format!(
                    "outcome grid has {} entries but the label sets span {expected}",
                    outcomes.len()
                )));
            }
            let mut effects: Vec<Option<ComplexMatrix>> = vec![None; expected];
            for (i, outcome) in outcomes.iter().enumerate() {
                let si = s_labels.iter().position(|l| *l == outcome.s).unwrap();
                let pi = p_labels.iter().position(|l| *l == outcome.p).unwrap();
                let slot = si * p_labels.len() + pi;
                if effects[slot].is_some() {
                    return Err(validation(format!(
                        "duplicate outcome pair ({}, {})",
                        outcome.s, outcome.p
                    )));
                }
                effects[slot] = Some(parse_matrix(
                    &outcome.effect,
                    dims.total(),
                    &format!("joint.outcomes[{i}].effect"),
                )?);
            }
            let effects: Vec<ComplexMatrix> = effects
                .into_iter()
                .collect::<Option<_>>()
                .ok_or_else(|| validation("outcome grid is not the full Cartesian product".into()))?;
            JointPovm::new(dims, s_labels, p_labels, effects, tol)
                .map_err(|e| validation(e.to_string()))
        }
    }
}

fn resolve_unitary(
    spec: &MatrixSpec,
    dim: usize,
    tol: f64,
    field: &str,
) -> Result<UnitaryOperator> {
    let m = parse_matrix(spec, dim, field)?;
    UnitaryOperator::from_matrix(m, tol).map_err(|e| QmError::ValidationError {
        field: field.to_string(),
        message: e.to_string(),
    })
}
