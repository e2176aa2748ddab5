//! Check orchestration: run a resolved scenario's checks and aggregate a
//! structured report.

use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::measurement::{
    mixture_identity_check, no_signaling_unitary_check, srf_conditional_check,
};
use crate::observables::{
    check_jmf_form, check_noeffect, check_prodmarg, verify_equivalence, CheckOutcome,
};

use super::format::{CheckName, ResolvedScenario, Scenario};

/// Probability floor below which conditional checks skip an outcome.
pub const CONDITION_FLOOR: f64 = 1e-8;

/// One executed check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub pass: bool,
    pub max_deviation: f64,
    pub witness: Option<String>,
    pub skipped: Vec<String>,
    pub elapsed_ms: f64,
    /// Extra structure for compound checks (the three-predicate report of
    /// the equivalence check).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

impl CheckEntry {
    pub fn from_outcome(name: &str, outcome: CheckOutcome, elapsed_ms: f64) -> Self {
        Self {
            name: name.to_string(),
            pass: outcome.pass,
            max_deviation: outcome.max_deviation,
            witness: outcome.witness,
            skipped: outcome.skipped,
            elapsed_ms,
            details: None,
        }
    }
}

/// Aggregated result of a scenario run. The overall verdict is the
/// conjunction of the per-check passes (vacuously true when empty).
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub overall_pass: bool,
    pub checks: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn from_entries(checks: Vec<CheckEntry>) -> Self {
        Self {
            overall_pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Parse nothing, validate everything, run each named check in the declared
/// order, and aggregate. Deterministic given the scenario text.
pub fn run_scenario(scenario: &Scenario) -> Result<CheckReport> {
    let resolved = scenario.resolve()?;
    let mut entries = Vec::with_capacity(resolved.checks.len());
    for &check in &resolved.checks {
        entries.push(run_check(&resolved, check)?);
    }
    Ok(CheckReport::from_entries(entries))
}

fn run_check(scn: &ResolvedScenario, check: CheckName) -> Result<CheckEntry> {
    let tol = scn.tolerance;
    let start = Instant::now();
    let entry = match check {
        CheckName::Noeffect => {
            let outcome = check_noeffect(
                scn.joint.as_ref().expect("inputs checked"),
                scn.povm_s.as_ref().expect("inputs checked"),
                scn.povm_p.as_ref().expect("inputs checked"),
                &scn.u_s,
                &scn.u_p,
                tol,
            )?;
            CheckEntry::from_outcome(check.as_str(), outcome, elapsed_ms(start))
        }
        CheckName::Prodmarg => {
            let outcome = check_prodmarg(scn.joint.as_ref().expect("inputs checked"), tol);
            CheckEntry::from_outcome(check.as_str(), outcome, elapsed_ms(start))
        }
        CheckName::JmfForm => {
            let outcome = check_jmf_form(
                scn.joint.as_ref().expect("inputs checked"),
                scn.povm_s.as_ref().expect("inputs checked"),
                scn.povm_p.as_ref().expect("inputs checked"),
                &scn.u_s,
                &scn.u_p,
                tol,
            )?;
            CheckEntry::from_outcome(check.as_str(), outcome, elapsed_ms(start))
        }
        CheckName::Equivalence => {
            let report = verify_equivalence(
                scn.joint.as_ref().expect("inputs checked"),
                scn.povm_s.as_ref().expect("inputs checked"),
                scn.povm_p.as_ref().expect("inputs checked"),
                &scn.u_s,
                &scn.u_p,
                tol,
            )?;
            let max_deviation = report
                .jmf_form
                .max_deviation
                .max(report.noeffect.max_deviation)
                .max(report.prodmarg.max_deviation);
            CheckEntry {
                name: check.as_str().to_string(),
                pass: report.biconditional_holds,
                max_deviation,
                witness: None,
                skipped: Vec::new(),
                elapsed_ms: elapsed_ms(start),
                details: Some(serde_json::to_value(&report).expect("report serializes")),
            }
        }
        CheckName::Srf => {
            let outcome = srf_conditional_check(
                scn.state.as_ref().expect("inputs checked"),
                scn.povm_s.as_ref().expect("inputs checked"),
                scn.povm_p.as_ref().expect("inputs checked"),
                &scn.u_s,
                tol,
                CONDITION_FLOOR,
            )?;
            CheckEntry::from_outcome(check.as_str(), outcome, elapsed_ms(start))
        }
        CheckName::Mixture => {
            let outcome = mixture_identity_check(
                scn.state.as_ref().expect("inputs checked"),
                scn.povm_p.as_ref().expect("inputs checked"),
                &scn.u_s,
                scn.dims,
                tol,
            )?;
            CheckEntry::from_outcome(check.as_str(), outcome, elapsed_ms(start))
        }
        CheckName::NoSignaling => {
            let outcome = no_signaling_unitary_check(
                scn.state.as_ref().expect("inputs checked"),
                &scn.u_s,
                &scn.u_p,
                scn.povm_s.as_ref().expect("inputs checked"),
                scn.dims,
                tol,
            )?;
            CheckEntry::from_outcome(check.as_str(), outcome, elapsed_ms(start))
        }
    };
    Ok(entry)
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}
