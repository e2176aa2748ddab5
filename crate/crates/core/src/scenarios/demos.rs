//! Canned demonstrations runnable from the CLI. Each demo declares the
//! pass/fail pattern it is supposed to produce; a run reports both the
//! measured outcomes and whether the pattern matched.

use std::time::Instant;

use serde::Serialize;

use crate::error::{QmError, Result};
use crate::linops::ProductDims;
use crate::luders::LudersModel;
use crate::measurement::{distribution, mixture_identity_check, no_signaling_unitary_check};
use crate::observables::{
    check_jmf_form, check_noeffect, check_prodmarg, random_povm, random_pvm, verify_equivalence,
    CheckOutcome,
};
use crate::states::{DensityOperator, StateVector, UnitaryOperator};

use super::canned::{
    chsh_optimal_settings, chsh_value, coin_povm, correlated_joint, independent_joint, singlet,
    spin_observable, x_pvm, z_pvm,
};
use super::runner::{CheckEntry, CheckReport};

/// A named demo and the outcome pattern it asserts.
#[derive(Debug, Clone, Serialize)]
pub struct DemoInfo {
    pub name: &'static str,
    pub description: &'static str,
}

pub const DEMOS: &[DemoInfo] = &[
    DemoInfo {
        name: "sec6-counterexample",
        description: "correlated coin-toss joint POVM: passes the no-effect marginal \
                      condition but fails the product-of-marginals condition (by design)",
    },
    DemoInfo {
        name: "sec6-independent",
        description: "independent coin-toss joint POVM: satisfies the no-effect, \
                      product-of-marginals, and joint-formula conditions",
    },
    DemoInfo {
        name: "coin",
        description: "triple Stern-Gerlach coin POVM gives Pr(0) = Pr(1) = 1/2 on \
                      every state",
    },
    DemoInfo {
        name: "singlet-srf",
        description: "conditioning the singlet on a probe outcome prepares the \
                      opposite spin state, in the z and x bases",
    },
    DemoInfo {
        name: "chsh",
        description: "the joint measurement rule violates the CHSH bound on the \
                      singlet (2\u{221a}2) while product states stay below 2",
    },
    DemoInfo {
        name: "luders",
        description: "premeasurement model: probe statistics mirror system \
                      statistics and the projection-postulate state equals the \
                      reduced conditional state",
    },
    DemoInfo {
        name: "no-signaling",
        description: "a remote local unitary leaves the other subsystem's \
                      measurement probabilities unchanged (four-way identity chain)",
    },
    DemoInfo {
        name: "mixture",
        description: "the probability-weighted mixture of reduced conditional \
                      states reassembles the unreduced evolved state",
    },
];

/// Expected pass/fail for one check of a demo.
#[derive(Debug, Clone, Serialize)]
pub struct ExpectedOutcome {
    pub name: String,
    pub expect_pass: bool,
}

/// Result of a demo run: the measured report plus the declared pattern.
#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    pub demo: String,
    pub description: String,
    pub overall_pass: bool,
    pub checks: Vec<CheckEntry>,
    pub expected: Vec<ExpectedOutcome>,
    pub pattern_matched: bool,
}

impl DemoReport {
    fn new(info: &DemoInfo, entries: Vec<CheckEntry>, expected: Vec<(&str, bool)>) -> Self {
        let report = CheckReport::from_entries(entries);
        let expected: Vec<ExpectedOutcome> = expected
            .into_iter()
            .map(|(name, expect_pass)| ExpectedOutcome {
                name: name.to_string(),
                expect_pass,
            })
            .collect();
        let pattern_matched = report.checks.len() == expected.len()
            && report
                .checks
                .iter()
                .zip(&expected)
                .all(|(c, e)| c.name == e.name && c.pass == e.expect_pass);
        Self {
            demo: info.name.to_string(),
            description: info.description.to_string(),
            overall_pass: report.overall_pass,
            checks: report.checks,
            expected,
            pattern_matched,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("demo report serializes")
    }
}

pub fn demo_info(name: &str) -> Option<&'static DemoInfo> {
    DEMOS.iter().find(|d| d.name == name)
}

/// Run a demo by name. Unknown names are input errors.
pub fn run_demo(name: &str, seed: u64, tol: f64) -> Result<DemoReport> {
    let info = demo_info(name).ok_or_else(|| QmError::ValidationError {
        field: "demo".into(),
        message: format!(
            "unknown demo '{name}'; available: {}",
            DEMOS
                .iter()
                .map(|d| d.name)
                .collect::<Vec<_>>()
                .join(", ")
        ),
    })?;
    match name {
        "sec6-counterexample" => sec6_demo(info, correlated_joint(), tol, false),
        "sec6-independent" => sec6_demo(info, independent_joint(), tol, true),
        "coin" => coin_demo(info, seed, tol),
        "singlet-srf" => singlet_srf_demo(info, tol),
        "chsh" => chsh_demo(info, seed, tol),
        "luders" => luders_demo(info, seed, tol),
        "no-signaling" => no_signaling_demo(info, seed, tol),
        "mixture" => mixture_demo(info, seed, tol),
        _ => unreachable!("demo table covers all names"),
    }
}

fn timed<F: FnOnce() -> Result<CheckOutcome>>(name: &str, f: F) -> Result<CheckEntry> {
    let start = Instant::now();
    let outcome = f()?;
    Ok(CheckEntry::from_outcome(
        name,
        outcome,
        start.elapsed().as_secs_f64() * 1e3,
    ))
}

fn outcome_from_max(deviation: f64, tol: f64, witness: &str) -> CheckOutcome {
    if deviation <= tol {
        CheckOutcome::passed(deviation)
    } else {
        CheckOutcome::failed(deviation, witness.to_string())
    }
}

fn sec6_demo(
    info: &DemoInfo,
    joint: crate::observables::JointPovm,
    tol: f64,
    expect_jmf: bool,
) -> Result<DemoReport> {
    let povm = coin_povm();
    let id = UnitaryOperator::identity(2);
    let entries = vec![
        timed("noeffect", || {
            check_noeffect(&joint, &povm, &povm, &id, &id, tol)
        })?,
        timed("prodmarg", || Ok(check_prodmarg(&joint, tol)))?,
        timed("jmf_form", || {
            check_jmf_form(&joint, &povm, &povm, &id, &id, tol)
        })?,
        {
            let start = Instant::now();
            let report = verify_equivalence(&joint, &povm, &povm, &id, &id, tol)?;
            CheckEntry {
                name: "equivalence".into(),
                pass: report.biconditional_holds,
                max_deviation: report
                    .jmf_form
                    .max_deviation
                    .max(report.noeffect.max_deviation)
                    .max(report.prodmarg.max_deviation),
                witness: None,
                skipped: Vec::new(),
                elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
                details: Some(serde_json::to_value(&report).expect("serializes")),
            }
        },
    ];
    let expected = vec![
        ("noeffect", true),
        ("prodmarg", expect_jmf),
        ("jmf_form", expect_jmf),
        ("equivalence", true),
    ];
    Ok(DemoReport::new(info, entries, expected))
}

fn coin_demo(info: &DemoInfo, seed: u64, tol: f64) -> Result<DemoReport> {
    let povm = coin_povm();
    let entry = timed("uniform_statistics", || {
        let mut max_dev: f64 = 0.0;
        for i in 0..100u64 {
            let rho = DensityOperator::random(2, seed.wrapping_add(i));
            let d = distribution(&rho, &povm)?;
            for (_, p) in d.entries() {
                max_dev = max_dev.max((p - 0.5).abs());
            }
        }
        Ok(outcome_from_max(max_dev, tol, "coin distribution"))
    })?;
    Ok(DemoReport::new(info, vec![entry], vec![("uniform_statistics", true)]))
}

fn singlet_srf_demo(info: &DemoInfo, tol: f64) -> Result<DemoReport> {
    let tau = singlet();
    let id = UnitaryOperator::identity(2);
    let dims = ProductDims::new(2, 2);
    let z_up = z_pvm().effect("up").unwrap().clone();
    let z_down_proj = z_pvm().effect("down").unwrap().clone();
    let x_left = x_pvm().effect("left").unwrap().clone();
    let x_right_proj = x_pvm().effect("right").unwrap().clone();

    let entries = vec![
        timed("condition_z_up_gives_down", || {
            let sigma = crate::measurement::srf(&tau, &z_up, &id, dims)?;
            Ok(outcome_from_max(
                sigma.matrix().max_abs_diff(&z_down_proj),
                tol,
                "z conditioning",
            ))
        })?,
        timed("condition_x_left_gives_right", || {
            let sigma = crate::measurement::srf(&tau, &x_left, &id, dims)?;
            Ok(outcome_from_max(
                sigma.matrix().max_abs_diff(&x_right_proj),
                tol,
                "x conditioning",
            ))
        })?,
    ];
    let expected = vec![
        ("condition_z_up_gives_down", true),
        ("condition_x_left_gives_right", true),
    ];
    Ok(DemoReport::new(info, entries, expected))
}

fn chsh_demo(info: &DemoInfo, seed: u64, tol: f64) -> Result<DemoReport> {
    const TSIRELSON: f64 = 2.828_427_124_746_190_3; // 2√2
    let entries = vec![
        timed("singlet_reaches_tsirelson", || {
            let (a1, a2, b1, b2) = chsh_optimal_settings();
            let value = chsh_value(&singlet(), &a1, &a2, &b1, &b2)?;
            Ok(outcome_from_max(
                (value - TSIRELSON).abs(),
                tol.max(1e-6),
                "optimal settings",
            ))
        })?,
        timed("product_states_stay_classical", || {
            let mut max_excess: f64 = 0.0;
            for i in 0..100u64 {
                let s = seed.wrapping_add(i).wrapping_mul(0x9e37_79b9);
                let sigma = DensityOperator::random(2, s);
                let pi = DensityOperator::random(2, s.wrapping_add(1));
                let tau = DensityOperator::from_matrix(
                    sigma.matrix().kron(pi.matrix()),
                    sigma.tol(),
                )?;
                let dir = |k: u64| {
                    let g = crate::states::random_ginibre(2, s.wrapping_add(k));
                    spin_observable(g.get(0, 0).re, g.get(0, 1).re, g.get(1, 0).re)
                };
                let value = chsh_value(&tau, &dir(2), &dir(3), &dir(4), &dir(5))?;
                max_excess = max_excess.max((value - 2.0).max(0.0));
            }
            Ok(outcome_from_max(max_excess, tol, "classical bound"))
        })?,
    ];
    let expected = vec![
        ("singlet_reaches_tsirelson", true),
        ("product_states_stay_classical", true),
    ];
    Ok(DemoReport::new(info, entries, expected))
}

fn luders_demo(info: &DemoInfo, seed: u64, tol: f64) -> Result<DemoReport> {
    let qubit_model = LudersModel::build(
        vec![vec![StateVector::basis(2, 0)], vec![StateVector::basis(2, 1)]],
        vec![StateVector::basis(2, 0), StateVector::basis(2, 1)],
        0,
        tol,
    )?;
    let degenerate_model = LudersModel::build(
        vec![
            vec![StateVector::basis(3, 0), StateVector::basis(3, 1)],
            vec![StateVector::basis(3, 2)],
        ],
        vec![
            StateVector::basis(3, 0),
            StateVector::basis(3, 1),
            StateVector::basis(3, 2),
        ],
        0,
        tol,
    )?;

    let random_state = |dim: usize, s: u64| {
        let g = crate::states::random_ginibre(dim, s);
        let raw: Vec<_> = (0..dim).map(|i| g.get(i, 0)).collect();
        StateVector::normalize(raw, 1e-12).expect("Ginibre column is nonzero")
    };

    let entries = vec![
        timed("proxy_statistics_agree", || {
            let mut max_dev: f64 = 0.0;
            for i in 0..20u64 {
                for (model, dim) in [(&qubit_model, 2), (&degenerate_model, 3)] {
                    let s0 = random_state(dim, seed.wrapping_add(i * 7));
                    let outcome = model.proxy_check(&s0, tol)?;
                    max_dev = max_dev.max(outcome.max_deviation);
                }
            }
            Ok(outcome_from_max(max_dev, tol, "proxy statistics"))
        })?,
        timed("postulate_equals_reduction", || {
            let mut max_dev: f64 = 0.0;
            for i in 0..20u64 {
                for (model, dim) in [(&qubit_model, 2), (&degenerate_model, 3)] {
                    let s0 = random_state(dim, seed.wrapping_add(1000 + i * 11));
                    let u_s = UnitaryOperator::random(dim, seed.wrapping_add(2000 + i));
                    for k in 0..model.n_groups() {
                        match model.projection_postulate_state(&s0, k, &u_s) {
                            Ok(postulate) => {
                                let via_srf = model.srf_reduced_state(&s0, k, &u_s)?;
                                max_dev = max_dev.max(
                                    postulate.projector().max_abs_diff(via_srf.matrix()),
                                );
                            }
                            Err(QmError::ZeroProbabilityCondition { .. }) => continue,
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
            Ok(outcome_from_max(max_dev, tol, "projection postulate"))
        })?,
    ];
    let expected = vec![
        ("proxy_statistics_agree", true),
        ("postulate_equals_reduction", true),
    ];
    Ok(DemoReport::new(info, entries, expected))
}

fn no_signaling_demo(info: &DemoInfo, seed: u64, tol: f64) -> Result<DemoReport> {
    let entry = timed("remote_unitary_invisible", || {
        let mut max_dev: f64 = 0.0;
        for i in 0..100u64 {
            let s = seed.wrapping_add(i.wrapping_mul(97));
            let (dim_s, dim_p) = if i % 2 == 0 { (2, 2) } else { (2, 3) };
            let dims = ProductDims::new(dim_s, dim_p);
            let tau = DensityOperator::random(dims.total(), s);
            let v_s = UnitaryOperator::random(dim_s, s.wrapping_add(1));
            let v_p = UnitaryOperator::random(dim_p, s.wrapping_add(2));
            let povm_s = random_povm(dim_s, 2 + (i % 2) as usize, s.wrapping_add(3));
            let outcome = no_signaling_unitary_check(&tau, &v_s, &v_p, &povm_s, dims, tol)?;
            max_dev = max_dev.max(outcome.max_deviation);
        }
        Ok(outcome_from_max(max_dev, tol, "identity chain"))
    })?;
    Ok(DemoReport::new(
        info,
        vec![entry],
        vec![("remote_unitary_invisible", true)],
    ))
}

fn mixture_demo(info: &DemoInfo, seed: u64, tol: f64) -> Result<DemoReport> {
    let entry = timed("mixture_reassembles_unreduced_state", || {
        let mut max_dev: f64 = 0.0;
        for i in 0..100u64 {
            let s = seed.wrapping_add(i.wrapping_mul(131));
            let (dim_s, dim_p) = if i % 2 == 0 { (2, 2) } else { (3, 2) };
            let dims = ProductDims::new(dim_s, dim_p);
            let tau = DensityOperator::random(dims.total(), s);
            let u_s = UnitaryOperator::random(dim_s, s.wrapping_add(1));
            let povm_p = random_pvm(dim_p, 1 + (i % dim_p as u64) as usize, s.wrapping_add(2));
            let outcome = mixture_identity_check(&tau, &povm_p, &u_s, dims, tol)?;
            max_dev = max_dev.max(outcome.max_deviation);
        }
        Ok(outcome_from_max(max_dev, tol, "mixture identity"))
    })?;
    Ok(DemoReport::new(
        info,
        vec![entry],
        vec![("mixture_reassembles_unreduced_state", true)],
    ))
}
