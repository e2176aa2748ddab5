//! Probability assignment, the joint-measurement probability rule, the
//! state reduction formula, no-signaling identities, and outcome sampling.
//!
//! The central objects:
//!
//! ```text
//! Pr(s)    = Tr(E_s σ)                                  measurement formula
//! Pr(s&p)  = Tr[(U_S†E_sU_S ⊗ U_P†E_pU_P) τ]            joint rule
//! σ_p      = U_S · Tr_P[(I⊗E_p)τ] / Tr[(I⊗E_p)τ] · U_S† reduced conditional state
//! ```

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{QmError, Result};
use crate::linops::{ComplexMatrix, ProductDims};
use crate::observables::{CheckOutcome, Povm};
use crate::states::{DensityOperator, UnitaryOperator};

/// Probabilities over labeled outcomes. Tiny negative values (floating-point
/// noise) are clamped to zero and the entries renormalized on construction.
#[derive(Debug, Clone, Serialize)]
pub struct OutcomeDistribution {
    entries: Vec<(String, f64)>,
}

impl OutcomeDistribution {
    fn from_raw(entries: Vec<(String, f64)>) -> Self {
        Self {
            entries: clamp_and_renormalize(entries),
        }
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn probability(&self, label: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|&(_, p)| p)
    }
}

/// Probabilities over (s, p) outcome pairs.
#[derive(Debug, Clone, Serialize)]
pub struct JointDistribution {
    entries: Vec<((String, String), f64)>,
}

impl JointDistribution {
    fn from_raw(entries: Vec<((String, String), f64)>) -> Self {
        Self {
            entries: clamp_and_renormalize(entries),
        }
    }

    pub fn entries(&self) -> &[((String, String), f64)] {
        &self.entries
    }

    pub fn probability(&self, s: &str, p: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|((ls, lp), _)| ls == s && lp == p)
            .map(|&(_, prob)| prob)
    }

    /// Σ_p Pr(s&p), in first-seen s order.
    pub fn marginal_s(&self) -> OutcomeDistribution {
        let mut acc: Vec<(String, f64)> = Vec::new();
        for ((s, _), prob) in &self.entries {
            match acc.iter_mut().find(|(l, _)| l == s) {
                Some((_, total)) => *total += prob,
                None => acc.push((s.clone(), *prob)),
            }
        }
        OutcomeDistribution { entries: acc }
    }

    /// Σ_s Pr(s&p), in first-seen p order.
    pub fn marginal_p(&self) -> OutcomeDistribution {
        let mut acc: Vec<(String, f64)> = Vec::new();
        for ((_, p), prob) in &self.entries {
            match acc.iter_mut().find(|(l, _)| l == p) {
                Some((_, total)) => *total += prob,
                None => acc.push((p.clone(), *prob)),
            }
        }
        OutcomeDistribution { entries: acc }
    }
}

fn clamp_and_renormalize<L>(entries: Vec<(L, f64)>) -> Vec<(L, f64)> {
    let clamped: Vec<(L, f64)> = entries
        .into_iter()
        .map(|(l, p)| (l, p.clamp(0.0, 1.0)))
        .collect();
    let total: f64 = clamped.iter().map(|(_, p)| p).sum();
    if total <= 0.0 {
        return clamped;
    }
    clamped.into_iter().map(|(l, p)| (l, p / total)).collect()
}

/// Measurement formula Pr = Tr(E·ρ). The imaginary part of the trace is
/// discarded (it vanishes for Hermitian inputs up to rounding).
pub fn prob(rho: &DensityOperator, effect: &ComplexMatrix) -> Result<f64> {
    if effect.dim() != rho.dim() {
        return Err(QmError::DimensionMismatch {
            context: "effect vs state",
            got: effect.dim(),
            expected: rho.dim(),
        });
    }
    Ok(effect.trace_product(rho.matrix())?.re)
}

/// One probability per POVM outcome, in the POVM's declared order.
pub fn distribution(rho: &DensityOperator, povm: &Povm) -> Result<OutcomeDistribution> {
    let entries = povm
        .outcomes()
        .iter()
        .map(|(label, effect)| prob(rho, effect).map(|p| (label.clone(), p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(OutcomeDistribution::from_raw(entries))
}

/// Joint rule Pr(s&p) = Tr[(U_S†E_sU_S ⊗ U_P†E_pU_P)τ] over the full
/// outcome grid.
pub fn jmf_probability(
    tau: &DensityOperator,
    povm_s: &Povm,
    povm_p: &Povm,
    u_s: &UnitaryOperator,
    u_p: &UnitaryOperator,
) -> Result<JointDistribution> {
    let dims = ProductDims::new(povm_s.dim(), povm_p.dim());
    if tau.dim() != dims.total() {
        return Err(QmError::DimensionMismatch {
            context: "joint state vs POVM product space",
            got: tau.dim(),
            expected: dims.total(),
        });
    }
    if u_s.dim() != povm_s.dim() {
        return Err(QmError::DimensionMismatch {
            context: "U_S vs S POVM",
            got: u_s.dim(),
            expected: povm_s.dim(),
        });
    }
    if u_p.dim() != povm_p.dim() {
        return Err(QmError::DimensionMismatch {
            context: "U_P vs P POVM",
            got: u_p.dim(),
            expected: povm_p.dim(),
        });
    }
    let heis_s: Vec<(String, ComplexMatrix)> = povm_s
        .outcomes()
        .iter()
        .map(|(l, e)| u_s.conjugate_effect(e).map(|m| (l.clone(), m)))
        .collect::<Result<_>>()?;
    let heis_p: Vec<(String, ComplexMatrix)> = povm_p
        .outcomes()
        .iter()
        .map(|(l, e)| u_p.conjugate_effect(e).map(|m| (l.clone(), m)))
        .collect::<Result<_>>()?;
    let mut entries = Vec::with_capacity(heis_s.len() * heis_p.len());
    for (s_label, es) in &heis_s {
        for (p_label, ep) in &heis_p {
            let joint_effect = es.kron(ep);
            let p = joint_effect.trace_product(tau.matrix())?.re;
            entries.push(((s_label.clone(), p_label.clone()), p));
        }
    }
    Ok(JointDistribution::from_raw(entries))
}

/// The raw conditioning weight Tr[(I⊗E_p)τ] and the unnormalized reduced
/// operator Tr_P[(I⊗E_p)τ].
fn condition_on_p(
    tau: &DensityOperator,
    effect_p: &ComplexMatrix,
    dims: ProductDims,
) -> Result<(f64, ComplexMatrix)> {
    if tau.dim() != dims.total() {
        return Err(QmError::DimensionMismatch {
            context: "joint state vs product dims",
            got: tau.dim(),
            expected: dims.total(),
        });
    }
    if effect_p.dim() != dims.dim_p {
        return Err(QmError::DimensionMismatch {
            context: "P effect vs dim_p",
            got: effect_p.dim(),
            expected: dims.dim_p,
        });
    }
    let weighted = ComplexMatrix::identity(dims.dim_s)
        .kron(effect_p)
        .matmul(tau.matrix())?;
    let weight = weighted.trace().re;
    let reduced = weighted.partial_trace_p(dims)?;
    Ok((weight, reduced))
}

/// State reduction formula:
/// σ_p = U_S · Tr_P[(I⊗E_p)τ] / Tr[(I⊗E_p)τ] · U_S†.
///
/// Conditioning on an outcome of probability ≤ tol is an error; the
/// quotient is undefined there.
pub fn srf(
    tau: &DensityOperator,
    effect_p: &ComplexMatrix,
    u_s: &UnitaryOperator,
    dims: ProductDims,
) -> Result<DensityOperator> {
    if u_s.dim() != dims.dim_s {
        return Err(QmError::DimensionMismatch {
            context: "U_S vs dim_s",
            got: u_s.dim(),
            expected: dims.dim_s,
        });
    }
    let (weight, reduced) = condition_on_p(tau, effect_p, dims)?;
    let tol = tau.tol();
    if weight <= tol {
        return Err(QmError::ZeroProbabilityCondition {
            probability: weight,
            tol,
        });
    }
    let normalized = reduced.scale((1.0 / weight).into());
    let rotated = u_s
        .matrix()
        .matmul(&normalized)?
        .matmul(&u_s.matrix().adjoint())?;
    DensityOperator::from_matrix(rotated, tol)
}

/// The reduction without the U_S conjugation: the state of S directly after
/// the premeasurement, conditional on the later result p.
pub fn ozawa_pre_state(
    tau: &DensityOperator,
    effect_p: &ComplexMatrix,
    dims: ProductDims,
) -> Result<DensityOperator> {
    srf(tau, effect_p, &UnitaryOperator::identity(dims.dim_s), dims)
}

/// Mixture identity: Σ_p Pr(p)·σ_p = U_S·Tr_P(τ)·U_S†, the unreduced state.
/// Outcomes of probability ≤ tol contribute nothing and are reported as
/// skipped.
pub fn mixture_identity_check(
    tau: &DensityOperator,
    povm_p: &Povm,
    u_s: &UnitaryOperator,
    dims: ProductDims,
    tol: f64,
) -> Result<CheckOutcome> {
    if povm_p.dim() != dims.dim_p {
        return Err(QmError::DimensionMismatch {
            context: "P POVM vs dim_p",
            got: povm_p.dim(),
            expected: dims.dim_p,
        });
    }
    let mut mixture = ComplexMatrix::zeros(dims.dim_s);
    let mut skipped = Vec::new();
    for (label, effect) in povm_p.outcomes() {
        match srf(tau, effect, u_s, dims) {
            Ok(sigma_p) => {
                let weight = condition_on_p(tau, effect, dims)?.0;
                mixture = mixture.add(&sigma_p.matrix().scale(weight.into()))?;
            }
            Err(QmError::ZeroProbabilityCondition { .. }) => skipped.push(label.clone()),
            Err(e) => return Err(e),
        }
    }
    let unreduced = tau.reduced_state_s(dims)?.evolve(u_s)?;
    let deviation = mixture.max_abs_diff(unreduced.matrix());
    let mut outcome = if deviation <= tol {
        CheckOutcome::passed(deviation)
    } else {
        CheckOutcome::failed(deviation, "mixture".to_string())
    };
    outcome.skipped = skipped;
    Ok(outcome)
}

/// Local-unitary no-signaling: with V = V_S ⊗ V_P, the four expressions
///
/// ```text
/// Tr[E_s (V_S Tr_P(τ) V_S†)]
/// Tr[(E_s⊗I) (V_S⊗I) τ (V_S⊗I)†]
/// Tr[(E_s⊗I) V τ V†]
/// Tr{E_s Tr_P[V τ V†]}
/// ```
///
/// agree for every effect E_s; a remote V_P is invisible to S.
pub fn no_signaling_unitary_check(
    tau: &DensityOperator,
    v_s: &UnitaryOperator,
    v_p: &UnitaryOperator,
    povm_s: &Povm,
    dims: ProductDims,
    tol: f64,
) -> Result<CheckOutcome> {
    if povm_s.dim() != dims.dim_s {
        return Err(QmError::DimensionMismatch {
            context: "S POVM vs dim_s",
            got: povm_s.dim(),
            expected: dims.dim_s,
        });
    }
    if v_s.dim() != dims.dim_s || v_p.dim() != dims.dim_p {
        return Err(QmError::DimensionMismatch {
            context: "local unitaries vs product dims",
            got: v_s.dim() * v_p.dim(),
            expected: dims.total(),
        });
    }
    let i_p = ComplexMatrix::identity(dims.dim_p);
    let evolved_reduced = tau.reduced_state_s(dims)?.evolve(v_s)?;
    let vs_only = UnitaryOperator::new(v_s.matrix().kron(&i_p))?;
    let tau_vs = tau.evolve(&vs_only)?;
    let v_joint = UnitaryOperator::new(v_s.matrix().kron(v_p.matrix()))?;
    let tau_joint = tau.evolve(&v_joint)?;
    let reduced_after = tau_joint.reduced_state_s(dims)?;

    let mut devs = Vec::new();
    for (label, effect) in povm_s.outcomes() {
        let chain = [
            prob(&evolved_reduced, effect)?,
            prob(&tau_vs, &effect.kron(&i_p))?,
            prob(&tau_joint, &effect.kron(&i_p))?,
            prob(&reduced_after, effect)?,
        ];
        let mut dev: f64 = 0.0;
        for i in 0..chain.len() {
            for j in i + 1..chain.len() {
                dev = dev.max((chain[i] - chain[j]).abs());
            }
        }
        devs.push((format!("s:{label}"), dev));
    }
    Ok(outcome_from_deviations(devs, tol))
}

/// Conditional-probability route to the SRF: for every (s, p) with
/// Pr(p) above the floor,
///
/// ```text
/// Tr[(U_S†E_sU_S ⊗ E_p)τ] / Tr[(I⊗E_p)τ]  =  Tr(E_s · σ_p)
/// ```
///
/// where σ_p is the SRF state. Conditionals are formed at full precision
/// before any clamping. Skipped outcomes are reported.
pub fn srf_conditional_check(
    tau: &DensityOperator,
    povm_s: &Povm,
    povm_p: &Povm,
    u_s: &UnitaryOperator,
    tol: f64,
    p_floor: f64,
) -> Result<CheckOutcome> {
    let dims = ProductDims::new(povm_s.dim(), povm_p.dim());
    if tau.dim() != dims.total() {
        return Err(QmError::DimensionMismatch {
            context: "joint state vs POVM product space",
            got: tau.dim(),
            expected: dims.total(),
        });
    }
    let heis_s: Vec<(String, ComplexMatrix)> = povm_s
        .outcomes()
        .iter()
        .map(|(l, e)| u_s.conjugate_effect(e).map(|m| (l.clone(), m)))
        .collect::<Result<_>>()?;
    let mut devs = Vec::new();
    let mut skipped = Vec::new();
    for (p_label, effect_p) in povm_p.outcomes() {
        let (p_weight, _) = condition_on_p(tau, effect_p, dims)?;
        if p_weight <= p_floor {
            skipped.push(p_label.clone());
            continue;
        }
        let sigma_p = srf(tau, effect_p, u_s, dims)?;
        for ((s_label, heis_effect), (_, bare_effect)) in heis_s.iter().zip(povm_s.outcomes()) {
            let joint = heis_effect.kron(effect_p).trace_product(tau.matrix())?.re;
            let conditional = joint / p_weight;
            let via_srf = prob(&sigma_p, bare_effect)?;
            devs.push((
                format!("{s_label}&{p_label}"),
                (conditional - via_srf).abs(),
            ));
        }
    }
    let mut outcome = outcome_from_deviations(devs, tol);
    outcome.skipped = skipped;
    Ok(outcome)
}

fn outcome_from_deviations(devs: Vec<(String, f64)>, tol: f64) -> CheckOutcome {
    let mut max_deviation: f64 = 0.0;
    let mut witness = None;
    for (label, dev) in devs {
        if dev > max_deviation {
            max_deviation = dev;
        }
        if dev > tol && witness.is_none() {
            witness = Some(label);
        }
    }
    if let Some(w) = witness {
        CheckOutcome::failed(max_deviation, w)
    } else {
        CheckOutcome::passed(max_deviation)
    }
}

/// Draw one outcome label by inverse CDF over the POVM's declared order.
/// A pure function of (state, POVM, seed).
pub fn sample_outcome(rho: &DensityOperator, povm: &Povm, seed: u64) -> Result<String> {
    let dist = distribution(rho, povm)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    for (label, p) in dist.entries() {
        cumulative += p;
        if u < cumulative {
            return Ok(label.clone());
        }
    }
    // cumulative rounding can leave u just above the final boundary
    Ok(dist
        .entries()
        .last()
        .expect("POVM has at least one outcome")
        .0
        .clone())
}
