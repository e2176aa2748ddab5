//! POVMs, joint POVMs on product spaces, the joint-measurement-formula
//! constructor, and the NOEFFECT / PRODMARG / JMF-form checkers.
//!
//! The three checkers together express the equivalence
//! `JMF ⇔ (NOEFFECT and PRODMARG)`:
//!
//! ```text
//! JMF form:  E_{s&p} = U_S†E_sU_S ⊗ U_P†E_pU_P               for all (s,p)
//! NOEFFECT:  Σ_p E_{s&p} = U_S†E_sU_S ⊗ I                    for all s
//!            Σ_s E_{s&p} = I ⊗ U_P†E_pU_P                    for all p
//! PRODMARG:  E_{s&p} = (Σ_p E_{s&p})(Σ_s E_{s&p})            for all (s,p)
//! ```

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{QmError, Result};
use crate::linops::{ComplexMatrix, ProductDims};
use crate::states::{random_ginibre, UnitaryOperator};

/// Result of a single numeric check: pass/fail plus diagnostics for
/// near-misses at tolerance boundaries.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub pass: bool,
    pub max_deviation: f64,
    /// First violating outcome label, when the check fails.
    pub witness: Option<String>,
    /// Outcomes excluded from the check (e.g. zero-probability conditions).
    pub skipped: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(max_deviation: f64) -> Self {
        Self {
            pass: true,
            max_deviation,
            witness: None,
            skipped: Vec::new(),
        }
    }

    pub fn failed(max_deviation: f64, witness: String) -> Self {
        Self {
            pass: false,
            max_deviation,
            witness: Some(witness),
            skipped: Vec::new(),
        }
    }

    fn from_deviations(devs: impl IntoIterator<Item = (String, f64)>, tol: f64) -> Self {
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
        Self {
            pass: witness.is_none(),
            max_deviation,
            witness,
            skipped: Vec::new(),
        }
    }
}

/// Finite outcome-labeled family of effects with 0 ≤ E ≤ I summing to I.
#[derive(Debug, Clone)]
pub struct Povm {
    dim: usize,
    outcomes: Vec<(String, ComplexMatrix)>,
    tol: f64,
}

impl Povm {
    pub fn new(dim: usize, outcomes: Vec<(String, ComplexMatrix)>, tol: f64) -> Result<Self> {
        assert!(!outcomes.is_empty(), "a POVM needs at least one outcome");
        for (label, effect) in &outcomes {
            validate_effect(label, effect, dim, tol)?;
        }
        let mut sum = ComplexMatrix::zeros(dim);
        for (_, effect) in &outcomes {
            sum = sum.add(effect)?;
        }
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if deviation > tol {
            return Err(QmError::SumNotIdentity { deviation });
        }
        for (i, (label, _)) in outcomes.iter().enumerate() {
            if outcomes[..i].iter().any(|(l, _)| l == label) {
                return Err(QmError::DuplicateLabel {
                    label: label.clone(),
                });
            }
        }
        Ok(Self { dim, outcomes, tol })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcomes(&self) -> &[(String, ComplexMatrix)] {
        &self.outcomes
    }

    pub fn labels(&self) -> Vec<&str> {
        self.outcomes.iter().map(|(l, _)| l.as_str()).collect()
    }

    pub fn effect(&self, label: &str) -> Option<&ComplexMatrix> {
        self.outcomes
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, e)| e)
    }

    /// True iff every effect is idempotent and distinct effects are
    /// mutually orthogonal, both within tol.
    pub fn is_projection_valued(&self, tol: f64) -> bool {
        for (i, (_, e_i)) in self.outcomes.iter().enumerate() {
            let e_sq = e_i.matmul(e_i).expect("same dim");
            if e_sq.max_abs_diff(e_i) > tol {
                return false;
            }
            for (_, e_j) in self.outcomes.iter().skip(i + 1) {
                if e_i.matmul(e_j).expect("same dim").max_abs() > tol {
                    return false;
                }
            }
        }
        true
    }
}

fn validate_effect(label: &str, effect: &ComplexMatrix, dim: usize, tol: f64) -> Result<()> {
    if effect.dim() != dim {
        return Err(QmError::DimensionMismatch {
            context: "POVM effect dimension",
            got: effect.dim(),
            expected: dim,
        });
    }
    let dev = effect.hermitian_deviation();
    if dev > tol {
        return Err(QmError::NotHermitian {
            deviation: dev,
            tol,
        });
    }
    let eigs = effect.hermitian_eigenvalues();
    let min = eigs.first().copied().unwrap_or(0.0);
    let max = eigs.last().copied().unwrap_or(0.0);
    if min < -tol {
        return Err(QmError::EffectNotPositive {
            label: label.to_string(),
            min_eigenvalue: min,
        });
    }
    if max > 1.0 + tol {
        return Err(QmError::EffectExceedsIdentity {
            label: label.to_string(),
            max_eigenvalue: max,
        });
    }
    Ok(())
}

/// POVM on a tensor-product space indexed by outcome pairs (s, p).
///
/// The outcome grid is always the full Cartesian product of the s-label set
/// and the p-label set; effects may be zero.
#[derive(Debug, Clone)]
pub struct JointPovm {
    dims: ProductDims,
    s_labels: Vec<String>,
    p_labels: Vec<String>,
    /// s-major: effects[si * p_labels.len() + pi]
    effects: Vec<ComplexMatrix>,
    tol: f64,
}

impl JointPovm {
    pub fn new(
        dims: ProductDims,
        s_labels: Vec<String>,
        p_labels: Vec<String>,
        effects: Vec<ComplexMatrix>,
        tol: f64,
    ) -> Result<Self> {
        let expected = s_labels.len() * p_labels.len();
        if effects.len() != expected {
            return Err(QmError::DimensionMismatch {
                context: "joint POVM outcome grid",
                got: effects.len(),
                expected,
            });
        }
        for (i, label) in s_labels.iter().enumerate() {
            if s_labels[..i].contains(label) {
                return Err(QmError::DuplicateLabel {
                    label: label.clone(),
                });
            }
        }
        for (i, label) in p_labels.iter().enumerate() {
            if p_labels[..i].contains(label) {
                return Err(QmError::DuplicateLabel {
                    label: label.clone(),
                });
            }
        }
        let total = dims.total();
        let mut sum = ComplexMatrix::zeros(total);
        for (idx, effect) in effects.iter().enumerate() {
            let label = format!(
                "{}&{}",
                s_labels[idx / p_labels.len()],
                p_labels[idx % p_labels.len()]
            );
            validate_effect(&label, effect, total, tol)?;
            sum = sum.add(effect)?;
        }
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(total));
        if deviation > tol {
            return Err(QmError::SumNotIdentity { deviation });
        }
        Ok(Self {
            dims,
            s_labels,
            p_labels,
            effects,
            tol,
        })
    }

    /// The joint-measurement-formula POVM:
    /// E_{s&p} = U_S†E_sU_S ⊗ U_P†E_pU_P.
    pub fn from_jmf(
        povm_s: &Povm,
        povm_p: &Povm,
        u_s: &UnitaryOperator,
        u_p: &UnitaryOperator,
    ) -> Result<Self> {
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
        let dims = ProductDims::new(povm_s.dim(), povm_p.dim());
        let heis_s: Vec<ComplexMatrix> = povm_s
            .outcomes()
            .iter()
            .map(|(_, e)| u_s.conjugate_effect(e))
            .collect::<Result<_>>()?;
        let heis_p: Vec<ComplexMatrix> = povm_p
            .outcomes()
            .iter()
            .map(|(_, e)| u_p.conjugate_effect(e))
            .collect::<Result<_>>()?;
        let mut effects = Vec::with_capacity(heis_s.len() * heis_p.len());
        for es in &heis_s {
            for ep in &heis_p {
                effects.push(es.kron(ep));
            }
        }
        let tol = povm_s.tol().max(povm_p.tol());
        Self::new(
            dims,
            povm_s.labels().iter().map(|s| s.to_string()).collect(),
            povm_p.labels().iter().map(|s| s.to_string()).collect(),
            effects,
            tol,
        )
    }

    pub fn dims(&self) -> ProductDims {
        self.dims
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn s_labels(&self) -> &[String] {
        &self.s_labels
    }

    pub fn p_labels(&self) -> &[String] {
        &self.p_labels
    }

    pub fn effect(&self, si: usize, pi: usize) -> &ComplexMatrix {
        &self.effects[si * self.p_labels.len() + pi]
    }

    pub fn effect_by_labels(&self, s: &str, p: &str) -> Option<&ComplexMatrix> {
        let si = self.s_labels.iter().position(|l| l == s)?;
        let pi = self.p_labels.iter().position(|l| l == p)?;
        Some(self.effect(si, pi))
    }

    /// Iterate the full outcome grid in s-major order.
    pub fn pairs(&self) -> impl Iterator<Item = ((&str, &str), &ComplexMatrix)> {
        self.effects.iter().enumerate().map(move |(idx, e)| {
            let si = idx / self.p_labels.len();
            let pi = idx % self.p_labels.len();
            ((self.s_labels[si].as_str(), self.p_labels[pi].as_str()), e)
        })
    }

    /// Σ_p E_{s&p} for a fixed s index.
    fn marginal_effect_s(&self, si: usize) -> ComplexMatrix {
        let mut sum = ComplexMatrix::zeros(self.dims.total());
        for pi in 0..self.p_labels.len() {
            sum = sum.add(self.effect(si, pi)).expect("same dim");
        }
        sum
    }

    /// Σ_s E_{s&p} for a fixed p index.
    fn marginal_effect_p(&self, pi: usize) -> ComplexMatrix {
        let mut sum = ComplexMatrix::zeros(self.dims.total());
        for si in 0..self.s_labels.len() {
            sum = sum.add(self.effect(si, pi)).expect("same dim");
        }
        sum
    }

    /// Marginal POVM over s: effects Σ_p E_{s&p}, living on the product space.
    pub fn marginal_s(&self) -> Povm {
        let outcomes = self
            .s_labels
            .iter()
            .enumerate()
            .map(|(si, label)| (label.clone(), self.marginal_effect_s(si)))
            .collect();
        Povm::new(self.dims.total(), outcomes, self.tol)
            .expect("marginals of a valid joint POVM form a valid POVM")
    }

    /// Marginal POVM over p: effects Σ_s E_{s&p}, living on the product space.
    pub fn marginal_p(&self) -> Povm {
        let outcomes = self
            .p_labels
            .iter()
            .enumerate()
            .map(|(pi, label)| (label.clone(), self.marginal_effect_p(pi)))
            .collect();
        Povm::new(self.dims.total(), outcomes, self.tol)
            .expect("marginals of a valid joint POVM form a valid POVM")
    }
}

fn require_label_sets_match(
    joint: &JointPovm,
    povm_s: &Povm,
    povm_p: &Povm,
) -> Result<()> {
    let check = |joint_labels: &[String], povm: &Povm, side: &str| -> Result<()> {
        let povm_labels = povm.labels();
        if joint_labels.len() != povm_labels.len()
            || joint_labels
                .iter()
                .any(|l| !povm_labels.contains(&l.as_str()))
        {
            return Err(QmError::LabelMismatch {
                context: format!(
                    "{side} labels {:?} vs {:?}",
                    joint_labels, povm_labels
                ),
            });
        }
        Ok(())
    };
    check(&joint.s_labels, povm_s, "S")?;
    check(&joint.p_labels, povm_p, "P")
}

/// NOEFFECT: for every s, Σ_p E_{s&p} = U_S†E_sU_S ⊗ I, and symmetrically
/// for every p, Σ_s E_{s&p} = I ⊗ U_P†E_pU_P. Both families must hold.
pub fn check_noeffect(
    joint: &JointPovm,
    povm_s: &Povm,
    povm_p: &Povm,
    u_s: &UnitaryOperator,
    u_p: &UnitaryOperator,
    tol: f64,
) -> Result<CheckOutcome> {
    require_label_sets_match(joint, povm_s, povm_p)?;
    let i_s = ComplexMatrix::identity(joint.dims.dim_s);
    let i_p = ComplexMatrix::identity(joint.dims.dim_p);
    let mut devs = Vec::new();
    for (si, label) in joint.s_labels.iter().enumerate() {
        let effect = povm_s.effect(label).expect("label sets match");
        let expected = u_s.conjugate_effect(effect)?.kron(&i_p);
        devs.push((
            format!("s:{label}"),
            joint.marginal_effect_s(si).max_abs_diff(&expected),
        ));
    }
    for (pi, label) in joint.p_labels.iter().enumerate() {
        let effect = povm_p.effect(label).expect("label sets match");
        let expected = i_s.kron(&u_p.conjugate_effect(effect)?);
        devs.push((
            format!("p:{label}"),
            joint.marginal_effect_p(pi).max_abs_diff(&expected),
        ));
    }
    Ok(CheckOutcome::from_deviations(devs, tol))
}

/// PRODMARG: E_{s&p} = (Σ_p E_{s&p})(Σ_s E_{s&p}) for every pair.
pub fn check_prodmarg(joint: &JointPovm, tol: f64) -> CheckOutcome {
    let marg_s: Vec<ComplexMatrix> = (0..joint.s_labels.len())
        .map(|si| joint.marginal_effect_s(si))
        .collect();
    let marg_p: Vec<ComplexMatrix> = (0..joint.p_labels.len())
        .map(|pi| joint.marginal_effect_p(pi))
        .collect();
    let mut devs = Vec::new();
    for (si, s_label) in joint.s_labels.iter().enumerate() {
        for (pi, p_label) in joint.p_labels.iter().enumerate() {
            let product = marg_s[si].matmul(&marg_p[pi]).expect("same dim");
            devs.push((
                format!("{s_label}&{p_label}"),
                joint.effect(si, pi).max_abs_diff(&product),
            ));
        }
    }
    CheckOutcome::from_deviations(devs, tol)
}

/// JMF form: the joint equals U_S†E_sU_S ⊗ U_P†E_pU_P entrywise.
pub fn check_jmf_form(
    joint: &JointPovm,
    povm_s: &Povm,
    povm_p: &Povm,
    u_s: &UnitaryOperator,
    u_p: &UnitaryOperator,
    tol: f64,
) -> Result<CheckOutcome> {
    require_label_sets_match(joint, povm_s, povm_p)?;
    let heis_s: Vec<(String, ComplexMatrix)> = joint
        .s_labels
        .iter()
        .map(|l| {
            u_s.conjugate_effect(povm_s.effect(l).expect("label sets match"))
                .map(|m| (l.clone(), m))
        })
        .collect::<Result<_>>()?;
    let heis_p: Vec<(String, ComplexMatrix)> = joint
        .p_labels
        .iter()
        .map(|l| {
            u_p.conjugate_effect(povm_p.effect(l).expect("label sets match"))
                .map(|m| (l.clone(), m))
        })
        .collect::<Result<_>>()?;
    let mut devs = Vec::new();
    for (si, (s_label, es)) in heis_s.iter().enumerate() {
        for (pi, (p_label, ep)) in heis_p.iter().enumerate() {
            let expected = es.kron(ep);
            devs.push((
                format!("{s_label}&{p_label}"),
                joint.effect(si, pi).max_abs_diff(&expected),
            ));
        }
    }
    Ok(CheckOutcome::from_deviations(devs, tol))
}

/// Joint evaluation of the three predicates plus the biconditional
/// `jmf_form ⇔ (noeffect ∧ prodmarg)`.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub jmf_form: CheckOutcome,
    pub noeffect: CheckOutcome,
    pub prodmarg: CheckOutcome,
    pub biconditional_holds: bool,
}

pub fn verify_equivalence(
    joint: &JointPovm,
    povm_s: &Povm,
    povm_p: &Povm,
    u_s: &UnitaryOperator,
    u_p: &UnitaryOperator,
    tol: f64,
) -> Result<EquivalenceReport> {
    let jmf_form = check_jmf_form(joint, povm_s, povm_p, u_s, u_p, tol)?;
    let noeffect = check_noeffect(joint, povm_s, povm_p, u_s, u_p, tol)?;
    let prodmarg = check_prodmarg(joint, tol);
    let biconditional_holds = jmf_form.pass == (noeffect.pass && prodmarg.pass);
    Ok(EquivalenceReport {
        jmf_form,
        noeffect,
        prodmarg,
        biconditional_holds,
    })
}

/// Seeded random POVM: draw Gram matrices G_iG_i† and normalize by the
/// inverse square root of their sum, so the effects sum to I exactly up
/// to numerical error.
pub fn random_povm(dim: usize, n_outcomes: usize, seed: u64) -> Povm {
    assert!(n_outcomes >= 1);
    let grams: Vec<ComplexMatrix> = (0..n_outcomes)
        .map(|i| {
            let g = random_ginibre(dim, seed.wrapping_add(i as u64).wrapping_mul(0x9e37_79b9));
            g.matmul(&g.adjoint()).expect("same dim")
        })
        .collect();
    let mut total = ComplexMatrix::zeros(dim);
    for g in &grams {
        total = total.add(g).expect("same dim");
    }
    let inv_sqrt = total.hermitian_map(|x| 1.0 / x.sqrt());
    let outcomes = grams
        .into_iter()
        .enumerate()
        .map(|(i, g)| {
            let effect = inv_sqrt
                .matmul(&g)
                .expect("same dim")
                .matmul(&inv_sqrt)
                .expect("same dim");
            (i.to_string(), effect)
        })
        .collect();
    Povm::new(dim, outcomes, 1e-9).expect("normalized Gram family is a POVM")
}

/// Seeded random projection-valued measure: the columns of a random unitary,
/// partitioned into n_groups nonempty groups of rank-1 projectors.
pub fn random_pvm(dim: usize, n_groups: usize, seed: u64) -> Povm {
    assert!((1..=dim).contains(&n_groups));
    let u = UnitaryOperator::random(dim, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    // first n_groups columns pin one per group, the rest land anywhere
    let mut assignment: Vec<usize> = (0..n_groups).collect();
    for _ in n_groups..dim {
        assignment.push(rng.random_range(0..n_groups));
    }
    let mut effects = vec![ComplexMatrix::zeros(dim); n_groups];
    for (col, &group) in assignment.iter().enumerate() {
        let v: Vec<Complex64> = (0..dim).map(|i| u.matrix().get(i, col)).collect();
        let mut proj = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                proj.set(i, j, v[i] * v[j].conj());
            }
        }
        effects[group] = effects[group].add(&proj).expect("same dim");
    }
    let outcomes = effects
        .into_iter()
        .enumerate()
        .map(|(i, e)| (i.to_string(), e))
        .collect();
    Povm::new(dim, outcomes, 1e-10).expect("grouped projectors form a PVM")
}

/// Default iteration cap for [`projective_counterexample_search`].
pub const DEFAULT_SEARCH_ITERATIONS: usize = 10_000;

/// Outcome of a bounded randomized hunt for joints that satisfy NOEFFECT but
/// violate PRODMARG against projection-valued references.
#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleSearch {
    pub iterations: usize,
    pub valid_candidates: usize,
    pub noeffect_hits: usize,
    pub counterexamples: usize,
    pub first_counterexample: Option<String>,
}

/// Randomized counterexample search for `projective marginals + NOEFFECT ⇒
/// PRODMARG`. Candidates are JMF-built joints over random PVMs, perturbed by
/// zero-marginal-sum Hermitian patterns; perturbations that break POVM
/// validity or NOEFFECT are discarded. Expected zero counterexamples.
pub fn projective_counterexample_search(
    dim_s: usize,
    dim_p: usize,
    iterations: usize,
    seed: u64,
    tol: f64,
) -> CounterexampleSearch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CounterexampleSearch {
        iterations,
        valid_candidates: 0,
        noeffect_hits: 0,
        counterexamples: 0,
        first_counterexample: None,
    };
    for iter in 0..iterations {
        let groups_s = rng.random_range(1..=dim_s.min(3));
        let groups_p = rng.random_range(1..=dim_p.min(3));
        let pvm_s = random_pvm(dim_s, groups_s, rng.random());
        let pvm_p = random_pvm(dim_p, groups_p, rng.random());
        let u_s = UnitaryOperator::random(dim_s, rng.random());
        let u_p = UnitaryOperator::random(dim_p, rng.random());
        let base = JointPovm::from_jmf(&pvm_s, &pvm_p, &u_s, &u_p)
            .expect("dims match by construction");

        // every 10th candidate stays unperturbed so the premise is hit for sure
        let amplitude = if iter % 10 == 0 {
            0.0
        } else {
            10f64.powf(rng.random_range(-12.0..-1.0))
        };
        let effects = perturb_zero_marginal(&base, amplitude, &mut rng);
        let candidate = match JointPovm::new(
            base.dims(),
            base.s_labels().to_vec(),
            base.p_labels().to_vec(),
            effects,
            tol,
        ) {
            Ok(j) => j,
            Err(_) => continue,
        };
        report.valid_candidates += 1;
        let noeffect = check_noeffect(&candidate, &pvm_s, &pvm_p, &u_s, &u_p, tol)
            .expect("labels match by construction");
        if !noeffect.pass {
            continue;
        }
        report.noeffect_hits += 1;
        let prodmarg = check_prodmarg(&candidate, tol);
        if !prodmarg.pass {
            report.counterexamples += 1;
            if report.first_counterexample.is_none() {
                report.first_counterexample = prodmarg.witness;
            }
        }
    }
    report
}

/// Add c_{s,p}·X to each joint effect, where the coefficient grid c has zero
/// row and column sums, so both NOEFFECT marginal families are untouched.
fn perturb_zero_marginal(
    base: &JointPovm,
    amplitude: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<ComplexMatrix> {
    let ns = base.s_labels().len();
    let np = base.p_labels().len();
    let total = base.dims().total();
    let x = {
        let g = random_ginibre(total, rng.random());
        let h = g.add(&g.adjoint()).expect("same dim").scale(0.5.into());
        let scale = h.max_abs().max(1e-300);
        h.scale((amplitude / scale).into())
    };
    // c = u ⊗ v with Σu = Σv = 0 keeps all marginal sums exactly zero
    let centered = |n: usize, rng: &mut ChaCha8Rng| -> Vec<f64> {
        if n == 1 {
            return vec![0.0];
        }
        let raw: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mean = raw.iter().sum::<f64>() / n as f64;
        raw.into_iter().map(|v| v - mean).collect()
    };
    let u = centered(ns, rng);
    let v = centered(np, rng);
    let mut effects = Vec::with_capacity(ns * np);
    for si in 0..ns {
        for pi in 0..np {
            let d = x.scale((u[si] * v[pi]).into());
            effects.push(base.effect(si, pi).add(&d).expect("same dim"));
        }
    }
    effects
}
