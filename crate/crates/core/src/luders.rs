//! The von Neumann-Lüders measurement model: a probe P coupled to the
//! system S by a premeasurement unitary
//!
//! ```text
//! U(|s_ij⟩ ⊗ |p_0⟩) = |s_ij⟩ ⊗ |p_i⟩
//! ```
//!
//! where i indexes eigenvalue groups of the measured observable and j runs
//! over a group's orthonormal eigenvectors. Measuring the probe afterwards
//! is a proxy for measuring the system, and the projection-postulate state
//! falls out of the state reduction formula.

use num_complex::Complex64;

use crate::error::{QmError, Result};
use crate::linops::{ComplexMatrix, ProductDims};
use crate::measurement::srf;
use crate::observables::CheckOutcome;
use crate::states::{DensityOperator, StateVector, UnitaryOperator};

/// A premeasurement model: grouped system eigenbasis, probe pointer basis,
/// initial probe state, and the entangling unitary.
#[derive(Debug, Clone)]
pub struct LudersModel {
    dim_s: usize,
    dim_p: usize,
    groups: Vec<Vec<StateVector>>,
    /// p_vectors[i] is the pointer state of group i; entries beyond the
    /// group count are extra orthonormal directions (the initial state may
    /// be one of them).
    p_vectors: Vec<StateVector>,
    p0_index: usize,
    unitary: UnitaryOperator,
    tol: f64,
}

impl LudersModel {
    /// Build the model and complete the premeasurement unitary.
    ///
    /// The defining relation fixes U on the subspace H_S ⊗ |p_0⟩; the
    /// remaining columns come from orthonormalizing standard basis vectors
    /// against the fixed ones, deterministically.
    pub fn build(
        s_eigenbasis: Vec<Vec<StateVector>>,
        p_basis: Vec<StateVector>,
        p0_index: usize,
        tol: f64,
    ) -> Result<Self> {
        assert!(!s_eigenbasis.is_empty(), "need at least one eigenvalue group");
        assert!(!p_basis.is_empty(), "need at least one probe vector");
        let dim_s = s_eigenbasis[0]
            .first()
            .map(|v| v.dim())
            .expect("groups must be nonempty");
        let dim_p = p_basis[0].dim();
        let n_groups = s_eigenbasis.len();

        if n_groups > dim_p {
            return Err(QmError::TooManyEigenvalueGroups {
                groups: n_groups,
                dim_p,
            });
        }
        if p_basis.len() < n_groups {
            return Err(QmError::DimensionMismatch {
                context: "pointer vectors vs eigenvalue groups",
                got: p_basis.len(),
                expected: n_groups,
            });
        }
        if p0_index >= p_basis.len() {
            return Err(QmError::DimensionMismatch {
                context: "initial probe index",
                got: p0_index,
                expected: p_basis.len(),
            });
        }

        let s_flat: Vec<&StateVector> = s_eigenbasis.iter().flatten().collect();
        if s_flat.len() != dim_s {
            return Err(QmError::NotOrthonormal {
                context: format!(
                    "system eigenbasis must span: {} vectors for dimension {dim_s}",
                    s_flat.len()
                ),
                deviation: f64::NAN,
            });
        }
        check_orthonormal(&s_flat, "system eigenbasis", tol)?;
        let p_refs: Vec<&StateVector> = p_basis.iter().collect();
        check_orthonormal(&p_refs, "probe basis", tol)?;

        let total = dim_s * dim_p;
        let p0 = &p_basis[p0_index];
        let mut fixed_in: Vec<Vec<Complex64>> = Vec::with_capacity(dim_s);
        let mut fixed_out: Vec<Vec<Complex64>> = Vec::with_capacity(dim_s);
        for (i, group) in s_eigenbasis.iter().enumerate() {
            for v in group {
                if v.dim() != dim_s {
                    return Err(QmError::DimensionMismatch {
                        context: "system eigenvector dimension",
                        got: v.dim(),
                        expected: dim_s,
                    });
                }
                fixed_in.push(v.tensor(p0).amplitudes().to_vec());
                fixed_out.push(v.tensor(&p_basis[i]).amplitudes().to_vec());
            }
        }
        let in_basis = complete_basis(fixed_in, total);
        let out_basis = complete_basis(fixed_out, total);

        // U = Σ_k |out_k⟩⟨in_k|
        let mut u = ComplexMatrix::zeros(total);
        for (col_in, col_out) in in_basis.iter().zip(&out_basis) {
            for r in 0..total {
                for c in 0..total {
                    let incr = col_out[r] * col_in[c].conj();
                    let cur = u.get(r, c);
                    u.set(r, c, cur + incr);
                }
            }
        }
        let unitary = UnitaryOperator::from_matrix(u, 1e-12)?;

        Ok(Self {
            dim_s,
            dim_p,
            groups: s_eigenbasis,
            p_vectors: p_basis,
            p0_index,
            unitary,
            tol,
        })
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    pub fn dim_p(&self) -> usize {
        self.dim_p
    }

    pub fn dims(&self) -> ProductDims {
        ProductDims::new(self.dim_s, self.dim_p)
    }

    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn group(&self, k: usize) -> &[StateVector] {
        &self.groups[k]
    }

    pub fn unitary(&self) -> &UnitaryOperator {
        &self.unitary
    }

    pub fn initial_probe(&self) -> &StateVector {
        &self.p_vectors[self.p0_index]
    }

    pub fn pointer(&self, k: usize) -> &StateVector {
        &self.p_vectors[k]
    }

    /// Eigenprojector E_{s_k} = Σ_j |s_kj⟩⟨s_kj| of group k.
    pub fn s_projector(&self, k: usize) -> ComplexMatrix {
        let mut sum = ComplexMatrix::zeros(self.dim_s);
        for v in &self.groups[k] {
            sum = sum.add(&v.projector()).expect("same dim");
        }
        sum
    }

    /// Probe effect E_{p_k} = |p_k⟩⟨p_k| of group k.
    pub fn p_effect(&self, k: usize) -> ComplexMatrix {
        self.p_vectors[k].projector()
    }

    /// τ = U(σ₀ ⊗ π₀)U†, the joint state after the interaction.
    pub fn premeasure(
        &self,
        sigma0: &DensityOperator,
        pi0: &DensityOperator,
    ) -> Result<DensityOperator> {
        if sigma0.dim() != self.dim_s {
            return Err(QmError::DimensionMismatch {
                context: "system state vs model",
                got: sigma0.dim(),
                expected: self.dim_s,
            });
        }
        if pi0.dim() != self.dim_p {
            return Err(QmError::DimensionMismatch {
                context: "probe state vs model",
                got: pi0.dim(),
                expected: self.dim_p,
            });
        }
        let product =
            DensityOperator::from_matrix(sigma0.matrix().kron(pi0.matrix()), sigma0.tol())?;
        product.evolve(&self.unitary)
    }

    /// |t⟩ = U(|s_0⟩ ⊗ |p_0⟩), the entangled vector after premeasurement.
    pub fn entangled_vector(&self, s0: &StateVector) -> Result<StateVector> {
        if s0.dim() != self.dim_s {
            return Err(QmError::DimensionMismatch {
                context: "system vector vs model",
                got: s0.dim(),
                expected: self.dim_s,
            });
        }
        let joined = s0.tensor(self.initial_probe());
        let rotated = self.unitary.matrix().matvec(joined.amplitudes())?;
        StateVector::new(rotated, self.tol)
    }

    /// Proxy property: for every group k, the probe statistics on |t⟩, the
    /// system statistics on |s_0⟩, and the amplitude sum Σ_j|a_kj|² agree.
    pub fn proxy_check(&self, s0: &StateVector, tol: f64) -> Result<CheckOutcome> {
        let t = self.entangled_vector(s0)?;
        let i_s = ComplexMatrix::identity(self.dim_s);
        let mut max_deviation: f64 = 0.0;
        let mut witness = None;
        let mut total = 0.0;
        for k in 0..self.n_groups() {
            // Pr(p_k) via the probe PVM on |t⟩
            let probe_effect = i_s.kron(&self.p_effect(k));
            let pr_p = expectation(&probe_effect, &t);
            // Pr(s_k) via the eigenprojector on |s_0⟩
            let pr_s = expectation(&self.s_projector(k), s0);
            // Σ_j |⟨s_kj|s_0⟩|²
            let amp: f64 = self.groups[k]
                .iter()
                .map(|v| v.inner(s0).norm_sqr())
                .sum();
            total += amp;
            let dev = (pr_p - amp)
                .abs()
                .max((pr_s - amp).abs())
                .max((pr_p - pr_s).abs());
            if dev > max_deviation {
                max_deviation = dev;
            }
            if dev > tol && witness.is_none() {
                witness = Some(format!("group {k}"));
            }
        }
        // completeness of the grouping
        let completeness = (total - 1.0).abs();
        if completeness > max_deviation {
            max_deviation = completeness;
        }
        if completeness > tol && witness.is_none() {
            witness = Some("sum of group probabilities".to_string());
        }
        Ok(match witness {
            Some(w) => CheckOutcome::failed(max_deviation, w),
            None => CheckOutcome::passed(max_deviation),
        })
    }

    /// The projection-postulate state U_S·E_{s_k}|s_0⟩ / ‖E_{s_k}|s_0⟩‖.
    /// Errors when |s_0⟩ has no component in group k.
    pub fn projection_postulate_state(
        &self,
        s0: &StateVector,
        k: usize,
        u_s: &UnitaryOperator,
    ) -> Result<StateVector> {
        if s0.dim() != self.dim_s {
            return Err(QmError::DimensionMismatch {
                context: "system vector vs model",
                got: s0.dim(),
                expected: self.dim_s,
            });
        }
        if u_s.dim() != self.dim_s {
            return Err(QmError::DimensionMismatch {
                context: "U_S vs model",
                got: u_s.dim(),
                expected: self.dim_s,
            });
        }
        let projected = self.s_projector(k).matvec(s0.amplitudes())?;
        let norm_sq: f64 = projected.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= self.tol {
            return Err(QmError::ZeroProbabilityCondition {
                probability: norm_sq,
                tol: self.tol,
            });
        }
        let rotated = u_s.matrix().matvec(&projected)?;
        StateVector::normalize(rotated, self.tol)
    }

    /// The same reduced state reached through the SRF on the premeasured
    /// joint state, conditioning on the pointer outcome p_k.
    pub fn srf_reduced_state(
        &self,
        s0: &StateVector,
        k: usize,
        u_s: &UnitaryOperator,
    ) -> Result<DensityOperator> {
        let pi0 = DensityOperator::pure(self.initial_probe())?;
        let sigma0 = DensityOperator::pure(s0)?;
        let tau = self.premeasure(&sigma0, &pi0)?;
        srf(&tau, &self.p_effect(k), u_s, self.dims())
    }
}

fn expectation(effect: &ComplexMatrix, v: &StateVector) -> f64 {
    let applied = effect.matvec(v.amplitudes()).expect("dims agree");
    v.amplitudes()
        .iter()
        .zip(&applied)
        .map(|(a, b)| (a.conj() * b).re)
        .sum()
}

fn check_orthonormal(vectors: &[&StateVector], context: &str, tol: f64) -> Result<()> {
    let mut deviation: f64 = 0.0;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((a.inner(b) - Complex64::from(expected)).norm());
        }
    }
    if deviation > tol {
        return Err(QmError::NotOrthonormal {
            context: context.to_string(),
            deviation,
        });
    }
    Ok(())
}

/// Extend a set of orthonormal columns to a full orthonormal basis by
/// Gram-Schmidt over the standard basis. Deterministic: standard basis
/// vectors are scanned in index order and kept when their residual is
/// substantial.
fn complete_basis(mut columns: Vec<Vec<Complex64>>, total: usize) -> Vec<Vec<Complex64>> {
    // re-orthogonalize the supplied columns so tol-level input skew cannot
    // accumulate into the completed unitary
    orthonormalize(&mut columns);
    let mut k = 0usize;
    while columns.len() < total && k < total {
        let mut candidate = vec![Complex64::ZERO; total];
        candidate[k] = Complex64::ONE;
        for _ in 0..2 {
            for col in &columns {
                let proj: Complex64 = col
                    .iter()
                    .zip(&candidate)
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for (c, a) in candidate.iter_mut().zip(col) {
                    *c -= proj * a;
                }
            }
        }
        let norm: f64 = candidate.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for z in &mut candidate {
                *z /= norm;
            }
            columns.push(candidate);
        }
        k += 1;
    }
    assert_eq!(columns.len(), total, "basis completion exhausted candidates");
    columns
}

fn orthonormalize(columns: &mut [Vec<Complex64>]) {
    for _ in 0..2 {
        for j in 0..columns.len() {
            for i in 0..j {
                let proj: Complex64 = columns[i]
                    .iter()
                    .zip(&columns[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for idx in 0..columns[j].len() {
                    let correction = proj * columns[i][idx];
                    columns[j][idx] -= correction;
                }
            }
            let norm: f64 = columns[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for z in &mut columns[j] {
                *z /= norm;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linops::DEFAULT_TOL;
    use crate::states::UnitaryOperator;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn qubit_z_model() -> LudersModel {
        LudersModel::build(
            vec![vec![StateVector::basis(2, 0)], vec![StateVector::basis(2, 1)]],
            vec![StateVector::basis(2, 0), StateVector::basis(2, 1)],
            0,
            DEFAULT_TOL,
        )
        .unwrap()
    }

    /// 3-level system with a degenerate group {s_00, s_01} and a simple
    /// group {s_10}, 3-level probe.
    fn degenerate_model() -> LudersModel {
        LudersModel::build(
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
            DEFAULT_TOL,
        )
        .unwrap()
    }

    #[test]
    fn qubit_model_is_cnot() {
        let model = qubit_z_model();
        // column-by-column check of the defining relation
        let u = model.unitary().matrix();
        let expected = ComplexMatrix::from_real_rows(&[
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        assert!(u.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn defining_relation_holds() {
        let model = degenerate_model();
        let u = model.unitary().matrix();
        for (i, group) in (0..model.n_groups()).map(|i| (i, model.group(i).to_vec())) {
            for v in group {
                let input = v.tensor(model.initial_probe());
                let expected = v.tensor(model.pointer(i));
                let got = u.matvec(input.amplitudes()).unwrap();
                let dev: f64 = got
                    .iter()
                    .zip(expected.amplitudes())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max)
;
                assert!(dev < 1e-12, "group {i}: deviation {dev}");
            }
        }
    }

    #[test]
    fn single_group_relabels_the_probe() {
        // one eigenvalue group spanning all of H_S; pointer differs from
        // the initial state, so |s⟩|p_0⟩ ↦ |s⟩|p_1⟩ for every s
        let model = LudersModel::build(
            vec![vec![StateVector::basis(2, 0), StateVector::basis(2, 1)]],
            vec![StateVector::basis(2, 1), StateVector::basis(2, 0)],
            1,
            DEFAULT_TOL,
        )
        .unwrap();
        let u = model.unitary().matrix();
        for s in 0..2 {
            let input = StateVector::basis(2, s).tensor(&StateVector::basis(2, 0));
            let expected = StateVector::basis(2, s).tensor(&StateVector::basis(2, 1));
            let got = u.matvec(input.amplitudes()).unwrap();
            for (a, b) in got.iter().zip(expected.amplitudes()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn too_many_groups_rejected() {
        let err = LudersModel::build(
            vec![
                vec![StateVector::basis(3, 0)],
                vec![StateVector::basis(3, 1)],
                vec![StateVector::basis(3, 2)],
            ],
            vec![StateVector::basis(2, 0), StateVector::basis(2, 1)],
            0,
            DEFAULT_TOL,
        )
        .unwrap_err();
        assert!(matches!(err, QmError::TooManyEigenvalueGroups { .. }));
    }

    #[test]
    fn non_orthonormal_basis_rejected() {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        let skewed = StateVector::new(vec![c(a, 0.0), c(a, 0.0)], 1e-12).unwrap();
        let err = LudersModel::build(
            vec![vec![StateVector::basis(2, 0)], vec![skewed]],
            vec![StateVector::basis(2, 0), StateVector::basis(2, 1)],
            0,
            DEFAULT_TOL,
        )
        .unwrap_err();
        assert!(matches!(err, QmError::NotOrthonormal { .. }));
    }

    #[test]
    fn premeasure_of_eigenstate_stays_product() {
        let model = qubit_z_model();
        let sigma0 = DensityOperator::pure(&StateVector::basis(2, 1)).unwrap();
        let pi0 = DensityOperator::pure(model.initial_probe()).unwrap();
        let tau = model.premeasure(&sigma0, &pi0).unwrap();
        let expected = StateVector::basis(2, 1)
            .tensor(&StateVector::basis(2, 1))
            .projector();
        assert!(tau.matrix().max_abs_diff(&expected) < 1e-13);
    }

    #[test]
    fn premeasure_of_superposition_entangles() {
        // U(|s_0⟩|p_0⟩) = Σ a_ij |s_ij⟩|p_i⟩ ≡ |t⟩
        let model = qubit_z_model();
        let a = std::f64::consts::FRAC_1_SQRT_2;
        let s0 = StateVector::new(vec![c(a, 0.0), c(a, 0.0)], 1e-12).unwrap();
        let sigma0 = DensityOperator::pure(&s0).unwrap();
        let pi0 = DensityOperator::pure(model.initial_probe()).unwrap();
        let tau = model.premeasure(&sigma0, &pi0).unwrap();
        // |t⟩ = (|00⟩ + |11⟩)/√2
        let t = StateVector::new(
            vec![c(a, 0.0), Complex64::ZERO, Complex64::ZERO, c(a, 0.0)],
            1e-12,
        )
        .unwrap();
        assert!(tau.matrix().max_abs_diff(&t.projector()) < 1e-13);
        let via_vector = model.entangled_vector(&s0).unwrap().projector();
        assert!(tau.matrix().max_abs_diff(&via_vector) < 1e-13);
    }

    #[test]
    fn premeasurement_is_reversible() {
        let model = degenerate_model();
        let sigma0 = DensityOperator::random(3, 81);
        let pi0 = DensityOperator::random(3, 82);
        let tau = model.premeasure(&sigma0, &pi0).unwrap();
        let undone = tau.evolve(&model.unitary().adjoint()).unwrap();
        let product = sigma0.matrix().kron(pi0.matrix());
        assert!(undone.matrix().max_abs_diff(&product) < 1e-12);
    }

    #[test]
    fn proxy_check_on_eigenvector() {
        let model = qubit_z_model();
        let outcome = model.proxy_check(&StateVector::basis(2, 1), 1e-12).unwrap();
        assert!(outcome.pass);
        // the eigenvector's group is certain
        let t = model.entangled_vector(&StateVector::basis(2, 1)).unwrap();
        let pr = expectation(
            &ComplexMatrix::identity(2).kron(&model.p_effect(1)),
            &t,
        );
        assert!((pr - 1.0).abs() < 1e-13);
    }

    #[test]
    fn proxy_check_on_equal_superposition() {
        let model = qubit_z_model();
        let a = std::f64::consts::FRAC_1_SQRT_2;
        let s0 = StateVector::new(vec![c(a, 0.0), c(0.0, a)], 1e-12).unwrap();
        let outcome = model.proxy_check(&s0, 1e-12).unwrap();
        assert!(outcome.pass);
        let t = model.entangled_vector(&s0).unwrap();
        for k in 0..2 {
            let pr = expectation(&ComplexMatrix::identity(2).kron(&model.p_effect(k)), &t);
            assert!((pr - 0.5).abs() < 1e-13);
        }
    }

    #[test]
    fn proxy_check_on_random_degenerate_model() {
        let model = degenerate_model();
        for seed in 0..10u64 {
            let g = crate::states::random_ginibre(3, 90 + seed);
            let raw: Vec<Complex64> = (0..3).map(|i| g.get(i, 0)).collect();
            let s0 = StateVector::normalize(raw, 1e-12).unwrap();
            let outcome = model.proxy_check(&s0, 1e-12).unwrap();
            assert!(outcome.pass, "seed {seed}: {}", outcome.max_deviation);
        }
    }

    #[test]
    fn postulate_state_projects_and_renormalizes() {
        let model = qubit_z_model();
        let a = std::f64::consts::FRAC_1_SQRT_2;
        let s0 = StateVector::new(vec![c(a, 0.0), c(a, 0.0)], 1e-12).unwrap();
        let got = model
            .projection_postulate_state(&s0, 0, &UnitaryOperator::identity(2))
            .unwrap();
        assert!(got.projector().max_abs_diff(&StateVector::basis(2, 0).projector()) < 1e-13);
    }

    #[test]
    fn postulate_state_is_identity_on_own_group() {
        let model = degenerate_model();
        let s0 = StateVector::basis(3, 2);
        let u_s = UnitaryOperator::random(3, 83);
        let got = model.projection_postulate_state(&s0, 1, &u_s).unwrap();
        let expected = u_s.matrix().matvec(s0.amplitudes()).unwrap();
        for (a, b) in got.amplitudes().iter().zip(&expected) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn postulate_state_matches_srf_route_in_degenerate_group() {
        // a|s_00⟩ + b|s_01⟩ + c|s_10⟩ conditioned on group 0 keeps the
        // in-group amplitudes, renormalized
        let model = degenerate_model();
        let s0 =
            StateVector::normalize(vec![c(0.4, 0.2), c(-0.5, 0.1), c(0.3, 0.66)], 1e-12).unwrap();
        let u_s = UnitaryOperator::random(3, 84);
        let postulate = model.projection_postulate_state(&s0, 0, &u_s).unwrap();
        let via_srf = model.srf_reduced_state(&s0, 0, &u_s).unwrap();
        assert!(postulate.projector().max_abs_diff(via_srf.matrix()) < 1e-10);
    }

    #[test]
    fn postulate_rejects_vanishing_component() {
        let model = qubit_z_model();
        let s0 = StateVector::basis(2, 0);
        let err = model
            .projection_postulate_state(&s0, 1, &UnitaryOperator::identity(2))
            .unwrap_err();
        assert!(matches!(err, QmError::ZeroProbabilityCondition { .. }));
    }

    #[test]
    fn conditioned_partial_trace_identity() {
        // Tr_P[(I⊗E_{p_k})|t⟩⟨t|] = E_{s_k}|s_0⟩⟨s_0|E_{s_k}
        let model = degenerate_model();
        for seed in 0..10u64 {
            let g = crate::states::random_ginibre(3, 120 + seed);
            let raw: Vec<Complex64> = (0..3).map(|i| g.get(i, 1)).collect();
            let s0 = StateVector::normalize(raw, 1e-12).unwrap();
            let t = model.entangled_vector(&s0).unwrap();
            for k in 0..model.n_groups() {
                let lhs = ComplexMatrix::identity(3)
                    .kron(&model.p_effect(k))
                    .matmul(&t.projector())
                    .unwrap()
                    .partial_trace_p(model.dims())
                    .unwrap();
                let projected = model.s_projector(k).matvec(s0.amplitudes()).unwrap();
                let mut rhs = ComplexMatrix::zeros(3);
                for i in 0..3 {
                    for j in 0..3 {
                        rhs.set(i, j, projected[i] * projected[j].conj());
                    }
                }
                assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            }
        }
    }
}
