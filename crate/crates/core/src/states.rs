//! Density operators, pure states, reduced states, and unitary evolution.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{QmError, Result};
use crate::linops::{ComplexMatrix, ProductDims, DEFAULT_TOL};

/// Normalized state vector |v⟩.
///
/// Global phase is not canonicalized; compare pure states through their
/// projectors instead.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wrap amplitudes, requiring unit Euclidean norm within tol.
    pub fn new(amplitudes: Vec<Complex64>, tol: f64) -> Result<Self> {
        assert!(!amplitudes.is_empty(), "state vector must have dim >= 1");
        let norm = norm(&amplitudes);
        let deviation = (norm - 1.0).abs();
        if deviation > tol {
            return Err(QmError::NotNormalized { deviation, tol });
        }
        Ok(Self { amplitudes })
    }

    /// Normalize arbitrary amplitudes. Errors when the norm is ≤ tol.
    pub fn normalize(amplitudes: Vec<Complex64>, tol: f64) -> Result<Self> {
        let n = norm(&amplitudes);
        if n <= tol {
            return Err(QmError::ZeroProbabilityCondition {
                probability: n * n,
                tol,
            });
        }
        let scaled = amplitudes.iter().map(|z| z / n).collect();
        Ok(Self { amplitudes: scaled })
    }

    /// Computational basis vector |k⟩ in dimension dim.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim);
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[k] = Complex64::ONE;
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Tensor product |self⟩ ⊗ |other⟩ with the S-left convention.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Self { amplitudes }
    }

    /// Rank-1 projector |v⟩⟨v|.
    pub fn projector(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut m = vec![Complex64::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        ComplexMatrix::new(n, m).expect("projector of finite amplitudes is finite")
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian, positive-semidefinite, unit-trace operator.
///
/// The validation tolerance is stored on the value so downstream checks
/// reuse the same tolerance regime.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    tol: f64,
}

impl DensityOperator {
    /// Validate a candidate matrix as a density operator.
    pub fn from_matrix(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let dev = matrix.hermitian_deviation();
        if dev > tol {
            return Err(QmError::NotHermitian {
                deviation: dev,
                tol,
            });
        }
        let eigs = matrix.hermitian_eigenvalues();
        let min = eigs.first().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(QmError::NotPsd {
                min_eigenvalue: min,
                tol,
            });
        }
        let trace_dev = (matrix.trace() - Complex64::ONE).norm();
        if trace_dev > tol {
            return Err(QmError::TraceNotOne {
                deviation: trace_dev,
                tol,
            });
        }
        Ok(Self { matrix, tol })
    }

    /// Validate with the default tolerance.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::from_matrix(matrix, DEFAULT_TOL)
    }

    /// Rank-1 state |v⟩⟨v|.
    pub fn pure(v: &StateVector) -> Result<Self> {
        let deviation = (norm(v.amplitudes()) - 1.0).abs();
        if deviation > DEFAULT_TOL {
            return Err(QmError::NotNormalized {
                deviation,
                tol: DEFAULT_TOL,
            });
        }
        Self::from_matrix(v.projector(), DEFAULT_TOL)
    }

    /// Maximally mixed state I/dim.
    pub fn maximally_mixed(dim: usize) -> Self {
        let m = ComplexMatrix::identity(dim).scale((1.0 / dim as f64).into());
        Self::from_matrix(m, DEFAULT_TOL).expect("I/d is a valid state")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Reduced state of S: Tr_P(τ).
    pub fn reduced_state_s(&self, dims: ProductDims) -> Result<Self> {
        let reduced = self.matrix.partial_trace_p(dims)?;
        Self::from_matrix(reduced, self.tol)
    }

    /// Reduced state of P: Tr_S(τ).
    pub fn reduced_state_p(&self, dims: ProductDims) -> Result<Self> {
        let reduced = self.matrix.partial_trace_s(dims)?;
        Self::from_matrix(reduced, self.tol)
    }

    /// Unitary evolution ρ → UρU†.
    pub fn evolve(&self, u: &UnitaryOperator) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(QmError::DimensionMismatch {
                context: "unitary evolution",
                got: u.dim(),
                expected: self.dim(),
            });
        }
        let m = u
            .matrix()
            .matmul(&self.matrix)?
            .matmul(&u.matrix().adjoint())?;
        Self::from_matrix(m, self.tol)
    }

    /// Seeded full-rank random state: G·G† / Tr(G·G†), G complex Ginibre.
    pub fn random(dim: usize, seed: u64) -> Self {
        let g = random_ginibre(dim, seed);
        let gram = g.matmul(&g.adjoint()).expect("same dim");
        let t = gram.trace();
        let m = gram.scale(1.0 / t);
        Self::from_matrix(m, DEFAULT_TOL).expect("normalized Gram matrix is a valid state")
    }
}

/// Operator with U·U† = I within tol.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    matrix: ComplexMatrix,
}

impl UnitaryOperator {
    pub fn from_matrix(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let prod = matrix.matmul(&matrix.adjoint())?;
        let deviation = prod.max_abs_diff(&ComplexMatrix::identity(matrix.dim()));
        if deviation > tol {
            return Err(QmError::NotUnitary { deviation, tol });
        }
        Ok(Self { matrix })
    }

    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::from_matrix(matrix, DEFAULT_TOL)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// Conjugation U† E U, the Heisenberg-picture effect.
    pub fn conjugate_effect(&self, effect: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.matrix
            .adjoint()
            .matmul(effect)?
            .matmul(&self.matrix)
    }

    /// Seeded Haar-ish random unitary via Gram-Schmidt on a Ginibre matrix.
    pub fn random(dim: usize, seed: u64) -> Self {
        let g = random_ginibre(dim, seed);
        // columns of g, orthonormalized
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|j| (0..dim).map(|i| g.get(i, j)).collect())
            .collect();
        // two passes of modified Gram-Schmidt keep the residual far below 1e-12
        for _pass in 0..2 {
            for j in 0..dim {
                for k in 0..j {
                    let proj: Complex64 = cols[k]
                        .iter()
                        .zip(&cols[j])
                        .map(|(a, b)| a.conj() * b)
                        .sum();
                    for i in 0..dim {
                        let correction = proj * cols[k][i];
                        cols[j][i] -= correction;
                    }
                }
                let n = norm(&cols[j]);
                for z in &mut cols[j] {
                    *z /= n;
                }
            }
        }
        let mut m = ComplexMatrix::zeros(dim);
        for (j, col) in cols.iter().enumerate() {
            for (i, &z) in col.iter().enumerate() {
                m.set(i, j, z);
            }
        }
        Self::from_matrix(m, 1e-12).expect("Gram-Schmidt output is unitary")
    }
}

/// Seeded matrix with independent standard complex normal entries.
pub fn random_ginibre(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<Complex64> = (0..dim * dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    ComplexMatrix::new(dim, data).expect("normal samples are finite")
}

/// The two-qubit singlet amplitudes (|01⟩ - |10⟩)/√2.
pub fn singlet_vector() -> StateVector {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::new(
        vec![
            Complex64::ZERO,
            Complex64::new(a, 0.0),
            Complex64::new(-a, 0.0),
            Complex64::ZERO,
        ],
        1e-15,
    )
    .expect("singlet is normalized")
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    /// Unnormalized seeded random matrix for oracle tests.
    pub fn random_matrix(dim: usize, seed: u64) -> ComplexMatrix {
        random_ginibre(dim, seed)
    }

    pub fn singlet_vector() -> Vec<Complex64> {
        super::singlet_vector().amplitudes().to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn maximally_mixed_qubit_is_valid() {
        let m = ComplexMatrix::identity(2).scale(0.5.into());
        assert!(DensityOperator::from_matrix(m, 1e-10).is_ok());
    }

    #[test]
    fn trace_violation_is_named() {
        let m = ComplexMatrix::diagonal(&[c(0.7, 0.0), c(0.4, 0.0)]);
        let err = DensityOperator::from_matrix(m, 1e-10).unwrap_err();
        assert!(matches!(err, QmError::TraceNotOne { .. }));
    }

    #[test]
    fn negative_eigenvalue_is_named() {
        let m = ComplexMatrix::diagonal(&[c(1.2, 0.0), c(-0.2, 0.0)]);
        let err = DensityOperator::from_matrix(m, 1e-10).unwrap_err();
        assert!(matches!(err, QmError::NotPsd { .. }));
    }

    #[test]
    fn pure_state_examples() {
        let up = StateVector::basis(2, 0);
        let rho = DensityOperator::pure(&up).unwrap();
        assert!(rho
            .matrix()
            .max_abs_diff(&ComplexMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 0.0)]))
            < 1e-15);

        // (1,1)/√2 → all entries 1/2, by outer product done by hand
        let a = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::new(vec![c(a, 0.0), c(a, 0.0)], 1e-12).unwrap();
        let rho = DensityOperator::pure(&plus).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-15);

        let singlet = DensityOperator::pure(&singlet_vector()).unwrap();
        assert_eq!(singlet.dim(), 4);
        assert!((singlet.matrix().trace() - Complex64::ONE).norm() < 1e-14);
    }

    #[test]
    fn pure_state_is_idempotent() {
        let v = {
            let g = random_ginibre(3, 40);
            let raw: Vec<Complex64> = (0..3).map(|i| g.get(i, 0)).collect();
            StateVector::normalize(raw, 1e-12).unwrap()
        };
        let p = v.projector();
        assert!(p.matmul(&p).unwrap().max_abs_diff(&p) < 1e-12);
    }

    #[test]
    fn unnormalized_vector_rejected() {
        let err = StateVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)], 1e-10).unwrap_err();
        assert!(matches!(err, QmError::NotNormalized { .. }));
    }

    #[test]
    fn reduced_state_of_product_is_left_factor() {
        let sigma = DensityOperator::random(2, 1);
        let pi = DensityOperator::random(3, 2);
        let tau_m = sigma.matrix().kron(pi.matrix());
        let tau = DensityOperator::from_matrix(tau_m, 1e-10).unwrap();
        let got = tau.reduced_state_s(ProductDims::new(2, 3)).unwrap();
        assert!(got.matrix().max_abs_diff(sigma.matrix()) < 1e-12);
    }

    #[test]
    fn reduced_state_of_singlet_is_maximally_mixed() {
        let singlet = DensityOperator::pure(&singlet_vector()).unwrap();
        let got = singlet.reduced_state_s(ProductDims::new(2, 2)).unwrap();
        assert!(
            got.matrix()
                .max_abs_diff(&ComplexMatrix::identity(2).scale(0.5.into()))
                < 1e-15
        );
    }

    #[test]
    fn reduced_state_of_schmidt_pair_is_diagonal() {
        // a|00⟩ + b|11⟩ reduces to diag(|a|², |b|²)
        let (a, b) = (0.6, 0.8);
        let v = StateVector::new(
            vec![c(a, 0.0), Complex64::ZERO, Complex64::ZERO, c(0.0, b)],
            1e-12,
        )
        .unwrap();
        let tau = DensityOperator::pure(&v).unwrap();
        let got = tau.reduced_state_s(ProductDims::new(2, 2)).unwrap();
        let expected = ComplexMatrix::diagonal(&[c(a * a, 0.0), c(b * b, 0.0)]);
        assert!(got.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn evolve_by_identity_is_noop() {
        let rho = DensityOperator::random(3, 3);
        let evolved = rho.evolve(&UnitaryOperator::identity(3)).unwrap();
        assert!(evolved.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn evolve_by_swap_permutes_basis() {
        let rho =
            DensityOperator::from_matrix(ComplexMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 0.0)]), 1e-10)
                .unwrap();
        let x = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let u = UnitaryOperator::new(x).unwrap();
        let evolved = rho.evolve(&u).unwrap();
        let expected = ComplexMatrix::diagonal(&[c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(evolved.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn evolve_preserves_spectrum() {
        let rho = DensityOperator::random(4, 17);
        let u = UnitaryOperator::random(4, 18);
        let evolved = rho.evolve(&u).unwrap();
        // eigen-decomposition oracle: sorted eigenvalue multisets agree
        let before = rho.matrix().hermitian_eigenvalues();
        let after = evolved.matrix().hermitian_eigenvalues();
        for (x, y) in before.iter().zip(&after) {
            assert!((x - y).abs() < 1e-10);
        }
        assert!((evolved.matrix().trace() - Complex64::ONE).norm() < 1e-12);
    }

    #[test]
    fn evolve_dimension_mismatch() {
        let rho = DensityOperator::random(2, 5);
        let u = UnitaryOperator::identity(3);
        assert!(matches!(
            rho.evolve(&u),
            Err(QmError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_density_is_valid_and_deterministic() {
        let rho = DensityOperator::random(1, 123);
        assert!(rho.matrix().max_abs_diff(&ComplexMatrix::identity(1)) < 1e-15);

        let a = DensityOperator::random(4, 42);
        assert!(DensityOperator::from_matrix(a.matrix().clone(), 1e-10).is_ok());
        let b = DensityOperator::random(4, 42);
        assert_eq!(a.matrix().entries(), b.matrix().entries());
        let d = DensityOperator::random(4, 43);
        assert!(a.matrix().max_abs_diff(d.matrix()) > 1e-3);
    }

    #[test]
    fn random_unitary_is_unitary_and_deterministic() {
        let u1 = UnitaryOperator::random(1, 9);
        assert!((u1.matrix().get(0, 0).norm() - 1.0).abs() < 1e-12);

        let u = UnitaryOperator::random(3, 7);
        let prod = u.matrix().matmul(&u.matrix().adjoint()).unwrap();
        assert!(prod.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
        let v = UnitaryOperator::random(3, 7);
        assert_eq!(u.matrix().entries(), v.matrix().entries());
    }

    #[test]
    fn reduced_state_commutes_with_local_evolution() {
        // Tr_P[(V_S ⊗ V_P) τ (V_S ⊗ V_P)†] = V_S Tr_P(τ) V_S†
        let dims = ProductDims::new(3, 2);
        for seed in 0..20u64 {
            let tau = DensityOperator::random(6, 100 + seed);
            let v_s = UnitaryOperator::random(3, 200 + seed);
            let v_p = UnitaryOperator::random(2, 300 + seed);
            let joint_u =
                UnitaryOperator::new(v_s.matrix().kron(v_p.matrix())).unwrap();
            let lhs = tau.evolve(&joint_u).unwrap().reduced_state_s(dims).unwrap();
            let rhs = tau.reduced_state_s(dims).unwrap().evolve(&v_s).unwrap();
            assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-10);
        }
    }
}
