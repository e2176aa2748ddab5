//! Python bindings for the qmkit toolkit.
//!
//! Exposes the main types (density operators, unitaries, POVMs, joint
//! POVMs, premeasurement models) and the check operations. Matrices cross
//! the boundary as nested lists of Python complex numbers, row-major.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qmkit::linops::{ComplexMatrix, ProductDims};
use qmkit::luders::LudersModel;
use qmkit::scenarios as scn;
use qmkit::{
    measurement, observables, DensityOperator, QmError, StateVector, UnitaryOperator,
    DEFAULT_TOL,
};

fn qm_err(e: QmError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

type PyMatrix = Vec<Vec<Complex64>>;

fn matrix_from_py(rows: PyMatrix) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&rows).map_err(qm_err)
}

fn matrix_to_py(m: &ComplexMatrix) -> PyMatrix {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| m.get(i, j)).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Check outcomes
// ---------------------------------------------------------------------------

/// Pass/fail of one numeric check plus diagnostics.
#[pyclass(name = "CheckOutcome", skip_from_py_object)]
#[derive(Clone)]
struct PyCheckOutcome {
    #[pyo3(get)]
    passed: bool,
    #[pyo3(get)]
    max_deviation: f64,
    #[pyo3(get)]
    witness: Option<String>,
    #[pyo3(get)]
    skipped: Vec<String>,
}

impl From<observables::CheckOutcome> for PyCheckOutcome {
    fn from(outcome: observables::CheckOutcome) -> Self {
        Self {
            passed: outcome.pass,
            max_deviation: outcome.max_deviation,
            witness: outcome.witness,
            skipped: outcome.skipped,
        }
    }
}

#[pymethods]
impl PyCheckOutcome {
    fn __repr__(&self) -> String {
        format!(
            "CheckOutcome(passed={}, max_deviation={:.3e}, witness={:?})",
            self.passed, self.max_deviation, self.witness
        )
    }

    fn __bool__(&self) -> bool {
        self.passed
    }
}

/// The three predicates of the joint-formula equivalence plus the verdict.
#[pyclass(name = "EquivalenceReport", skip_from_py_object)]
#[derive(Clone)]
struct PyEquivalenceReport {
    #[pyo3(get)]
    jmf_form: PyCheckOutcome,
    #[pyo3(get)]
    noeffect: PyCheckOutcome,
    #[pyo3(get)]
    prodmarg: PyCheckOutcome,
    #[pyo3(get)]
    biconditional_holds: bool,
}

// ---------------------------------------------------------------------------
// States and unitaries
// ---------------------------------------------------------------------------

/// Hermitian, positive-semidefinite, unit-trace operator.
#[pyclass(name = "DensityOperator", skip_from_py_object)]
#[derive(Clone)]
struct PyDensity {
    inner: DensityOperator,
}

#[pymethods]
impl PyDensity {
    #[new]
    #[pyo3(signature = (matrix, tol = DEFAULT_TOL))]
    fn new(matrix: PyMatrix, tol: f64) -> PyResult<Self> {
        let m = matrix_from_py(matrix)?;
        Ok(Self {
            inner: DensityOperator::from_matrix(m, tol).map_err(qm_err)?,
        })
    }

    /// Rank-1 state |v⟩⟨v| from a normalized amplitude vector.
    #[staticmethod]
    #[pyo3(signature = (amplitudes, tol = DEFAULT_TOL))]
    fn pure(amplitudes: Vec<Complex64>, tol: f64) -> PyResult<Self> {
        let v = StateVector::new(amplitudes, tol).map_err(qm_err)?;
        Ok(Self {
            inner: DensityOperator::pure(&v).map_err(qm_err)?,
        })
    }

    /// The two-qubit singlet state.
    #[staticmethod]
    fn singlet() -> Self {
        Self {
            inner: scn::singlet(),
        }
    }

    #[staticmethod]
    fn maximally_mixed(dim: usize) -> Self {
        Self {
            inner: DensityOperator::maximally_mixed(dim),
        }
    }

    /// Seeded full-rank random state.
    #[staticmethod]
    fn random(dim: usize, seed: u64) -> Self {
        Self {
            inner: DensityOperator::random(dim, seed),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn matrix(&self) -> PyMatrix {
        matrix_to_py(self.inner.matrix())
    }

    /// Reduced state of the left factor.
    fn reduced_s(&self, dim_s: usize, dim_p: usize) -> PyResult<Self> {
        Ok(Self {
            inner: self
                .inner
                .reduced_state_s(ProductDims::new(dim_s, dim_p))
                .map_err(qm_err)?,
        })
    }

    /// Reduced state of the right factor.
    fn reduced_p(&self, dim_s: usize, dim_p: usize) -> PyResult<Self> {
        Ok(Self {
            inner: self
                .inner
                .reduced_state_p(ProductDims::new(dim_s, dim_p))
                .map_err(qm_err)?,
        })
    }

    /// Unitary evolution ρ → UρU†.
    fn evolve(&self, u: &PyUnitary) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.evolve(&u.inner).map_err(qm_err)?,
        })
    }

    /// Tensor product with another state, self on the left.
    fn tensor(&self, other: &PyDensity) -> PyResult<Self> {
        let m = self.inner.matrix().kron(other.inner.matrix());
        Ok(Self {
            inner: DensityOperator::from_matrix(m, self.inner.tol()).map_err(qm_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("DensityOperator(dim={})", self.inner.dim())
    }
}

/// Operator with U·U† = I.
#[pyclass(name = "UnitaryOperator", skip_from_py_object)]
#[derive(Clone)]
struct PyUnitary {
    inner: UnitaryOperator,
}

#[pymethods]
impl PyUnitary {
    #[new]
    #[pyo3(signature = (matrix, tol = DEFAULT_TOL))]
    fn new(matrix: PyMatrix, tol: f64) -> PyResult<Self> {
        let m = matrix_from_py(matrix)?;
        Ok(Self {
            inner: UnitaryOperator::from_matrix(m, tol).map_err(qm_err)?,
        })
    }

    #[staticmethod]
    fn identity(dim: usize) -> Self {
        Self {
            inner: UnitaryOperator::identity(dim),
        }
    }

    /// Seeded random unitary.
    #[staticmethod]
    fn random(dim: usize, seed: u64) -> Self {
        Self {
            inner: UnitaryOperator::random(dim, seed),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn matrix(&self) -> PyMatrix {
        matrix_to_py(self.inner.matrix())
    }

    fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    fn __repr__(&self) -> String {
        format!("UnitaryOperator(dim={})", self.inner.dim())
    }
}

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

/// Outcome-labeled family of effects 0 ≤ E ≤ I summing to I.
#[pyclass(name = "Povm", skip_from_py_object)]
#[derive(Clone)]
struct PyPovm {
    inner: observables::Povm,
}

#[pymethods]
impl PyPovm {
    #[new]
    #[pyo3(signature = (dim, outcomes, tol = DEFAULT_TOL))]
    fn new(dim: usize, outcomes: Vec<(String, PyMatrix)>, tol: f64) -> PyResult<Self> {
        let parsed = outcomes
            .into_iter()
            .map(|(label, m)| matrix_from_py(m).map(|m| (label, m)))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self {
            inner: observables::Povm::new(dim, parsed, tol).map_err(qm_err)?,
        })
    }

    /// The fair-coin POVM {½I, ½I}.
    #[staticmethod]
    fn coin() -> Self {
        Self {
            inner: scn::coin_povm(),
        }
    }

    /// Spin-z basis PVM with outcomes "up" and "down".
    #[staticmethod]
    fn z() -> Self {
        Self {
            inner: scn::z_pvm(),
        }
    }

    /// Spin-x basis PVM with outcomes "right" and "left".
    #[staticmethod]
    fn x() -> Self {
        Self {
            inner: scn::x_pvm(),
        }
    }

    /// ±1-valued observable along a Bloch direction.
    #[staticmethod]
    fn spin(nx: f64, ny: f64, nz: f64) -> Self {
        Self {
            inner: scn::spin_observable(nx, ny, nz),
        }
    }

    /// Seeded random POVM with the given number of outcomes.
    #[staticmethod]
    fn random(dim: usize, n_outcomes: usize, seed: u64) -> Self {
        Self {
            inner: observables::random_povm(dim, n_outcomes, seed),
        }
    }

    /// Seeded random projection-valued measure.
    #[staticmethod]
    fn random_pvm(dim: usize, n_groups: usize, seed: u64) -> Self {
        Self {
            inner: observables::random_pvm(dim, n_groups, seed),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels().iter().map(|s| s.to_string()).collect()
    }

    fn effect(&self, label: &str) -> PyResult<PyMatrix> {
        self.inner
            .effect(label)
            .map(matrix_to_py)
            .ok_or_else(|| PyValueError::new_err(format!("no outcome '{label}'")))
    }

    #[pyo3(signature = (tol = DEFAULT_TOL))]
    fn is_projection_valued(&self, tol: f64) -> bool {
        self.inner.is_projection_valued(tol)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Povm(dim={}, labels={:?})",
            self.inner.dim(),
            self.inner.labels()
        )
    }
}

/// POVM on a product space indexed by outcome pairs (s, p).
#[pyclass(name = "JointPovm", skip_from_py_object)]
#[derive(Clone)]
struct PyJointPovm {
    inner: observables::JointPovm,
}

#[pymethods]
impl PyJointPovm {
    /// Build the joint POVM the joint-measurement formula prescribes:
    /// E_{s&p} = U_S†E_sU_S ⊗ U_P†E_pU_P.
    #[staticmethod]
    fn jmf(
        povm_s: &PyPovm,
        povm_p: &PyPovm,
        u_s: &PyUnitary,
        u_p: &PyUnitary,
    ) -> PyResult<Self> {
        Ok(Self {
            inner: observables::JointPovm::from_jmf(
                &povm_s.inner,
                &povm_p.inner,
                &u_s.inner,
                &u_p.inner,
            )
            .map_err(qm_err)?,
        })
    }

    /// Two independent fair coin tosses: every effect ¼·I⊗I.
    #[staticmethod]
    fn independent() -> Self {
        Self {
            inner: scn::independent_joint(),
        }
    }

    /// Two perfectly correlated fair coin tosses.
    #[staticmethod]
    fn correlated() -> Self {
        Self {
            inner: scn::correlated_joint(),
        }
    }

    #[getter]
    fn s_labels(&self) -> Vec<String> {
        self.inner.s_labels().to_vec()
    }

    #[getter]
    fn p_labels(&self) -> Vec<String> {
        self.inner.p_labels().to_vec()
    }

    fn effect(&self, s: &str, p: &str) -> PyResult<PyMatrix> {
        self.inner
            .effect_by_labels(s, p)
            .map(matrix_to_py)
            .ok_or_else(|| PyValueError::new_err(format!("no outcome pair ({s}, {p})")))
    }

    fn marginal_s(&self) -> PyPovm {
        PyPovm {
            inner: self.inner.marginal_s(),
        }
    }

    fn marginal_p(&self) -> PyPovm {
        PyPovm {
            inner: self.inner.marginal_p(),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "JointPovm(s_labels={:?}, p_labels={:?})",
            self.inner.s_labels(),
            self.inner.p_labels()
        )
    }
}

// ---------------------------------------------------------------------------
// Premeasurement model
// ---------------------------------------------------------------------------

/// Von Neumann-Lüders premeasurement model.
#[pyclass(name = "LudersModel")]
struct PyLudersModel {
    inner: LudersModel,
}

#[pymethods]
impl PyLudersModel {
    /// s_groups: eigenvectors of the measured observable grouped by
    /// eigenvalue; p_basis: orthonormal probe vectors, one pointer per
    /// group plus optionally extra directions; p0_index selects the
    /// initial probe state.
    #[staticmethod]
    #[pyo3(signature = (s_groups, p_basis, p0_index, tol = DEFAULT_TOL))]
    fn build(
        s_groups: Vec<Vec<Vec<Complex64>>>,
        p_basis: Vec<Vec<Complex64>>,
        p0_index: usize,
        tol: f64,
    ) -> PyResult<Self> {
        let groups = s_groups
            .into_iter()
            .map(|group| {
                group
                    .into_iter()
                    .map(|v| StateVector::new(v, tol).map_err(qm_err))
                    .collect::<PyResult<Vec<_>>>()
            })
            .collect::<PyResult<Vec<_>>>()?;
        let basis = p_basis
            .into_iter()
            .map(|v| StateVector::new(v, tol).map_err(qm_err))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self {
            inner: LudersModel::build(groups, basis, p0_index, tol).map_err(qm_err)?,
        })
    }

    #[getter]
    fn dim_s(&self) -> usize {
        self.inner.dim_s()
    }

    #[getter]
    fn dim_p(&self) -> usize {
        self.inner.dim_p()
    }

    #[getter]
    fn n_groups(&self) -> usize {
        self.inner.n_groups()
    }

    fn unitary(&self) -> PyUnitary {
        PyUnitary {
            inner: self.inner.unitary().clone(),
        }
    }

    fn premeasure(&self, sigma0: &PyDensity, pi0: &PyDensity) -> PyResult<PyDensity> {
        Ok(PyDensity {
            inner: self
                .inner
                .premeasure(&sigma0.inner, &pi0.inner)
                .map_err(qm_err)?,
        })
    }

    #[pyo3(signature = (s0, tol = DEFAULT_TOL))]
    fn proxy_check(&self, s0: Vec<Complex64>, tol: f64) -> PyResult<PyCheckOutcome> {
        let v = StateVector::new(s0, tol).map_err(qm_err)?;
        Ok(self.inner.proxy_check(&v, tol).map_err(qm_err)?.into())
    }

    fn projection_postulate_state(
        &self,
        s0: Vec<Complex64>,
        k: usize,
        u_s: &PyUnitary,
    ) -> PyResult<Vec<Complex64>> {
        let v = StateVector::new(s0, DEFAULT_TOL).map_err(qm_err)?;
        let reduced = self
            .inner
            .projection_postulate_state(&v, k, &u_s.inner)
            .map_err(qm_err)?;
        Ok(reduced.amplitudes().to_vec())
    }

    /// Reduced state of S via the state reduction formula, conditioning the
    /// premeasured joint state on pointer outcome k.
    fn srf_reduced_state(
        &self,
        s0: Vec<Complex64>,
        k: usize,
        u_s: &PyUnitary,
    ) -> PyResult<PyDensity> {
        let v = StateVector::new(s0, DEFAULT_TOL).map_err(qm_err)?;
        Ok(PyDensity {
            inner: self
                .inner
                .srf_reduced_state(&v, k, &u_s.inner)
                .map_err(qm_err)?,
        })
    }
}

// ---------------------------------------------------------------------------
// Measurement operations
// ---------------------------------------------------------------------------

/// Pr = Tr(E·ρ).
#[pyfunction]
fn prob(rho: &PyDensity, effect: PyMatrix) -> PyResult<f64> {
    let e = matrix_from_py(effect)?;
    measurement::prob(&rho.inner, &e).map_err(qm_err)
}

/// One probability per POVM outcome, in declared order.
#[pyfunction]
fn distribution(rho: &PyDensity, povm: &PyPovm) -> PyResult<Vec<(String, f64)>> {
    Ok(measurement::distribution(&rho.inner, &povm.inner)
        .map_err(qm_err)?
        .entries()
        .to_vec())
}

/// Joint outcome probabilities under the joint-measurement rule.
#[pyfunction]
fn jmf_probability(
    tau: &PyDensity,
    povm_s: &PyPovm,
    povm_p: &PyPovm,
    u_s: &PyUnitary,
    u_p: &PyUnitary,
) -> PyResult<Vec<((String, String), f64)>> {
    Ok(measurement::jmf_probability(
        &tau.inner,
        &povm_s.inner,
        &povm_p.inner,
        &u_s.inner,
        &u_p.inner,
    )
    .map_err(qm_err)?
    .entries()
    .to_vec())
}

/// State reduction: σ_p = U_S·Tr_P[(I⊗E_p)τ]/Tr[(I⊗E_p)τ]·U_S†.
#[pyfunction]
fn srf(
    tau: &PyDensity,
    effect_p: PyMatrix,
    u_s: &PyUnitary,
    dim_s: usize,
    dim_p: usize,
) -> PyResult<PyDensity> {
    let e = matrix_from_py(effect_p)?;
    Ok(PyDensity {
        inner: measurement::srf(&tau.inner, &e, &u_s.inner, ProductDims::new(dim_s, dim_p))
            .map_err(qm_err)?,
    })
}

/// The reduction without the U_S conjugation.
#[pyfunction]
fn ozawa_pre_state(
    tau: &PyDensity,
    effect_p: PyMatrix,
    dim_s: usize,
    dim_p: usize,
) -> PyResult<PyDensity> {
    let e = matrix_from_py(effect_p)?;
    Ok(PyDensity {
        inner: measurement::ozawa_pre_state(&tau.inner, &e, ProductDims::new(dim_s, dim_p))
            .map_err(qm_err)?,
    })
}

/// Σ_p Pr(p)·σ_p = U_S·Tr_P(τ)·U_S†.
#[pyfunction]
#[pyo3(signature = (tau, povm_p, u_s, dim_s, dim_p, tol = DEFAULT_TOL))]
fn mixture_identity_check(
    tau: &PyDensity,
    povm_p: &PyPovm,
    u_s: &PyUnitary,
    dim_s: usize,
    dim_p: usize,
    tol: f64,
) -> PyResult<PyCheckOutcome> {
    Ok(measurement::mixture_identity_check(
        &tau.inner,
        &povm_p.inner,
        &u_s.inner,
        ProductDims::new(dim_s, dim_p),
        tol,
    )
    .map_err(qm_err)?
    .into())
}

/// Four-way identity chain showing a remote local unitary is invisible.
#[pyfunction]
#[pyo3(signature = (tau, v_s, v_p, povm_s, dim_s, dim_p, tol = 1e-12))]
fn no_signaling_unitary_check(
    tau: &PyDensity,
    v_s: &PyUnitary,
    v_p: &PyUnitary,
    povm_s: &PyPovm,
    dim_s: usize,
    dim_p: usize,
    tol: f64,
) -> PyResult<PyCheckOutcome> {
    Ok(measurement::no_signaling_unitary_check(
        &tau.inner,
        &v_s.inner,
        &v_p.inner,
        &povm_s.inner,
        ProductDims::new(dim_s, dim_p),
        tol,
    )
    .map_err(qm_err)?
    .into())
}

/// Conditional probabilities against the reduced state, per outcome pair.
#[pyfunction]
#[pyo3(signature = (tau, povm_s, povm_p, u_s, tol = DEFAULT_TOL, p_floor = 1e-8))]
fn srf_conditional_check(
    tau: &PyDensity,
    povm_s: &PyPovm,
    povm_p: &PyPovm,
    u_s: &PyUnitary,
    tol: f64,
    p_floor: f64,
) -> PyResult<PyCheckOutcome> {
    Ok(measurement::srf_conditional_check(
        &tau.inner,
        &povm_s.inner,
        &povm_p.inner,
        &u_s.inner,
        tol,
        p_floor,
    )
    .map_err(qm_err)?
    .into())
}

/// Draw one outcome label by inverse CDF; deterministic per seed.
#[pyfunction]
fn sample_outcome(rho: &PyDensity, povm: &PyPovm, seed: u64) -> PyResult<String> {
    measurement::sample_outcome(&rho.inner, &povm.inner, seed).map_err(qm_err)
}

// ---------------------------------------------------------------------------
// Joint POVM checks
// ---------------------------------------------------------------------------

/// Σ_p E_{s&p} = U_S†E_sU_S ⊗ I and Σ_s E_{s&p} = I ⊗ U_P†E_pU_P.
#[pyfunction]
#[pyo3(signature = (joint, povm_s, povm_p, u_s, u_p, tol = DEFAULT_TOL))]
fn check_noeffect(
    joint: &PyJointPovm,
    povm_s: &PyPovm,
    povm_p: &PyPovm,
    u_s: &PyUnitary,
    u_p: &PyUnitary,
    tol: f64,
) -> PyResult<PyCheckOutcome> {
    Ok(observables::check_noeffect(
        &joint.inner,
        &povm_s.inner,
        &povm_p.inner,
        &u_s.inner,
        &u_p.inner,
        tol,
    )
    .map_err(qm_err)?
    .into())
}

/// E_{s&p} = (Σ_p E_{s&p})(Σ_s E_{s&p}).
#[pyfunction]
#[pyo3(signature = (joint, tol = DEFAULT_TOL))]
fn check_prodmarg(joint: &PyJointPovm, tol: f64) -> PyCheckOutcome {
    observables::check_prodmarg(&joint.inner, tol).into()
}

/// Entrywise match against the joint-measurement-formula construction.
#[pyfunction]
#[pyo3(signature = (joint, povm_s, povm_p, u_s, u_p, tol = DEFAULT_TOL))]
fn check_jmf_form(
    joint: &PyJointPovm,
    povm_s: &PyPovm,
    povm_p: &PyPovm,
    u_s: &PyUnitary,
    u_p: &PyUnitary,
    tol: f64,
) -> PyResult<PyCheckOutcome> {
    Ok(observables::check_jmf_form(
        &joint.inner,
        &povm_s.inner,
        &povm_p.inner,
        &u_s.inner,
        &u_p.inner,
        tol,
    )
    .map_err(qm_err)?
    .into())
}

/// Evaluate the three predicates and the biconditional
/// `jmf_form ⇔ (noeffect ∧ prodmarg)`.
#[pyfunction]
#[pyo3(signature = (joint, povm_s, povm_p, u_s, u_p, tol = DEFAULT_TOL))]
fn verify_equivalence(
    joint: &PyJointPovm,
    povm_s: &PyPovm,
    povm_p: &PyPovm,
    u_s: &PyUnitary,
    u_p: &PyUnitary,
    tol: f64,
) -> PyResult<PyEquivalenceReport> {
    let report = observables::verify_equivalence(
        &joint.inner,
        &povm_s.inner,
        &povm_p.inner,
        &u_s.inner,
        &u_p.inner,
        tol,
    )
    .map_err(qm_err)?;
    Ok(PyEquivalenceReport {
        jmf_form: report.jmf_form.into(),
        noeffect: report.noeffect.into(),
        prodmarg: report.prodmarg.into(),
        biconditional_holds: report.biconditional_holds,
    })
}

// ---------------------------------------------------------------------------
// CHSH and scenarios
// ---------------------------------------------------------------------------

/// Correlator E(a,b) over ±1-valued observables.
#[pyfunction]
fn correlator(tau: &PyDensity, a: &PyPovm, b: &PyPovm) -> PyResult<f64> {
    scn::correlator(&tau.inner, &a.inner, &b.inner).map_err(qm_err)
}

/// |E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2)|.
#[pyfunction]
fn chsh_value(
    tau: &PyDensity,
    a1: &PyPovm,
    a2: &PyPovm,
    b1: &PyPovm,
    b2: &PyPovm,
) -> PyResult<f64> {
    scn::chsh_value(&tau.inner, &a1.inner, &a2.inner, &b1.inner, &b2.inner).map_err(qm_err)
}

/// The settings that maximize the CHSH value on the singlet.
#[pyfunction]
fn chsh_optimal_settings() -> (PyPovm, PyPovm, PyPovm, PyPovm) {
    let (a1, a2, b1, b2) = scn::chsh_optimal_settings();
    (
        PyPovm { inner: a1 },
        PyPovm { inner: a2 },
        PyPovm { inner: b1 },
        PyPovm { inner: b2 },
    )
}

/// Run a JSON scenario document; returns the JSON report.
#[pyfunction]
fn run_scenario(scenario_json: &str) -> PyResult<String> {
    let scenario = scn::Scenario::from_json(scenario_json).map_err(qm_err)?;
    let report = scn::run_scenario(&scenario).map_err(qm_err)?;
    Ok(report.to_json())
}

/// Run a named demo; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (name, seed = scn::DEFAULT_SEED, tol = DEFAULT_TOL))]
fn run_demo(name: &str, seed: u64, tol: f64) -> PyResult<String> {
    Ok(scn::run_demo(name, seed, tol).map_err(qm_err)?.to_json())
}

/// Names of the available demos.
#[pyfunction]
fn list_demos() -> Vec<String> {
    scn::DEMOS.iter().map(|d| d.name.to_string()).collect()
}

#[pymodule]
fn qmkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensity>()?;
    m.add_class::<PyUnitary>()?;
    m.add_class::<PyPovm>()?;
    m.add_class::<PyJointPovm>()?;
    m.add_class::<PyLudersModel>()?;
    m.add_class::<PyCheckOutcome>()?;
    m.add_class::<PyEquivalenceReport>()?;
    m.add_function(wrap_pyfunction!(prob, m)?)?;
    m.add_function(wrap_pyfunction!(distribution, m)?)?;
    m.add_function(wrap_pyfunction!(jmf_probability, m)?)?;
    m.add_function(wrap_pyfunction!(srf, m)?)?;
    m.add_function(wrap_pyfunction!(ozawa_pre_state, m)?)?;
    m.add_function(wrap_pyfunction!(mixture_identity_check, m)?)?;
    m.add_function(wrap_pyfunction!(no_signaling_unitary_check, m)?)?;
    m.add_function(wrap_pyfunction!(srf_conditional_check, m)?)?;
    m.add_function(wrap_pyfunction!(sample_outcome, m)?)?;
    m.add_function(wrap_pyfunction!(check_noeffect, m)?)?;
    m.add_function(wrap_pyfunction!(check_prodmarg, m)?)?;
    m.add_function(wrap_pyfunction!(check_jmf_form, m)?)?;
    m.add_function(wrap_pyfunction!(verify_equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(correlator, m)?)?;
    m.add_function(wrap_pyfunction!(chsh_value, m)?)?;
    m.add_function(wrap_pyfunction!(chsh_optimal_settings, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(run_demo, m)?)?;
    m.add_function(wrap_pyfunction!(list_demos, m)?)?;
    m.add("DEFAULT_TOL", DEFAULT_TOL)?;
    Ok(())
}
