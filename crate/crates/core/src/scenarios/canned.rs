//! Canned states, POVMs, and joint POVMs used by the demos and tests,
//! plus the CHSH value computation.

use num_complex::Complex64;

use crate::error::{QmError, Result};
use crate::linops::{ComplexMatrix, ProductDims, DEFAULT_TOL};
use crate::measurement::jmf_probability;
use crate::observables::{JointPovm, Povm};
use crate::states::{singlet_vector, DensityOperator, UnitaryOperator};

/// The triple Stern-Gerlach "fair coin" POVM: E_0 = E_1 = ½I. Every qubit
/// state gives Pr(0) = Pr(1) = ½, and the effects are not projections.
pub fn coin_povm() -> Povm {
    let half = ComplexMatrix::identity(2).scale(0.5.into());
    Povm::new(2, vec![("0".into(), half.clone()), ("1".into(), half)], DEFAULT_TOL)
        .expect("two half-identities form a POVM")
}

/// Spin-z basis PVM with outcomes "up" (|0⟩) and "down" (|1⟩).
pub fn z_pvm() -> Povm {
    Povm::new(
        2,
        vec![
            (
                "up".into(),
                ComplexMatrix::diagonal(&[Complex64::ONE, Complex64::ZERO]),
            ),
            (
                "down".into(),
                ComplexMatrix::diagonal(&[Complex64::ZERO, Complex64::ONE]),
            ),
        ],
        DEFAULT_TOL,
    )
    .expect("z projectors form a PVM")
}

/// Spin-x basis PVM with outcomes "right" ((|0⟩+|1⟩)/√2) and
/// "left" ((|0⟩-|1⟩)/√2).
pub fn x_pvm() -> Povm {
    let plus = ComplexMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
    let minus = ComplexMatrix::from_real_rows(&[vec![0.5, -0.5], vec![-0.5, 0.5]]).unwrap();
    Povm::new(
        2,
        vec![("right".into(), plus), ("left".into(), minus)],
        DEFAULT_TOL,
    )
    .expect("x projectors form a PVM")
}

/// Joint POVM describing two independent fair coin tosses:
/// all four effects equal ¼·I⊗I.
pub fn independent_joint() -> JointPovm {
    let quarter = ComplexMatrix::identity(4).scale(0.25.into());
    JointPovm::new(
        ProductDims::new(2, 2),
        vec!["0".into(), "1".into()],
        vec!["0".into(), "1".into()],
        vec![quarter.clone(), quarter.clone(), quarter.clone(), quarter],
        DEFAULT_TOL,
    )
    .expect("quarter-identity grid is a joint POVM")
}

/// Joint POVM describing two perfectly correlated fair coin tosses:
/// E'_{0&0} = E'_{1&1} = ½·I⊗I and E'_{0&1} = E'_{1&0} = 0.
pub fn correlated_joint() -> JointPovm {
    let half = ComplexMatrix::identity(4).scale(0.5.into());
    let zero = ComplexMatrix::zeros(4);
    JointPovm::new(
        ProductDims::new(2, 2),
        vec!["0".into(), "1".into()],
        vec!["0".into(), "1".into()],
        vec![half.clone(), zero.clone(), zero, half],
        DEFAULT_TOL,
    )
    .expect("correlated grid is a joint POVM")
}

/// The two-qubit singlet state, projector onto (|01⟩ - |10⟩)/√2.
pub fn singlet() -> DensityOperator {
    DensityOperator::pure(&singlet_vector()).expect("singlet is a pure state")
}

/// ±1-valued qubit observable along a Bloch direction: the PVM
/// {(I + n·σ)/2, (I - n·σ)/2} with outcome labels "+" and "-".
pub fn spin_observable(nx: f64, ny: f64, nz: f64) -> Povm {
    let norm = (nx * nx + ny * ny + nz * nz).sqrt();
    assert!(norm > 0.0, "direction must be nonzero");
    let (nx, ny, nz) = (nx / norm, ny / norm, nz / norm);
    let n_sigma = ComplexMatrix::from_rows(&[
        vec![Complex64::new(nz, 0.0), Complex64::new(nx, -ny)],
        vec![Complex64::new(nx, ny), Complex64::new(-nz, 0.0)],
    ])
    .unwrap();
    let identity = ComplexMatrix::identity(2);
    let plus = identity.add(&n_sigma).unwrap().scale(0.5.into());
    let minus = identity.sub(&n_sigma).unwrap().scale(0.5.into());
    Povm::new(
        2,
        vec![("+".into(), plus), ("-".into(), minus)],
        DEFAULT_TOL,
    )
    .expect("spin projectors form a PVM")
}

fn require_dichotomic(povm: &Povm, which: &str) -> Result<()> {
    if povm.len() != 2 {
        return Err(QmError::NotDichotomic {
            context: format!("{which} has {} outcomes, expected 2", povm.len()),
        });
    }
    if !povm.is_projection_valued(DEFAULT_TOL) {
        return Err(QmError::NotDichotomic {
            context: format!("{which} is not projection valued"),
        });
    }
    Ok(())
}

/// Correlator E(a,b) = Σ s·p·Pr(s&p) over s,p ∈ {+1,-1}, computed through
/// the joint measurement rule with trivial evolution. The first outcome of
/// each observable carries the value +1, the second -1.
pub fn correlator(tau: &DensityOperator, a: &Povm, b: &Povm) -> Result<f64> {
    require_dichotomic(a, "S observable")?;
    require_dichotomic(b, "P observable")?;
    let id = UnitaryOperator::identity(2);
    let joint = jmf_probability(tau, a, b, &id, &id)?;
    let mut value = 0.0;
    for (si, (s_label, _)) in a.outcomes().iter().enumerate() {
        for (pi, (p_label, _)) in b.outcomes().iter().enumerate() {
            let sign = if (si + pi) % 2 == 0 { 1.0 } else { -1.0 };
            value += sign
                * joint
                    .probability(s_label, p_label)
                    .expect("full outcome grid");
        }
    }
    Ok(value)
}

/// CHSH combination |E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2)|.
/// At most 2 for product states, up to 2√2 for entangled ones.
pub fn chsh_value(
    tau: &DensityOperator,
    a1: &Povm,
    a2: &Povm,
    b1: &Povm,
    b2: &Povm,
) -> Result<f64> {
    let e11 = correlator(tau, a1, b1)?;
    let e12 = correlator(tau, a1, b2)?;
    let e21 = correlator(tau, a2, b1)?;
    let e22 = correlator(tau, a2, b2)?;
    Ok((e11 + e12 + e21 - e22).abs())
}

/// The settings that maximize the CHSH value on the singlet:
/// Z and X on S, -(Z+X)/√2 and (X-Z)/√2 on P.
pub fn chsh_optimal_settings() -> (Povm, Povm, Povm, Povm) {
    let a1 = spin_observable(0.0, 0.0, 1.0);
    let a2 = spin_observable(1.0, 0.0, 0.0);
    let b1 = spin_observable(-1.0, 0.0, -1.0);
    let b2 = spin_observable(1.0, 0.0, -1.0);
    (a1, a2, b1, b2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{distribution, jmf_probability};
    use crate::states::random_ginibre;

    const TWO_SQRT_2: f64 = 2.828_427_124_746_190_3;

    #[test]
    fn coin_povm_passes_validation_and_is_unbiased() {
        let povm = coin_povm();
        Povm::new(2, povm.outcomes().to_vec(), DEFAULT_TOL).unwrap();
        for seed in 0..5u64 {
            let rho = DensityOperator::random(2, seed);
            let d = distribution(&rho, &povm).unwrap();
            assert!((d.probability("0").unwrap() - 0.5).abs() < 1e-14);
            assert!((d.probability("1").unwrap() - 0.5).abs() < 1e-14);
        }
        // (½I)² = ¼I ≠ ½I
        assert!(!povm.is_projection_valued(1e-10));
    }

    #[test]
    fn canned_joints_validate_and_fix_the_statistics() {
        let ind = independent_joint();
        let cor = correlated_joint();
        for seed in 0..5u64 {
            let tau = DensityOperator::random(4, seed);
            for ((s, p), effect) in ind.pairs() {
                let pr = crate::measurement::prob(&tau, effect).unwrap();
                assert!((pr - 0.25).abs() < 1e-13, "({s},{p})");
            }
            for ((s, p), effect) in cor.pairs() {
                let pr = crate::measurement::prob(&tau, effect).unwrap();
                let expected = if s == p { 0.5 } else { 0.0 };
                assert!((pr - expected).abs() < 1e-13, "({s},{p})");
            }
        }
    }

    #[test]
    fn jmf_probability_reproduces_the_independent_coin_grid() {
        let id = UnitaryOperator::identity(2);
        for seed in 0..5u64 {
            let tau = DensityOperator::random(4, 10 + seed);
            let d = jmf_probability(&tau, &coin_povm(), &coin_povm(), &id, &id).unwrap();
            for (_, p) in d.entries() {
                assert!((p - 0.25).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn singlet_properties() {
        let s = singlet();
        let reduced = s.reduced_state_s(ProductDims::new(2, 2)).unwrap();
        assert!(
            reduced
                .matrix()
                .max_abs_diff(&ComplexMatrix::identity(2).scale(0.5.into()))
                < 1e-15
        );
        // purity Tr(ρ²) = 1
        let purity = s.matrix().matmul(s.matrix()).unwrap().trace().re;
        assert!((purity - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spin_observables_are_dichotomic_pvms() {
        for (nx, ny, nz) in [(0.0, 0.0, 1.0), (1.0, 0.0, 0.0), (0.3, -0.4, 0.5)] {
            let povm = spin_observable(nx, ny, nz);
            assert!(povm.is_projection_valued(1e-12));
            assert_eq!(povm.len(), 2);
        }
    }

    #[test]
    fn correlator_on_singlet_is_minus_cosine() {
        // E(a,b) = -a·b for the singlet
        let a = spin_observable(0.0, 0.0, 1.0);
        let b = spin_observable(0.0, 0.0, 1.0);
        assert!((correlator(&singlet(), &a, &b).unwrap() + 1.0).abs() < 1e-13);
        let b = spin_observable(1.0, 0.0, 0.0);
        assert!(correlator(&singlet(), &a, &b).unwrap().abs() < 1e-13);
    }

    #[test]
    fn chsh_on_singlet_reaches_tsirelson() {
        let (a1, a2, b1, b2) = chsh_optimal_settings();
        let value = chsh_value(&singlet(), &a1, &a2, &b1, &b2).unwrap();
        assert!((value - TWO_SQRT_2).abs() < 1e-6, "value {value}");
    }

    #[test]
    fn chsh_with_identical_settings_degenerates_to_two() {
        let z = spin_observable(0.0, 0.0, 1.0);
        let value = chsh_value(&singlet(), &z, &z, &z, &z).unwrap();
        assert!((value - 2.0).abs() < 1e-12, "value {value}");
    }

    #[test]
    fn chsh_on_product_states_respects_the_classical_bound() {
        let mut rng_seed = 0u64;
        for _ in 0..30 {
            let sigma = DensityOperator::random(2, 1000 + rng_seed);
            let pi = DensityOperator::random(2, 2000 + rng_seed);
            let tau =
                DensityOperator::from_matrix(sigma.matrix().kron(pi.matrix()), 1e-10).unwrap();
            let dir = |seed: u64| {
                let g = random_ginibre(2, seed);
                let (x, y, z) = (g.get(0, 0).re, g.get(0, 1).re, g.get(1, 0).re);
                spin_observable(x, y, z)
            };
            let value = chsh_value(
                &tau,
                &dir(3000 + rng_seed),
                &dir(4000 + rng_seed),
                &dir(5000 + rng_seed),
                &dir(6000 + rng_seed),
            )
            .unwrap();
            assert!(value <= 2.0 + 1e-10, "value {value}");
            rng_seed += 1;
        }
    }

    #[test]
    fn non_dichotomic_observable_is_rejected() {
        let err = correlator(&singlet(), &coin_povm(), &z_pvm()).unwrap_err();
        assert!(matches!(err, QmError::NotDichotomic { .. }));
    }
}
