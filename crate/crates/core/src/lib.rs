//! Finite-dimensional quantum measurement toolkit.
//!
//! Dense complex linear algebra over small Hilbert spaces, density operators,
//! POVMs and joint POVMs on bipartite systems, the joint-measurement
//! probability rule and its marginal/product criteria, conditional state
//! reduction, the von Neumann-Lüders premeasurement model, and a scenario
//! runner that verifies these identities numerically.

pub mod error;
pub mod linops;
pub mod luders;
pub mod measurement;
pub mod observables;
pub mod scenarios;
pub mod states;

pub use error::QmError;
pub use linops::{ComplexMatrix, ProductDims, DEFAULT_TOL};
pub use luders::LudersModel;
pub use measurement::{JointDistribution, OutcomeDistribution};
pub use observables::{CheckOutcome, EquivalenceReport, JointPovm, Povm};
pub use states::{DensityOperator, StateVector, UnitaryOperator};
