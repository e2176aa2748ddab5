//! Canned examples, the scenario file format, check orchestration, and the
//! demo registry behind the command-line interface.

pub mod canned;
pub mod demos;
pub mod format;
pub mod runner;

pub use canned::{
    chsh_optimal_settings, chsh_value, coin_povm, correlated_joint, correlator,
    independent_joint, singlet, spin_observable, x_pvm, z_pvm,
};
pub use demos::{demo_info, run_demo, DemoInfo, DemoReport, DEMOS};
pub use format::{CheckName, ResolvedScenario, Scenario, DEFAULT_SEED};
pub use runner::{run_scenario, CheckEntry, CheckReport, CONDITION_FLOOR};
