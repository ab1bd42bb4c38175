//! Command implementations behind the `pielou-dyn` binary.
//!
//! Scenarios and certificates are JSON; orbits and sweep grids are CSV.

pub mod error;
pub mod io;
pub mod reproduce;
pub mod scenario;
pub mod sweep;

pub use error::{CliError, CliResult};
pub use reproduce::{reproduce, ExampleId, Reproduction};
pub use scenario::{load_scenario, run_analyze, simulate, LoadedScenario, Scenario};
pub use sweep::{run_sweep, SweepRow, SweepSpec};
