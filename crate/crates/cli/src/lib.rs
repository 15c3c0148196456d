//! Command-line front end for the coverage engine: scenario ingestion,
//! experiment commands, and plot-ready output files.

pub mod commands;
pub mod output;
pub mod scenario;

pub use commands::{cmd_height_sweep, cmd_simulate, CliError, HeightSweepArgs, RisFlag, SimulateArgs};
pub use scenario::{load_scenario, load_scenario_file, ScenarioError, ScenarioFile};
