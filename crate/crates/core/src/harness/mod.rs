//! Reproducibility surface: initial conditions, exact reference solutions,
//! error norms with convergence orders, run configuration, CSV artifacts,
//! and the command-line driver.

pub mod cli;
pub mod config;
pub mod csvio;
pub mod ic;
pub mod norms;
pub mod reference;

pub use cli::run_cli;
pub use config::RunConfig;
pub use csvio::{read_state_csv, write_convergence_csv, write_state_csv, CsvState};
pub use ic::{initial_condition, parse_ic, IcSpec, Profile};
pub use norms::{eoc, error_norms, ErrorReport};
pub use reference::{exact_reference, shock_time};
