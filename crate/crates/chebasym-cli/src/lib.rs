//! Command-line front end for `chebasym`: single evaluations, error maps
//! over complex grids, convergence tables and the invariant suite.

pub mod commands;
pub mod config;
pub mod error;
pub mod invariants;
pub mod literal;
pub mod output;

pub use config::{PartialConfig, RunConfig};
pub use error::{CliError, CliResult};
