// SPDX-License-Identifier: MIT OR Apache-2.0

//! Command implementations behind the `segwise` binary.

pub mod args;
pub mod commands;
pub mod error;
pub mod ingest;
pub mod scenario;

pub use commands::{cmd_cost_path, cmd_detect, cmd_simulate, cmd_uq, run_scenario, SimulateOutput};
pub use error::{CliError, CliResult};
pub use ingest::{ingest_bytes, ingest_csv, Ingested};
pub use scenario::Scenario;
