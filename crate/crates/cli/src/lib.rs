//! Command-line pipeline for generation adequacy studies: CSV ingestion,
//! record transforms, synthetic data generation, and subcommands wiring the
//! risk and capacity-value analyses to JSON/CSV artifacts.

pub mod commands;
pub mod ingest;
pub mod scenario;
pub mod synth;
pub mod transform;

pub use commands::{run, CliError};
