//! Command-line driver: one JSON document configures the model, the
//! simulation, the suite and the output directory.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::{parse_config, RunConfig, Suite};
pub use error::CliError;
