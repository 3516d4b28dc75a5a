//! Command-line companion of `sltx-core`: the JSON config format, CSV
//! tables, a threaded executor for the eigenvalue scan and the `verify`
//! property suite.

// `!(x > 0.0)` is deliberate: it rejects NaN together with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod exec;
pub mod output;
pub mod report;
pub mod verify;

pub use commands::{CommandError, CommandOutput, Status};
pub use config::{ConfigError, LoadedConfig};
