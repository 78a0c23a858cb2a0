//! Command-line front end for `bellswitch-core`: run configurations,
//! transcript and table encodings, and command dispatch.

pub mod angle;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod num;

pub use config::{Command, Format, Output, PartialConfig, RunConfig};
pub use error::{CliError, Result, Status};
