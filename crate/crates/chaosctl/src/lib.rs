//! Configuration, model registry, output formats and command execution for
//! the `chaosctl` command-line tool.

pub mod config;
pub mod error;
pub mod output;
pub mod registry;
pub mod run;

pub use config::{Command, RunConfig};
pub use error::{CliError, CliResult};
pub use output::Report;
pub use registry::Registry;
pub use run::{execute, run, Outputs};
