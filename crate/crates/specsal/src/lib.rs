//! File formats, reports, parallel runners and the `specsal` command line
//! on top of `specsal-core`.

pub mod cli;
pub mod commands;
pub mod display;
pub mod error;
pub mod io;
pub mod parallel;
pub mod pgm;
pub mod report;
pub mod sidecar;

pub use cli::Cli;
pub use commands::{cmd_evaluate, cmd_generate, cmd_sweep, cmd_transform, run};
pub use error::{CliError, CliResult};
