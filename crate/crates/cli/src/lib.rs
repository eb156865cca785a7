//! Command-line front end of the experiment library: argument parsing,
//! job execution, CSV/JSON reports and batch sweeps.

pub mod cli;
pub mod error;
pub mod jobs;
pub mod output;
pub mod sweep;

pub use cli::{run, DEFAULT_SEED};
pub use error::{CliError, Exit};
