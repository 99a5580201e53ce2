//! Command line pipeline around `mudomain-core`: config parsing, CSV and
//! JSON artifacts, and rayon-parallel Brownian exit sampling.

pub mod config;
pub mod output;
pub mod parallel;
pub mod pipeline;
pub mod report;

pub use config::{parse_config, Command, ConfigError, Formats, RunConfig};
pub use parallel::simulate_parallel;
pub use pipeline::{run, ErrorKind, RunError, RunOutcome, EXIT_OK, EXIT_OTHER, EXIT_REFUSED, EXIT_SPEC};
