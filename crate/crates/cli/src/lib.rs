//! Command-line front end for `hil-core`: trace files, synthetic traces,
//! experiment commands and brute-force oracles.
//!
//! Exit codes: 0 on success, 2 for usage errors and out-of-range
//! parameters, 3 for unreadable or malformed data. The default master seed
//! comes from the `HIL_SEED` environment variable.

pub mod commands;
pub mod error;
pub mod grid;
pub mod oracle;
pub mod output;
pub mod synthetic;
pub mod trace_file;

pub use commands::{execute, Cli};
pub use error::{CliError, Result, EXIT_DATA, EXIT_USAGE};
