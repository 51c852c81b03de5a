//! Command-line front end for `glued-core`: group and vertex specs, the
//! subcommands, the parallel LEF driver and the seeded property suites.

pub mod cli;
pub mod error;
pub mod parallel;
pub mod spec;
pub mod suite;

pub use error::{CliError, CliResult};
