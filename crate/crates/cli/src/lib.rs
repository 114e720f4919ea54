//! File formats, Gantt and report emitters, benchmark suites and the
//! command-line front end for [`clonesched_core`].

pub mod bench;
pub mod cli;
pub mod exec;
pub mod formats;
pub mod gantt;
pub mod report;

pub use cli::{run, Cli, CliError};
