//! Library half of the `nichols` command-line tool.

pub mod commands;
pub mod spec;

pub use commands::{cmd_dims, cmd_gk, cmd_pair, cmd_unroll, cmd_verify, CliError, Outcome};
pub use spec::{SpecDocument, SpecError};
