//! Command surface of the `twisted-ore` tool: spec-file ingestion,
//! complex export and the `verify`, `resolve`, `check` and `example4`
//! commands. Exit codes: 0 all checks pass, 1 a check failed, 2 the input
//! was rejected.

pub mod commands;
pub mod complex_file;
pub mod spec_file;

pub use commands::{cmd_check, cmd_example4, cmd_resolve, cmd_verify, Example4Args, Exit, Outcome, Preset};
