//! Command-line front end for `nilentropy-core`: input documents, the
//! `bound`, `simulate` and `verify` commands, and their reports.

pub mod commands;
pub mod input;
pub mod report;
pub mod verify;

pub use commands::{cmd_bound, cmd_simulate, BoundOptions, CliError, SimulateOptions};
pub use input::{parse_document, InputDocument, ParseError};
pub use report::ReportDocument;
pub use verify::{cmd_verify, VerifyOptions, VerifySummary};
