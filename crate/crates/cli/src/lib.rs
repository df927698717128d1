//! File formats, reports and command dispatch for the `hcf` binary.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra_file;
pub mod commands;
pub mod emit;
pub mod error;
pub mod report;

pub use algebra_file::{emit_algebra, parse_algebra, parse_algebra_str, to_file, AlgebraFile, BracketEntry, ParsedAlgebra};
pub use commands::{run, Cli, Command};
pub use emit::{plots_from_csv, read_plot_columns, trace_csv};
pub use error::{CliError, Result, EXIT_NUMERICAL, EXIT_VALIDATION};
pub use report::{Payload, RunReport, TraceRow};
