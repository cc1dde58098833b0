//! Command-line front end over `mslab-core`.

pub mod args;
pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;
pub mod verify;

pub use args::{main_with, Cli, Invocation};
pub use commands::{run, RunOutput};
pub use config::{resolve, CommandKind, GlobalFlags, RunConfig};
pub use error::{CliError, CliResult, ErrorKind};
pub use output::{emit_scan_csv, ReportArtifact, Summary, Table};
pub use svg::{emit_svg_plot, render_svg};
