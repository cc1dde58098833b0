//! Command-line grammar and its translation into a [`RunConfig`].

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::commands::{run, RunOutput};
use crate::config::{resolve, CommandKind, Env, GlobalFlags, RunConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "mslab", version, about = "Divisor-function mean squares, zeta moments and lemma verifiers")]
pub struct Cli {
    /// TOML file with defaults: top-level cache_dir/threads/seed and per-command tables
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Checkpoint and cache directory [env: MSLAB_CACHE_DIR]
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads [env: MSLAB_THREADS]
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact Σ_{n≤x} f(n)
    Sum(SumArgs),
    /// Error-term scan over a geometric grid, written as CSV
    Scan(ScanArgs),
    /// Main-term polynomial coefficients
    Constants(ConstantsArgs),
    /// Fourth or ratio moment of zeta, written as CSV
    Moments(MomentsArgs),
    /// Estermann zeta checks
    Estermann(EstermannArgs),
    /// Seeded randomized verifier suite
    Verify(VerifyArgs),
    /// SVG plot of a CSV column against x
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SumArgs {
    #[arg(long, value_parser = ["d2", "d4", "dcube"])]
    pub kind: Option<String>,
    #[arg(long)]
    pub x: Option<u64>,
    #[arg(long, value_parser = ["direct", "sublinear"])]
    pub method: Option<String>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_parser = ["d2", "dcube"])]
    pub kind: Option<String>,
    #[arg(long)]
    pub from: Option<u64>,
    #[arg(long)]
    pub to: Option<u64>,
    #[arg(long)]
    pub points: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, value_parser = ["d2", "dcube"])]
    pub series: Option<String>,
    #[arg(long)]
    pub digits: Option<u32>,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[arg(long, value_parser = ["fourth", "ratio"])]
    pub which: Option<String>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstermannArgs {
    /// Complex point, e.g. 0.5+3i
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<i64>,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long, value_parser = ["value", "functional", "laurent"])]
    pub check: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub y_field: Option<String>,
}

fn v<T: serde::Serialize>(x: Option<T>) -> Option<Value> {
    x.map(|x| json!(x))
}

impl Cli {
    pub fn to_config(self, env: &dyn Env) -> CliResult<RunConfig> {
        let global = GlobalFlags {
            config: self.config,
            cache_dir: self.cache_dir,
            threads: self.threads,
        };
        let (kind, flags, defaults): (CommandKind, Vec<(&str, Option<Value>)>, Vec<(&str, Value)>) =
            match self.command {
                Command::Sum(a) => (
                    CommandKind::Sum,
                    vec![("kind", v(a.kind)), ("x", v(a.x)), ("method", v(a.method))],
                    vec![("method", json!("sublinear"))],
                ),
                Command::Scan(a) => (
                    CommandKind::Scan,
                    vec![
                        ("kind", v(a.kind)),
                        ("from", v(a.from)),
                        ("to", v(a.to)),
                        ("points", v(a.points)),
                        ("out", v(a.out)),
                    ],
                    vec![],
                ),
                Command::Constants(a) => (
                    CommandKind::Constants,
                    vec![("series", v(a.series)), ("digits", v(a.digits))],
                    vec![("digits", json!(15))],
                ),
                Command::Moments(a) => (
                    CommandKind::Moments,
                    vec![
                        ("which", v(a.which)),
                        ("k", v(a.k)),
                        ("t-max", v(a.t_max)),
                        ("out", v(a.out)),
                    ],
                    vec![],
                ),
                Command::Estermann(a) => (
                    CommandKind::Estermann,
                    vec![
                        ("s", v(a.s)),
                        ("h", v(a.h)),
                        ("k", v(a.k)),
                        ("check", v(a.check)),
                    ],
                    vec![("check", json!("value"))],
                ),
                Command::Verify(a) => (
                    CommandKind::Verify,
                    vec![
                        ("suite", v(a.suite)),
                        ("trials", v(a.trials)),
                        ("seed", v(a.seed)),
                    ],
                    vec![],
                ),
                Command::Report(a) => (
                    CommandKind::Report,
                    vec![("in", v(a.input)), ("svg", v(a.svg)), ("y-field", v(a.y_field))],
                    vec![],
                ),
            };
        resolve(kind, flags, &defaults, &global, env)
    }
}

/// Exit status plus the bytes destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Full CLI behaviour without touching the process streams.
pub fn main_with<I, T>(argv: I, env: &dyn Env) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            return match e.kind() {
                K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand
                    if e.exit_code() == 0 =>
                {
                    Invocation {
                        code: 0,
                        stdout: e.to_string(),
                        stderr: String::new(),
                    }
                }
                _ => failed(CliError::validation(e.to_string().trim_end().to_string())),
            };
        }
    };
    let outcome: CliResult<RunOutput> = cli.to_config(env).and_then(|cfg| run(&cfg));
    match outcome {
        Ok(out) => Invocation {
            code: out.exit_code(),
            stderr: out
                .failure
                .as_ref()
                .map(|e| format!("{}\n", e.to_json()))
                .unwrap_or_default(),
            stdout: out.stdout,
        },
        Err(e) => failed(e),
    }
}

fn failed(e: CliError) -> Invocation {
    Invocation {
        code: e.exit_code(),
        stdout: String::new(),
        stderr: format!("{}\n", e.to_json()),
    }
}
