//! Run configuration: command-line flags layered over environment variables,
//! a TOML config file and built-in defaults, in that order of precedence.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult, ErrorKind};

pub const ENV_CACHE_DIR: &str = "MSLAB_CACHE_DIR";
pub const ENV_THREADS: &str = "MSLAB_THREADS";
pub const DEFAULT_CACHE_DIR: &str = ".mslab-cache";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Sum,
    Scan,
    Constants,
    Moments,
    Estermann,
    Verify,
    Report,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Sum => "sum",
            CommandKind::Scan => "scan",
            CommandKind::Constants => "constants",
            CommandKind::Moments => "moments",
            CommandKind::Estermann => "estermann",
            CommandKind::Verify => "verify",
            CommandKind::Report => "report",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    /// Flag name (as spelled on the command line) to value.
    pub params: BTreeMap<String, Value>,
    pub cache_dir: PathBuf,
    pub seed: u64,
    pub threads: usize,
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.threads == 0 {
            return Err(CliError::validation("threads must be >= 1"));
        }
        if self.cache_dir.exists() && !self.cache_dir.is_dir() {
            return Err(CliError::validation(format!(
                "cache dir {} exists and is not a directory",
                self.cache_dir.display()
            )));
        }
        Ok(())
    }

    fn raw(&self, name: &str) -> Option<&Value> {
        self.params.get(name).filter(|v| !v.is_null())
    }

    pub fn required<T: for<'de> Deserialize<'de>>(&self, name: &str) -> CliResult<T> {
        match self.raw(name) {
            Some(v) => decode(name, v),
            None => Err(CliError::validation(format!(
                "missing required option --{name} for `{}`",
                self.command.name()
            ))),
        }
    }

    pub fn optional<T: for<'de> Deserialize<'de>>(&self, name: &str) -> CliResult<Option<T>> {
        self.raw(name).map(|v| decode(name, v)).transpose()
    }
}

fn decode<T: for<'de> Deserialize<'de>>(name: &str, v: &Value) -> CliResult<T> {
    T::deserialize(v).map_err(|e| CliError::validation(format!("invalid value for --{name}: {v} ({e})")))
}

/// Contents of a `--config` TOML file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    pub cache_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    /// Per-command tables, e.g. `[constants] digits = 12`.
    pub commands: BTreeMap<String, BTreeMap<String, Value>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::new(ErrorKind::Io, format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::parse(&text).map_err(|e| {
            CliError::validation(format!("config {}: {}", path.display(), e.message))
        })
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::validation(e.to_string()))?;
        let mut out = FileConfig::default();
        for (key, value) in table {
            match key.as_str() {
                "cache_dir" | "cache-dir" => {
                    out.cache_dir = Some(PathBuf::from(expect_str(&key, &value)?));
                }
                "threads" => out.threads = Some(expect_uint(&key, &value)? as usize),
                "seed" => out.seed = Some(expect_uint(&key, &value)?),
                _ => {
                    let toml::Value::Table(t) = value else {
                        return Err(CliError::validation(format!(
                            "unknown top-level key `{key}`"
                        )));
                    };
                    let entries = t
                        .into_iter()
                        .map(|(k, v)| Ok((k.replace('_', "-"), toml_to_json(&v)?)))
                        .collect::<CliResult<_>>()?;
                    out.commands.insert(key, entries);
                }
            }
        }
        Ok(out)
    }

    pub fn command_value(&self, command: CommandKind, name: &str) -> Option<&Value> {
        self.commands.get(command.name()).and_then(|t| t.get(name))
    }
}

fn expect_str<'a>(key: &str, v: &'a toml::Value) -> CliResult<&'a str> {
    v.as_str()
        .ok_or_else(|| CliError::validation(format!("`{key}` must be a string")))
}

fn expect_uint(key: &str, v: &toml::Value) -> CliResult<u64> {
    v.as_integer()
        .filter(|&i| i >= 0)
        .map(|i| i as u64)
        .ok_or_else(|| CliError::validation(format!("`{key}` must be a non-negative integer")))
}

fn toml_to_json(v: &toml::Value) -> CliResult<Value> {
    Ok(match v {
        toml::Value::String(s) => Value::from(s.clone()),
        toml::Value::Integer(i) => Value::from(*i),
        toml::Value::Float(f) => Value::from(*f),
        toml::Value::Boolean(b) => Value::from(*b),
        other => {
            return Err(CliError::validation(format!(
                "unsupported config value {other}"
            )))
        }
    })
}

/// Process environment as seen by the resolver; injectable for tests.
pub trait Env {
    fn var(&self, key: &str) -> Option<String>;
}

pub struct ProcessEnv;

impl Env for ProcessEnv {
    fn var(&self, key: &str) -> Option<String> {
        std::env::var(key).ok()
    }
}

impl Env for BTreeMap<String, String> {
    fn var(&self, key: &str) -> Option<String> {
        self.get(key).cloned()
    }
}

/// Global options as given on the command line.
#[derive(Debug, Clone, Default)]
pub struct GlobalFlags {
    pub config: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub threads: Option<usize>,
}

/// Builds a [`RunConfig`] from flags, environment, config file and defaults.
///
/// `flags` holds the command's own options; `None` means not given.
pub fn resolve(
    command: CommandKind,
    flags: Vec<(&str, Option<Value>)>,
    defaults: &[(&str, Value)],
    global: &GlobalFlags,
    env: &dyn Env,
) -> CliResult<RunConfig> {
    let file = match &global.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let mut params = BTreeMap::new();
    for (name, flag) in flags {
        let value = flag
            .or_else(|| file.command_value(command, name).cloned())
            .or_else(|| {
                defaults
                    .iter()
                    .find(|(n, _)| *n == name)
                    .map(|(_, v)| v.clone())
            });
        params.insert(name.to_string(), value.unwrap_or(Value::Null));
    }

    let env_threads = match env.var(ENV_THREADS) {
        Some(s) => Some(s.trim().parse::<usize>().map_err(|_| {
            CliError::validation(format!("{ENV_THREADS} must be a positive integer, got `{s}`"))
        })?),
        None => None,
    };
    let threads = global.threads.or(env_threads).or(file.threads).unwrap_or(1);
    let cache_dir = global
        .cache_dir
        .clone()
        .or_else(|| env.var(ENV_CACHE_DIR).map(PathBuf::from))
        .or(file.cache_dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
    // the verify suites take --seed directly; other commands may set it in the file
    let seed = match params.get("seed").and_then(Value::as_u64) {
        Some(s) => s,
        None => file.seed.unwrap_or(0),
    };
    let config = RunConfig {
        command,
        params,
        cache_dir,
        seed,
        threads,
    };
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn file_tables_are_command_scoped() {
        let f = FileConfig::parse("threads = 3\n[constants]\ndigits = 8\n").unwrap();
        assert_eq!(f.threads, Some(3));
        assert_eq!(f.command_value(CommandKind::Constants, "digits"), Some(&json!(8)));
        assert_eq!(f.command_value(CommandKind::Sum, "digits"), None);
    }

    #[test]
    fn snake_case_keys_map_to_flag_names() {
        let f = FileConfig::parse("[moments]\nt_max = 100.0\n").unwrap();
        assert_eq!(f.command_value(CommandKind::Moments, "t-max"), Some(&json!(100.0)));
    }

    #[test]
    fn bad_files_are_validation_errors() {
        assert!(FileConfig::parse("threads = -1").is_err());
        assert!(FileConfig::parse("bogus = 1").is_err());
        assert!(FileConfig::parse("not toml [").is_err());
    }

    #[test]
    fn environment_between_flag_and_file() {
        let env: BTreeMap<String, String> =
            [(ENV_THREADS.to_string(), "5".to_string())].into_iter().collect();
        let global = GlobalFlags::default();
        let cfg = resolve(CommandKind::Sum, vec![], &[], &global, &env).unwrap();
        assert_eq!(cfg.threads, 5);
        let global = GlobalFlags {
            threads: Some(2),
            ..Default::default()
        };
        let cfg = resolve(CommandKind::Sum, vec![], &[], &global, &env).unwrap();
        assert_eq!(cfg.threads, 2);
    }
}
