use std::path::{Path, PathBuf};

use clap::Parser;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::args::{Cli, Command, Format};
use crate::CliError;

/// Contents of a `--config` file. Every key is optional; unknown keys are
/// rejected here and inside `args`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    command: Option<String>,
    format: Option<Format>,
    output: Option<PathBuf>,
    seed: Option<u64>,
    timing: Option<bool>,
    #[serde(default)]
    args: Map<String, Value>,
}

/// A fully resolved run: flags with the config file applied on top.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub timing: bool,
}

impl RunConfig {
    /// Echo of the command arguments for report metadata.
    pub fn args_value(&self) -> Value {
        let v = match &self.command {
            Command::Spectrum(a) => serde_json::to_value(a),
            Command::Evolve(a) => serde_json::to_value(a),
            Command::Leakage(a) => serde_json::to_value(a),
            Command::Momentum(a) => serde_json::to_value(a),
            Command::Bands(a) => serde_json::to_value(a),
            Command::Verify(a) => serde_json::to_value(a),
        };
        v.unwrap_or(Value::Null)
    }
}

fn read_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn overlay<A: Serialize + DeserializeOwned>(base: &A, over: &Map<String, Value>) -> Result<A, CliError> {
    let mut v = serde_json::to_value(base).map_err(|e| CliError::Config(e.to_string()))?;
    let obj = v.as_object_mut().expect("argument structs serialize to objects");
    for (k, val) in over {
        obj.insert(k.clone(), val.clone());
    }
    serde_json::from_value(v).map_err(|e| CliError::Config(format!("config args: {e}")))
}

fn default_command(name: &str) -> Result<Command, CliError> {
    Cli::try_parse_from(["spectra", name])
        .ok()
        .and_then(|c| c.command)
        .ok_or_else(|| CliError::Config(format!("unknown command `{name}`")))
}

pub fn resolve(cli: Cli) -> Result<RunConfig, CliError> {
    let file = match &cli.config {
        Some(p) => read_config(p)?,
        None => ConfigFile::default(),
    };
    let command = match (cli.command, &file.command) {
        (Some(c), Some(name)) if c.name() != name => {
            return Err(CliError::Config(format!("config is for `{name}` but `{}` was requested", c.name())))
        }
        (Some(c), _) => c,
        (None, Some(name)) => default_command(name)?,
        (None, None) => return Err(CliError::Config("no command given".into())),
    };
    let command = match command {
        Command::Spectrum(a) => Command::Spectrum(overlay(&a, &file.args)?),
        Command::Evolve(a) => Command::Evolve(overlay(&a, &file.args)?),
        Command::Leakage(a) => Command::Leakage(overlay(&a, &file.args)?),
        Command::Momentum(a) => Command::Momentum(overlay(&a, &file.args)?),
        Command::Bands(a) => Command::Bands(overlay(&a, &file.args)?),
        Command::Verify(a) => Command::Verify(overlay(&a, &file.args)?),
    };
    Ok(RunConfig {
        command,
        format: file.format.or(cli.format).unwrap_or(Format::Csv),
        output: file.output.or(cli.output),
        seed: file.seed.or(cli.seed).unwrap_or(0),
        timing: file.timing.unwrap_or(cli.timing),
    })
}
