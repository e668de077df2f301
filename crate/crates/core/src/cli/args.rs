//! Command-line parsing: positional suite, optional config file, flag overrides.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

use super::config::{parse_config, Overrides, RunConfig, Suite};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "bateman",
    version,
    about = "Run numerical checks of the quantized damped oscillator"
)]
pub struct Cli {
    /// Suite to run: ccr | vacuum | spectrum | wavefunctions | improper | all
    pub suite: Suite,
    /// `key = value` config file; flags take precedence over it
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Invocation {
    pub suite: Suite,
    pub config: RunConfig,
}

impl Cli {
    /// Defaults, then the config file, then the flags; the result is validated.
    pub fn resolve(&self) -> Result<Invocation> {
        let mut layered = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                parse_config(&text)?
            }
            None => Overrides::default(),
        };
        layered.merge(&self.overrides);
        let mut config = RunConfig::default();
        layered.apply(&mut config);
        config.validate()?;
        Ok(Invocation {
            suite: self.suite,
            config,
        })
    }
}

/// Parses `args` (program name first). Clap errors, including `--help`,
/// come back unchanged so the caller can print them.
pub fn parse_invocation<I, T>(args: I) -> std::result::Result<Result<Invocation>, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Ok(Cli::try_parse_from(args)?.resolve())
}
