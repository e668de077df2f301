//! Run configuration and the `key = value` config-file format.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use serde::{Serialize, Serializer};

use crate::model::{PhysParams, SignBranch};
use crate::{Error, Result};

/// Largest accepted truncation cap; dense operators grow as `(n_max+1)^4`.
pub const MAX_N_MAX: usize = 60;
/// Largest accepted quadrature size per axis.
pub const MAX_QUAD_NODES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Ccr,
    Vacuum,
    Spectrum,
    Wavefunctions,
    Improper,
    All,
}

impl Suite {
    /// The concrete suites in canonical order.
    pub const CONCRETE: [Suite; 5] = [
        Suite::Ccr,
        Suite::Vacuum,
        Suite::Spectrum,
        Suite::Wavefunctions,
        Suite::Improper,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Ccr => "ccr",
            Suite::Vacuum => "vacuum",
            Suite::Spectrum => "spectrum",
            Suite::Wavefunctions => "wavefunctions",
            Suite::Improper => "improper",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "ccr" => Ok(Suite::Ccr),
            "vacuum" => Ok(Suite::Vacuum),
            "spectrum" => Ok(Suite::Spectrum),
            "wavefunctions" => Ok(Suite::Wavefunctions),
            "improper" => Ok(Suite::Improper),
            "all" => Ok(Suite::All),
            other => Err(format!(
                "unknown suite {other:?} (expected ccr|vacuum|spectrum|wavefunctions|improper|all)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn name(&self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format {other:?} (expected json|csv)")),
        }
    }
}

fn as_name<S: Serializer, T: fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub n_max: usize,
    pub theta: f64,
    #[serde(serialize_with = "as_name")]
    pub branch: SignBranch,
    pub omega: f64,
    pub gamma: f64,
    pub mass: f64,
    pub hbar: f64,
    pub tol: f64,
    pub margin: usize,
    pub quad_nodes: usize,
    pub out_dir: PathBuf,
    #[serde(serialize_with = "as_name")]
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n_max: 24,
            theta: 0.3,
            branch: SignBranch::Plus,
            omega: 1.0,
            gamma: 0.2,
            mass: 1.0,
            hbar: 1.0,
            tol: 1e-8,
            margin: 2,
            quad_nodes: 64,
            out_dir: PathBuf::from("."),
            format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |name: &'static str, reason: String| Err(Error::InvalidParam { name, reason });
        if !(2..=MAX_N_MAX).contains(&self.n_max) {
            return bad(
                "n_max",
                format!("{} is outside 2..={MAX_N_MAX}", self.n_max),
            );
        }
        if !self.theta.is_finite() {
            return bad("theta", format!("{} is not finite", self.theta));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad("tol", format!("{} is outside (0, 1)", self.tol));
        }
        if 2 * self.margin >= self.n_max {
            return bad(
                "margin",
                format!(
                    "{} leaves no interior at n_max = {}",
                    self.margin, self.n_max
                ),
            );
        }
        if !(1..=MAX_QUAD_NODES).contains(&self.quad_nodes) {
            return bad(
                "quad_nodes",
                format!("{} is outside 1..={MAX_QUAD_NODES}", self.quad_nodes),
            );
        }
        self.params().map(|_| ())
    }

    pub fn params(&self) -> Result<PhysParams> {
        PhysParams::new(self.mass, self.omega, self.gamma, self.hbar)
    }
}

/// Optional values for every [`RunConfig`] field; shared by the flags and
/// the config file.
#[derive(Args, Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    /// Per-mode Fock cap
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Transformation angle for the convergent-regime checks
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Sign branch (plus|minus)
    #[arg(long)]
    pub branch: Option<SignBranch>,
    /// Oscillator frequency
    #[arg(long)]
    pub omega: Option<f64>,
    /// Damping constant (>= 0)
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    /// Upper bound on residual tolerances
    #[arg(long)]
    pub tol: Option<f64>,
    /// Interior-block margin
    #[arg(long)]
    pub margin: Option<usize>,
    /// Gauss-Hermite nodes per axis
    #[arg(long)]
    pub quad_nodes: Option<usize>,
    /// Output directory
    #[arg(long = "out", value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Report format (json|csv)
    #[arg(long)]
    pub format: Option<OutputFormat>,
}

impl Overrides {
    /// Values present in `other` replace those in `self`.
    pub fn merge(&mut self, other: &Overrides) {
        macro_rules! take {
            ($($f:ident),*) => {$(
                if other.$f.is_some() {
                    self.$f = other.$f.clone();
                }
            )*};
        }
        take!(
            n_max, theta, branch, omega, gamma, mass, hbar, tol, margin, quad_nodes, out_dir,
            format
        );
    }

    pub fn apply(&self, cfg: &mut RunConfig) {
        macro_rules! put {
            ($($f:ident),*) => {$(
                if let Some(v) = &self.$f {
                    cfg.$f = v.clone();
                }
            )*};
        }
        put!(
            n_max, theta, branch, omega, gamma, mass, hbar, tol, margin, quad_nodes, out_dir,
            format
        );
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: FromStr>(v: &str) -> std::result::Result<T, String>
        where
            T::Err: fmt::Display,
        {
            v.parse::<T>().map_err(|e| format!("{v:?}: {e}"))
        }
        let dup = |was: bool| {
            if was {
                Err(format!("duplicate key {key:?}"))
            } else {
                Ok(())
            }
        };
        match key {
            "n_max" => dup(self.n_max.replace(num(value)?).is_some()),
            "theta" => dup(self.theta.replace(num(value)?).is_some()),
            "branch" => dup(self.branch.replace(num(value)?).is_some()),
            "omega" => dup(self.omega.replace(num(value)?).is_some()),
            "gamma" => dup(self.gamma.replace(num(value)?).is_some()),
            "mass" => dup(self.mass.replace(num(value)?).is_some()),
            "hbar" => dup(self.hbar.replace(num(value)?).is_some()),
            "tol" => dup(self.tol.replace(num(value)?).is_some()),
            "margin" => dup(self.margin.replace(num(value)?).is_some()),
            "quad_nodes" => dup(self.quad_nodes.replace(num(value)?).is_some()),
            "out_dir" => {
                if value.is_empty() {
                    return Err("empty out_dir".into());
                }
                dup(self.out_dir.replace(PathBuf::from(value)).is_some())
            }
            "format" => dup(self.format.replace(num(value)?).is_some()),
            other => Err(format!("unknown key {other:?}")),
        }
    }
}

/// Parses `key = value` lines. `#` starts a comment; blank lines are
/// ignored; keys are the [`RunConfig`] field names and may appear once.
pub fn parse_config(text: &str) -> Result<Overrides> {
    let mut out = Overrides::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |reason: String| Error::Config {
            line: i + 1,
            reason,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got {line:?}")))?;
        out.set(key.trim(), value.trim()).map_err(err)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = RunConfig::default();
        c.validate().unwrap();
        assert_eq!(c.params().unwrap(), PhysParams::default());
    }

    #[test]
    fn parses_keys_comments_and_blank_lines() {
        let text = "# run\n\nn_max = 12\ntheta=-0.2  # inline\nbranch = minus\nformat = csv\nout_dir = /tmp/x\n";
        let o = parse_config(text).unwrap();
        assert_eq!(o.n_max, Some(12));
        assert_eq!(o.theta, Some(-0.2));
        assert_eq!(o.branch, Some(SignBranch::Minus));
        assert_eq!(o.format, Some(OutputFormat::Csv));
        assert_eq!(o.out_dir, Some(PathBuf::from("/tmp/x")));
        assert_eq!(o.tol, None);
    }

    #[test]
    fn reports_the_offending_line() {
        for (text, line) in [
            ("n_max = 4\nbogus = 1\n", 2),
            ("tol\n", 1),
            ("\n\nn_max = many\n", 3),
            ("theta = 0.1\ntheta = 0.2\n", 2),
            ("format = xml\n", 1),
        ] {
            match parse_config(text) {
                Err(Error::Config { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn later_overrides_win() {
        let mut file = parse_config("n_max = 10\ntol = 1e-6\n").unwrap();
        let flags = Overrides {
            n_max: Some(14),
            ..Overrides::default()
        };
        file.merge(&flags);
        let mut cfg = RunConfig::default();
        file.apply(&mut cfg);
        assert_eq!(cfg.n_max, 14);
        assert_eq!(cfg.tol, 1e-6);
    }

    #[test]
    fn validation_ranges() {
        let with = |f: fn(&mut RunConfig)| {
            let mut c = RunConfig::default();
            f(&mut c);
            c.validate()
        };
        assert!(with(|c| c.n_max = 1).is_err());
        assert!(with(|c| c.n_max = MAX_N_MAX + 1).is_err());
        assert!(with(|c| c.theta = f64::NAN).is_err());
        assert!(with(|c| c.tol = 0.0).is_err());
        assert!(with(|c| c.margin = 12).is_err());
        assert!(with(|c| c.quad_nodes = 0).is_err());
        assert!(with(|c| c.mass = -1.0).is_err());
        assert!(with(|c| c.gamma = 0.0).is_ok());
    }

    #[test]
    fn names_round_trip() {
        for s in Suite::CONCRETE.iter().chain([Suite::All].iter()) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
        }
        assert!("spectra".parse::<Suite>().is_err());
        assert_eq!("csv".parse::<OutputFormat>().unwrap(), OutputFormat::Csv);
    }
}
