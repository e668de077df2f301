//! Check reports and their JSON / CSV files.

use std::fs;
use std::path::PathBuf;

use serde::Serialize;

use super::config::{OutputFormat, RunConfig};
use crate::{Error, Result, C64};

pub const CSV_HEADER: [&str; 6] = [
    "check_id",
    "measured_re",
    "measured_im",
    "tolerance",
    "pass",
    "elapsed",
];

/// How a measured value is judged.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Criterion {
    /// `|measured| <= bound`.
    AtMost(f64),
    /// Round-off limited residual: `|measured| <= min(bound, config.tol)`.
    Residual(f64),
    /// `measured > bound` (real part).
    Above(f64),
    /// `measured < bound` (real part).
    Below(f64),
    /// `|measured - target| <= rel * |target|`.
    Relative { target: f64, rel: f64 },
    /// `|measured - target| <= tol`.
    Near { target: C64, tol: f64 },
}

impl Criterion {
    /// The tolerance reported for this criterion under `config`.
    pub fn tolerance(&self, config: &RunConfig) -> f64 {
        match *self {
            Criterion::AtMost(b) | Criterion::Above(b) | Criterion::Below(b) => b,
            Criterion::Residual(b) => b.min(config.tol),
            Criterion::Relative { rel, .. } => rel,
            Criterion::Near { tol, .. } => tol,
        }
    }

    pub fn passes(&self, measured: C64, config: &RunConfig) -> bool {
        if !(measured.re.is_finite() && measured.im.is_finite()) {
            return false;
        }
        let tol = self.tolerance(config);
        match *self {
            Criterion::AtMost(_) | Criterion::Residual(_) => measured.norm() <= tol,
            Criterion::Above(b) => measured.re > b,
            Criterion::Below(b) => measured.re < b,
            Criterion::Relative { target, rel } => {
                (measured.re - target).abs() <= rel * target.abs()
            }
            Criterion::Near { target, tol } => (measured - target).norm() <= tol,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Measured {
    pub re: Option<f64>,
    pub im: Option<f64>,
}

impl From<C64> for Measured {
    fn from(z: C64) -> Self {
        let finite = |x: f64| x.is_finite().then_some(x);
        Measured {
            re: finite(z.re),
            im: finite(z.im),
        }
    }
}

/// One executed check. Serialized keys keep this field order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub params: RunConfig,
    pub measured: Measured,
    pub tolerance: f64,
    pub pass: bool,
    pub elapsed: f64,
    pub error: Option<String>,
}

impl CheckReport {
    /// Invariant name: the id up to the parameter list.
    pub fn invariant(&self) -> &str {
        self.check_id.split('[').next().unwrap_or(&self.check_id)
    }
}

fn write(path: PathBuf, bytes: &[u8]) -> Result<PathBuf> {
    fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

pub fn to_json(reports: &[CheckReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

pub fn to_csv(reports: &[CheckReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in reports {
        w.write_record([
            r.check_id.clone(),
            opt(r.measured.re),
            opt(r.measured.im),
            r.tolerance.to_string(),
            r.pass.to_string(),
            r.elapsed.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// Writes `report.json` or `report.csv` into `config.out_dir`.
pub fn emit(reports: &[CheckReport], config: &RunConfig) -> Result<Vec<PathBuf>> {
    let dir = &config.out_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let file = match config.format {
        OutputFormat::Json => write(dir.join("report.json"), to_json(reports).as_bytes())?,
        OutputFormat::Csv => write(dir.join("report.csv"), to_csv(reports).as_bytes())?,
    };
    Ok(vec![file])
}
