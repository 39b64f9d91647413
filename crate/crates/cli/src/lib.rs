//! Front end for computing DT series and running the verification checks.
//!
//! Exact rationals are always written as `"p/q"` strings (or plain integers);
//! only the `gwmm` check reports floating-point values, alongside its
//! tolerance.

mod checks;
mod output;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use toric_dt::dtsum::{self, DtError, QVSeries};
use toric_dt::geometry::{self, GeometryError, ToricCY3, BUILTIN_NAMES};

pub use checks::{run_check, CheckReport};
pub use output::{render_series, render_verify, SeriesRow, VerifyReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("geometry: {0}")]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Dt(#[from] DtError),
    #[error("invalid bounds: {0}")]
    Bounds(String),
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("unknown format {0:?}")]
    UnknownFormat(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(CliError::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    Degree0,
    SignOracle,
    Rationality,
    GwDt,
    Hodge,
    GwMm,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::Degree0,
        Check::SignOracle,
        Check::Rationality,
        Check::GwDt,
        Check::Hodge,
        Check::GwMm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Degree0 => "degree0",
            Check::SignOracle => "sign-oracle",
            Check::Rationality => "rationality",
            Check::GwDt => "gwdt",
            Check::Hodge => "hodge",
            Check::GwMm => "gwmm",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::UnknownCheck(s.to_string()))
    }
}

/// Everything a single invocation depends on.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Built-in name or path to a geometry file.
    pub geometry: String,
    pub n_max: i64,
    /// One bound per class; a single entry applies to every class; `None`
    /// means degree 0 only.
    pub beta_max: Option<Vec<u32>>,
    pub reduced: bool,
    pub pade: Option<(usize, usize)>,
    pub checks: Vec<Check>,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(geometry: impl Into<String>) -> Self {
        Self {
            geometry: geometry.into(),
            n_max: 6,
            beta_max: None,
            reduced: false,
            pade: None,
            checks: Vec::new(),
            format: Format::Json,
            seed: 0,
        }
    }
}

/// Padé bounds used when none are given.
pub const DEFAULT_PADE: (usize, usize) = (1, 2);

/// Resolved geometry and degree bound.
pub struct Prepared {
    pub name: String,
    pub geometry: ToricCY3,
    pub beta_max: Vec<u32>,
}

pub fn prepare(config: &RunConfig) -> Result<Prepared, CliError> {
    let geometry = if BUILTIN_NAMES.contains(&config.geometry.as_str()) {
        geometry::builtin(&config.geometry)?
    } else {
        geometry::load(&config.geometry)?
    };
    if config.n_max < 0 {
        return Err(CliError::Bounds(format!(
            "n-max must be nonnegative, got {}",
            config.n_max
        )));
    }
    let classes = geometry.num_classes();
    let beta_max = match &config.beta_max {
        None => vec![0; classes],
        Some(b) if b.len() == classes => b.clone(),
        Some(b) if b.len() == 1 => vec![b[0]; classes],
        Some(b) => {
            return Err(CliError::Bounds(format!(
                "beta-max has {} entries but the geometry has {classes} classes",
                b.len()
            )))
        }
    };
    Ok(Prepared {
        name: config.geometry.clone(),
        geometry,
        beta_max,
    })
}

/// The DT series, optionally reduced, for a prepared configuration.
pub fn compute_series(p: &Prepared, n_max: i64, reduced: bool) -> Result<QVSeries, CliError> {
    let z = dtsum::z_dt(&p.geometry, &p.beta_max, n_max)?;
    Ok(if reduced { dtsum::reduced(&z, None)? } else { z })
}

/// `p/q`, or a bare integer.
pub fn rational_string(r: &BigRational) -> String {
    r.to_string()
}

/// Runs `series`, returning the rendered output.
pub fn cmd_series(config: &RunConfig) -> Result<String, CliError> {
    let p = prepare(config)?;
    let series = compute_series(&p, config.n_max, config.reduced)?;
    let rational = config.pade.map(|bounds| {
        series
            .parts
            .iter()
            .filter(|(beta, _)| beta.iter().any(|&b| b > 0))
            .map(|(beta, part)| {
                let r = dtsum::reconstruct_part(part, bounds, dtsum::DEFAULT_PADE_MARGIN);
                (beta.clone(), r)
            })
            .collect::<Vec<_>>()
    });
    Ok(render_series(config, &p, &series, rational.as_deref()))
}

/// Runs `verify`; the flag is whether every selected check passed.
pub fn cmd_verify(config: &RunConfig) -> Result<(String, bool), CliError> {
    let p = prepare(config)?;
    let checks = if config.checks.is_empty() {
        Check::ALL.to_vec()
    } else {
        config.checks.clone()
    };
    let reports: Vec<CheckReport> = checks
        .iter()
        .map(|&c| run_check(c, config, &p))
        .collect::<Result<_, _>>()?;
    let passed = reports.iter().all(|r| r.passed);
    Ok((render_verify(config, &p, &reports), passed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
        }
        assert!("everything".parse::<Check>().is_err());
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert!("yaml".parse::<Format>().is_err());
    }

    #[test]
    fn single_bound_applies_to_every_class() {
        let config = RunConfig {
            beta_max: Some(vec![2]),
            ..RunConfig::new("local_p1p1")
        };
        assert_eq!(prepare(&config).unwrap().beta_max, vec![2, 2]);
        let none = prepare(&RunConfig::new("local_p1p1")).unwrap();
        assert_eq!(none.beta_max, vec![0, 0]);
    }

    #[test]
    fn series_json_records_the_seed() {
        let config = RunConfig {
            n_max: 2,
            seed: 99,
            ..RunConfig::new("c3")
        };
        let out = cmd_series(&config).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["seed"], 99);
        assert_eq!(v["rows"][2]["coefficient"], "3");
    }
}
