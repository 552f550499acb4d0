//! JSON run configuration shared by every subcommand.

use std::path::{Path, PathBuf};

use expfun::inequalities::{DEFAULT_GRID, MIN_GRID};
use expfun::moments::{Atom, Density};
use expfun::{FrequencyVector, Measure, PolynomialCoeffs};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{config_error, CliResult};

pub const GRID_ENV: &str = "EXPFUN_GRID";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum FrequencyEntry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasureSpec {
    Atoms { support: [f64; 2], atoms: Vec<[f64; 2]> },
    Density { support: [f64; 2], expr: String },
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub frequencies: Vec<FrequencyEntry>,
    pub m: Option<usize>,
    pub interval: Option<[f64; 2]>,
    pub points: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub k: Option<usize>,
    pub top: Option<usize>,
    pub polynomial: Option<Vec<f64>>,
    pub measure: Option<MeasureSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| config_error(e.to_string()))
    }

    pub fn frequency_vector(&self) -> CliResult<FrequencyVector> {
        let entries = self
            .frequencies
            .iter()
            .map(|f| match *f {
                FrequencyEntry::Real(re) => Complex64::new(re, 0.0),
                FrequencyEntry::Complex([re, im]) => Complex64::new(re, im),
            })
            .collect();
        FrequencyVector::new(entries).map_err(|e| config_error(e.to_string()))
    }

    pub fn interval(&self) -> CliResult<(f64, f64)> {
        let [lo, hi] = self.interval.ok_or_else(|| config_error("missing field `interval`"))?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(config_error(format!("interval [{lo}, {hi}] must be finite with lo < hi")));
        }
        Ok((lo, hi))
    }

    /// Explicit `grid`, else `EXPFUN_GRID`, else the library default.
    pub fn grid(&self) -> CliResult<usize> {
        let grid = match self.grid {
            Some(g) => g,
            None => match std::env::var(GRID_ENV) {
                Ok(v) => v.trim().parse().map_err(|_| config_error(format!("{GRID_ENV}={v} is not an integer")))?,
                Err(_) => DEFAULT_GRID,
            },
        };
        if grid < MIN_GRID {
            return Err(config_error(format!("grid {grid} below minimum {MIN_GRID}")));
        }
        Ok(grid)
    }

    pub fn samples(&self, default: usize) -> CliResult<usize> {
        let samples = self.samples.unwrap_or(default);
        if samples < 2 {
            return Err(config_error("samples must be at least 2"));
        }
        Ok(samples)
    }

    pub fn tol(&self, default: f64) -> CliResult<f64> {
        let tol = self.tol.unwrap_or(default);
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(config_error(format!("tol {tol} must be finite and non-negative")));
        }
        Ok(tol)
    }

    pub fn polynomial(&self) -> CliResult<Option<PolynomialCoeffs>> {
        self.polynomial
            .as_ref()
            .map(|c| PolynomialCoeffs::new(c.clone()).map_err(|e| config_error(e.to_string())))
            .transpose()
    }

    pub fn measure(&self) -> CliResult<Measure> {
        let spec = self.measure.as_ref().ok_or_else(|| config_error("missing field `measure`"))?;
        let measure = match spec {
            MeasureSpec::Atoms { support: [a, b], atoms } => Measure::atoms(
                (*a, *b),
                atoms.iter().map(|&[location, weight]| Atom { location, weight }).collect(),
            ),
            MeasureSpec::Density { support: [a, b], expr } => Measure::density((*a, *b), parse_density(expr, *a, *b)?),
        };
        measure.map_err(|e| config_error(e.to_string()))
    }
}

/// `uniform`, `truncexp(rate)` or `poly(c0, c1, …)`.
pub fn parse_density(expr: &str, a: f64, b: f64) -> CliResult<Density> {
    let expr = expr.trim();
    if expr == "uniform" {
        return Ok(Density::uniform(a, b));
    }
    let (name, args) = expr
        .strip_suffix(')')
        .and_then(|s| s.split_once('('))
        .ok_or_else(|| config_error(format!("unknown density `{expr}`")))?;
    let values = args
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| config_error(format!("bad number `{}` in `{expr}`", t.trim()))))
        .collect::<CliResult<Vec<f64>>>()?;
    match (name.trim(), values.as_slice()) {
        ("truncexp", &[rate]) if rate.is_finite() => Ok(Density::truncated_exponential(rate, a, b)),
        ("poly", coeffs) if !coeffs.is_empty() => {
            let p = PolynomialCoeffs::new(coeffs.to_vec()).map_err(|e| config_error(e.to_string()))?;
            Ok(Density::polynomial(p))
        }
        _ => Err(config_error(format!("unknown density `{expr}`"))),
    }
}
