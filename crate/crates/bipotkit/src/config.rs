//! Law configuration: JSON file plus command-line overrides.

use std::path::Path;

use bipotkit_core::laws::{ElasticParams, FrictionParams, PlasticParams};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::law::Law;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum LawKind {
    Elastic,
    Plastic,
    Coulomb,
    Friction,
}

/// Every field is optional; missing ones take the defaults below.
///
/// ```json
/// {"law": "plastic", "lambda": 1.0, "epsilon": 0.25, "dim": 2, "seed": 7}
/// ```
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub law: Option<LawKind>,
    pub lambda: Option<f64>,
    pub epsilon: Option<f64>,
    pub dim: Option<usize>,
    pub mu: Option<f64>,
    pub mu_minus: Option<f64>,
    pub mu_plus: Option<f64>,
    /// Sampling box `[-h, h]` on every axis.
    pub half_width: Option<f64>,
    /// Points per axis of the `graph` lattice.
    pub lattice_points: Option<usize>,
    /// Random samples per check in `verify`.
    pub samples: Option<usize>,
    /// Points per axis of the conjugate oracle grid.
    pub conjugate_points: Option<usize>,
    /// Half width of the conjugate oracle grid.
    pub conjugate_half_width: Option<f64>,
    /// Value above which a grid conjugate counts as `+inf`. Defaults to half
    /// the smallest growth the grid guarantees at the exterior probes.
    pub infinity_threshold: Option<f64>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|source| CliError::ParseConfig { path: path.into(), source })
    }

    /// Fields set in `other` win.
    pub fn overridden_by(self, other: &ConfigFile) -> ConfigFile {
        ConfigFile {
            law: other.law.or(self.law),
            lambda: other.lambda.or(self.lambda),
            epsilon: other.epsilon.or(self.epsilon),
            dim: other.dim.or(self.dim),
            mu: other.mu.or(self.mu),
            mu_minus: other.mu_minus.or(self.mu_minus),
            mu_plus: other.mu_plus.or(self.mu_plus),
            half_width: other.half_width.or(self.half_width),
            lattice_points: other.lattice_points.or(self.lattice_points),
            samples: other.samples.or(self.samples),
            conjugate_points: other.conjugate_points.or(self.conjugate_points),
            conjugate_half_width: other.conjugate_half_width.or(self.conjugate_half_width),
            infinity_threshold: other.infinity_threshold.or(self.infinity_threshold),
            tol: other.tol.or(self.tol),
            seed: other.seed.or(self.seed),
        }
    }
}

pub const DEFAULT_LAMBDA: f64 = 1.0;
pub const DEFAULT_EPSILON: f64 = 0.25;
pub const DEFAULT_DIM: usize = 2;
pub const DEFAULT_MU: f64 = 0.3;
pub const DEFAULT_MU_MINUS: f64 = 0.2;
pub const DEFAULT_MU_PLUS: f64 = 0.4;
pub const DEFAULT_HALF_WIDTH: f64 = 2.0;
pub const DEFAULT_LATTICE_POINTS: usize = 201;
pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_CONJUGATE_POINTS: usize = 301;
pub const DEFAULT_CONJUGATE_HALF_WIDTH: f64 = 3.0;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Debug, PartialEq)]
pub struct LawConfig {
    pub law: Law,
    pub half_width: f64,
    pub lattice_points: usize,
    pub samples: usize,
    pub conjugate_points: usize,
    pub conjugate_half_width: f64,
    pub infinity_threshold: Option<f64>,
    pub tol: f64,
    pub seed: u64,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

impl LawConfig {
    pub fn from_file(file: ConfigFile) -> Result<Self> {
        let kind = file.law.unwrap_or(LawKind::Elastic);
        let lambda = file.lambda.unwrap_or(DEFAULT_LAMBDA);
        let epsilon = file.epsilon.unwrap_or(DEFAULT_EPSILON);
        let dim = file.dim.unwrap_or(DEFAULT_DIM);
        let law = match kind {
            LawKind::Elastic => Law::Elastic(
                ElasticParams::new(lambda, epsilon, dim).map_err(|e| CliError::Config(format!("elastic: {e}")))?,
            ),
            LawKind::Plastic => Law::Plastic(
                PlasticParams::new(lambda, epsilon, dim).map_err(|e| CliError::Config(format!("plastic: {e}")))?,
            ),
            LawKind::Coulomb => {
                let mu = file.mu.unwrap_or(DEFAULT_MU);
                FrictionParams::new(mu, mu).map_err(|e| CliError::Config(format!("coulomb: {e}")))?;
                Law::Coulomb(mu)
            }
            LawKind::Friction => Law::Friction(
                FrictionParams::new(file.mu_minus.unwrap_or(DEFAULT_MU_MINUS), file.mu_plus.unwrap_or(DEFAULT_MU_PLUS))
                    .map_err(|e| CliError::Config(format!("friction: {e}")))?,
            ),
        };
        if matches!(kind, LawKind::Coulomb | LawKind::Friction) && file.dim.is_some_and(|d| d != 3) {
            return Err(CliError::Config("friction laws are fixed to dimension 1 + 2".into()));
        }
        let lattice_points = file.lattice_points.unwrap_or(DEFAULT_LATTICE_POINTS);
        if lattice_points < 2 {
            return Err(CliError::Config("lattice_points must be at least 2".into()));
        }
        let samples = file.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(CliError::Config("samples must be at least 1".into()));
        }
        let conjugate_points = file.conjugate_points.unwrap_or(DEFAULT_CONJUGATE_POINTS);
        if conjugate_points < 2 {
            return Err(CliError::Config("conjugate_points must be at least 2".into()));
        }
        let tol = file.tol.unwrap_or(bipotkit_core::DEFAULT_TOL);
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(CliError::Config(format!("tol must be finite and nonnegative, got {tol}")));
        }
        Ok(LawConfig {
            law,
            half_width: positive("half_width", file.half_width.unwrap_or(DEFAULT_HALF_WIDTH))?,
            lattice_points,
            samples,
            conjugate_points,
            conjugate_half_width: positive(
                "conjugate_half_width",
                file.conjugate_half_width.unwrap_or(DEFAULT_CONJUGATE_HALF_WIDTH),
            )?,
            infinity_threshold: file.infinity_threshold.map(|t| positive("infinity_threshold", t)).transpose()?,
            tol,
            seed: file.seed.unwrap_or(DEFAULT_SEED),
        })
    }

    /// Loads `path` if given, then applies `flags`.
    pub fn resolve(path: Option<&Path>, flags: &ConfigFile) -> Result<Self> {
        let base = match path {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        Self::from_file(base.overridden_by(flags))
    }
}
