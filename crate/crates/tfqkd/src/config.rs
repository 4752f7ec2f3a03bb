//! Run configuration: JSON parsing, defaults, and validation against every
//! domain-type invariant before any computation starts. Unknown keys are
//! rejected.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::channel::{ChannelError, ChannelParams};
use crate::decoy::{DecoyError, IntensityConfig};
use crate::keyrate::{MuGrid, MuStrategy, PipelineSettings, RateMode};

pub const DEFAULT_DARK_COUNT: f64 = 8e-8;
pub const DEFAULT_DET_EFF: f64 = 0.145;
pub const DEFAULT_LOSS_COEFF: f64 = 0.2;
pub const DEFAULT_MISALIGNMENT: f64 = 0.015;
pub const DEFAULT_EC_EFF: f64 = 1.15;
pub const DEFAULT_MU: f64 = 0.1;
pub const DEFAULT_I1_DECOYS: [f64; 4] = [0.0, 0.002, 0.005, 1.3];
pub const DEFAULT_I2_DECOYS: [f64; 3] = [0.0, 0.002, 0.005];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config schema: {0}")]
    Schema(String),
    #[error("config validation: {0}")]
    Channel(#[from] ChannelError),
    #[error("config validation: {0}")]
    Intensities(#[from] DecoyError),
    #[error("config validation: {0}")]
    Invalid(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    channel: Option<RawChannel>,
    intensities: Option<RawIntensities>,
    cutoffs: Option<RawCutoffs>,
    tolerances: Option<RawTolerances>,
    modes: Option<Vec<String>>,
    gains_file: Option<PathBuf>,
    optimize_mu: Option<RawGrid>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChannel {
    dark_count: Option<f64>,
    det_eff: Option<f64>,
    loss_coeff_db_per_km: Option<f64>,
    misalignment: Option<f64>,
    ec_eff: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIntensities {
    mu: Option<f64>,
    i1_decoys: Option<Vec<f64>>,
    i2_decoys: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCutoffs {
    yield_cutoff: Option<u32>,
    pair_cutoff: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    lp_tol: Option<f64>,
    leakage_tol: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    lo: Option<f64>,
    hi: Option<f64>,
    steps: Option<u32>,
}

/// A fully validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub channel: ChannelParams,
    pub intensities: IntensityConfig,
    pub settings: PipelineSettings,
    pub modes: Vec<RateMode>,
    pub gains_file: Option<PathBuf>,
    pub mu_strategy: MuStrategy,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            channel: ChannelParams::new(
                DEFAULT_DARK_COUNT,
                DEFAULT_DET_EFF,
                DEFAULT_LOSS_COEFF,
                DEFAULT_MISALIGNMENT,
                DEFAULT_EC_EFF,
            )
            .expect("defaults are valid"),
            intensities: IntensityConfig::new(DEFAULT_MU, &DEFAULT_I1_DECOYS, &DEFAULT_I2_DECOYS)
                .expect("defaults are valid"),
            settings: PipelineSettings::default(),
            modes: vec![RateMode::Improved],
            gains_file: None,
            mu_strategy: MuStrategy::Fixed,
        }
    }
}

/// Parses and validates a JSON configuration file.
pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    config_from_json(&text)
}

/// Parses and validates configuration from a JSON string; absent keys take
/// the built-in defaults.
pub fn config_from_json(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| ConfigError::Schema(e.to_string()))?;
    build(raw)
}

fn build(raw: RawConfig) -> Result<RunConfig, ConfigError> {
    let ch = raw.channel.unwrap_or_default();
    let channel = ChannelParams::new(
        ch.dark_count.unwrap_or(DEFAULT_DARK_COUNT),
        ch.det_eff.unwrap_or(DEFAULT_DET_EFF),
        ch.loss_coeff_db_per_km.unwrap_or(DEFAULT_LOSS_COEFF),
        ch.misalignment.unwrap_or(DEFAULT_MISALIGNMENT),
        ch.ec_eff.unwrap_or(DEFAULT_EC_EFF),
    )?;

    let ints = raw.intensities.unwrap_or_default();
    let intensities = IntensityConfig::new(
        ints.mu.unwrap_or(DEFAULT_MU),
        &ints.i1_decoys.unwrap_or_else(|| DEFAULT_I1_DECOYS.to_vec()),
        &ints.i2_decoys.unwrap_or_else(|| DEFAULT_I2_DECOYS.to_vec()),
    )?;

    let cutoffs = raw.cutoffs.unwrap_or_default();
    let tolerances = raw.tolerances.unwrap_or_default();
    let defaults = PipelineSettings::default();
    let settings = PipelineSettings {
        yield_cutoff: cutoffs.yield_cutoff.unwrap_or(defaults.yield_cutoff),
        pair_cutoff: cutoffs.pair_cutoff.unwrap_or(defaults.pair_cutoff),
        lp_tolerance: tolerances.lp_tol.unwrap_or(defaults.lp_tolerance),
        leakage_tolerance: tolerances.leakage_tol.unwrap_or(defaults.leakage_tolerance),
    };
    if settings.yield_cutoff < 3 {
        return Err(ConfigError::Invalid(format!(
            "cutoffs.yield_cutoff = {} must be at least 3",
            settings.yield_cutoff
        )));
    }
    if settings.pair_cutoff < 1 || settings.pair_cutoff > settings.yield_cutoff {
        return Err(ConfigError::Invalid(format!(
            "cutoffs.pair_cutoff = {} must lie in [1, yield_cutoff = {}]",
            settings.pair_cutoff, settings.yield_cutoff
        )));
    }
    if !(settings.lp_tolerance > 0.0) {
        return Err(ConfigError::Invalid(format!(
            "tolerances.lp_tol = {} must be positive",
            settings.lp_tolerance
        )));
    }
    if !(settings.leakage_tolerance > 0.0) {
        return Err(ConfigError::Invalid(format!(
            "tolerances.leakage_tol = {} must be positive",
            settings.leakage_tolerance
        )));
    }

    let modes = match raw.modes {
        None => vec![RateMode::Improved],
        Some(names) => {
            if names.is_empty() {
                return Err(ConfigError::Invalid("modes must not be empty".into()));
            }
            names
                .iter()
                .map(|s| s.parse::<RateMode>().map_err(ConfigError::Invalid))
                .collect::<Result<Vec<_>, _>>()?
        }
    };

    let mu_strategy = match raw.optimize_mu {
        None => MuStrategy::Fixed,
        Some(g) => {
            let defaults = MuGrid::default();
            let grid = MuGrid {
                lo: g.lo.unwrap_or(defaults.lo),
                hi: g.hi.unwrap_or(defaults.hi),
                steps: g.steps.unwrap_or(defaults.steps),
            };
            if !(grid.lo > 0.0 && grid.hi > grid.lo && grid.steps >= 2) {
                return Err(ConfigError::Invalid(format!(
                    "optimize_mu grid ({}, {}, {}) needs 0 < lo < hi and steps >= 2",
                    grid.lo, grid.hi, grid.steps
                )));
            }
            MuStrategy::Optimize(grid)
        }
    };

    Ok(RunConfig {
        channel,
        intensities,
        settings,
        modes,
        gains_file: raw.gains_file,
        mu_strategy,
    })
}
