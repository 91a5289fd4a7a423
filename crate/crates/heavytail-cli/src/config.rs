//! Run configuration with flag / file / default precedence.
//!
//! Every tunable can come from the command line, from a JSON config file
//! (`--config`), or fall back to its default — in that order.

use crate::error::{CliError, Result};
use heavytail::backtest::{ModelFamily, Revaluation, VarConfig};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunConfig {
    pub model: ModelFamily,
    pub portfolio: String,
    pub betas: Vec<f64>,
    pub window: usize,
    pub paths: usize,
    pub revaluation: Revaluation,
    pub rate: f64,
    pub seed: u64,
    pub refit_every: usize,
    pub base_spot: f64,
    pub stock_value: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let v = VarConfig::default();
        Self {
            model: ModelFamily::Gaussian,
            portfolio: "nll".into(),
            betas: v.betas,
            window: v.window,
            paths: v.paths,
            revaluation: v.revaluation,
            rate: v.rate,
            seed: 12345,
            refit_every: v.refit_every,
            base_spot: v.base_spot,
            stock_value: v.stock_value,
        }
    }
}

/// Partial configuration as read from `--config` (all fields optional).
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<ModelFamily>,
    pub portfolio: Option<String>,
    pub betas: Option<Vec<f64>>,
    pub window: Option<usize>,
    pub paths: Option<usize>,
    pub revaluation: Option<Revaluation>,
    pub rate: Option<f64>,
    pub seed: Option<u64>,
    pub refit_every: Option<usize>,
    pub base_spot: Option<f64>,
    pub stock_value: Option<f64>,
}

/// Flag-level overrides (clap leaves unset options as None).
#[derive(Debug, Clone, Default)]
pub struct FlagOverrides {
    pub model: Option<ModelFamily>,
    pub portfolio: Option<String>,
    pub betas: Option<Vec<f64>>,
    pub window: Option<usize>,
    pub paths: Option<usize>,
    pub revaluation: Option<Revaluation>,
    pub rate: Option<f64>,
    pub seed: Option<u64>,
    pub refit_every: Option<usize>,
}

impl RunConfig {
    /// defaults <- file <- flags
    pub fn resolve(config_path: Option<&PathBuf>, flags: FlagOverrides) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = config_path {
            let file = load_file_config(path)?;
            apply_file(&mut cfg, file);
        }
        apply_flags(&mut cfg, flags);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.to_var_config().validate().map_err(CliError::input)?;
        Ok(())
    }

    pub fn to_var_config(&self) -> VarConfig {
        VarConfig {
            betas: self.betas.clone(),
            paths: self.paths,
            window: self.window,
            revaluation: self.revaluation,
            seed: self.seed,
            refit_every: self.refit_every,
            rate: self.rate,
            base_spot: self.base_spot,
            stock_value: self.stock_value,
        }
    }
}

fn load_file_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("bad config {}: {e}", path.display())))
}

fn apply_file(cfg: &mut RunConfig, f: FileConfig) {
    merge(&mut cfg.model, f.model);
    merge(&mut cfg.portfolio, f.portfolio);
    merge(&mut cfg.betas, f.betas);
    merge(&mut cfg.window, f.window);
    merge(&mut cfg.paths, f.paths);
    merge(&mut cfg.revaluation, f.revaluation);
    merge(&mut cfg.rate, f.rate);
    merge(&mut cfg.seed, f.seed);
    merge(&mut cfg.refit_every, f.refit_every);
    merge(&mut cfg.base_spot, f.base_spot);
    merge(&mut cfg.stock_value, f.stock_value);
}

fn apply_flags(cfg: &mut RunConfig, f: FlagOverrides) {
    merge(&mut cfg.model, f.model);
    merge(&mut cfg.portfolio, f.portfolio);
    merge(&mut cfg.betas, f.betas);
    merge(&mut cfg.window, f.window);
    merge(&mut cfg.paths, f.paths);
    merge(&mut cfg.revaluation, f.revaluation);
    merge(&mut cfg.rate, f.rate);
    merge(&mut cfg.seed, f.seed);
    merge(&mut cfg.refit_every, f.refit_every);
}

fn merge<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

/// Comma-separated confidence levels, e.g. "0.95,0.99".
pub fn parse_betas(raw: &str) -> Result<Vec<f64>> {
    let betas: Vec<f64> = raw
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::input(format!("bad confidence level {s:?}")))
        })
        .collect::<Result<_>>()?;
    if betas.is_empty() {
        return Err(CliError::input("no confidence levels given"));
    }
    Ok(betas)
}
