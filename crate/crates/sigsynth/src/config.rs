//! Run configuration: one TOML file with a documented schema; unknown keys
//! are hard errors and an effective-config dump re-parses to an equal
//! value.

use crate::render::InkModel;
use crate::script::ScriptKind;
use crate::variability::Settings;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluateConfig {
    /// Reference counts evaluated (rows of the EER table).
    pub t_values: Vec<usize>,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for EvaluateConfig {
    fn default() -> Self {
        EvaluateConfig { t_values: vec![2, 5, 8, 10], repeats: 10, seed: 7 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrateConfig {
    /// Desk-scale dataset regenerated at every calibration evaluation.
    pub desk_users: u32,
    pub desk_samples: u32,
    pub t_reference: usize,
    pub repeats: usize,
    pub iterations: u32,
}

impl Default for CalibrateConfig {
    fn default() -> Self {
        CalibrateConfig { desk_users: 20, desk_samples: 24, t_reference: 5, repeats: 3, iterations: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub script: ScriptKind,
    pub users: u32,
    pub samples_per_user: u32,
    pub seed: u64,
    pub out_dir: String,
    /// Write online text files.
    pub online: bool,
    /// Render and write offline PGM images.
    pub images: bool,
    /// Override paths for the script data and engram inventory files;
    /// embedded defaults are used when absent.
    pub script_data: Option<String>,
    pub engram_data: Option<String>,
    pub generation: Settings,
    pub ink: InkModel,
    pub evaluate: EvaluateConfig,
    pub calibrate: CalibrateConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            script: ScriptKind::Bengali,
            users: 100,
            samples_per_user: 24,
            seed: 1,
            out_dir: "out".to_string(),
            online: true,
            images: true,
            script_data: None,
            engram_data: None,
            generation: Settings::default(),
            ink: InkModel::default(),
            evaluate: EvaluateConfig::default(),
            calibrate: CalibrateConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str, file: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text)
            .map_err(|e| Error::Config(format!("{file}: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.users < 1 {
            return Err(Error::Config("users must be at least 1".into()));
        }
        if self.samples_per_user < 1 {
            return Err(Error::Config("samples_per_user must be at least 1".into()));
        }
        if !(self.generation.fm_hz > 0.0) {
            return Err(Error::Config("generation.fm_hz must be positive".into()));
        }
        if self.ink.dpi < 50 {
            return Err(Error::Config("ink.dpi below 50 is not a usable raster".into()));
        }
        if self.evaluate.t_values.is_empty() || self.evaluate.t_values.iter().any(|t| *t == 0) {
            return Err(Error::Config("evaluate.t_values must be non-empty positive".into()));
        }
        if self.evaluate.repeats == 0 || self.calibrate.repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        Ok(())
    }

    /// Effective configuration dump; re-parses to an equal RunConfig.
    pub fn effective_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

/// Loads a config file; an empty file yields all defaults.
pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    RunConfig::from_toml(&text, &path.display().to_string())
}
