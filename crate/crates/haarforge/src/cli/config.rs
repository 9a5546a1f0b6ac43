use std::path::PathBuf;

use clap::ValueEnum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ensembles::{EnsembleConfig, ThetaChoice};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CalibrateTheta,
    Moments,
    Framepot,
    SemicircleCheck,
    Weingarten,
    Momentsolve,
    Concentration,
    W2Suite,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CalibrateTheta => "calibrate-theta",
            Command::Moments => "moments",
            Command::Framepot => "framepot",
            Command::SemicircleCheck => "semicircle-check",
            Command::Weingarten => "weingarten",
            Command::Momentsolve => "momentsolve",
            Command::Concentration => "concentration",
            Command::W2Suite => "w2-suite",
        }
    }
}

/// Ensemble measured by `moments` and `framepot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    Haar,
    #[serde(alias = "gue-exp")]
    GueExp,
    #[serde(alias = "gue-product")]
    GueProduct,
    W2,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// One experiment. Read from a JSON document; command-line flags override fields.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<SamplerKind>,
    #[serde(default, alias = "N", skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_max: Option<usize>,
    /// Concentration power, or moment order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(
        default,
        rename = "T",
        alias = "t",
        skip_serializing_if = "Option::is_none"
    )]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaChoice>,
    /// Target moments `[re, im]` for `momentsolve`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub best_effort: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

pub const DEFAULT_SEED: u64 = 0x5eed;

impl ExperimentConfig {
    pub fn for_command(command: Command) -> Self {
        Self {
            command: Some(command),
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(format!("config: {e}")))
    }

    pub fn command(&self) -> Result<Command> {
        self.command
            .ok_or_else(|| Error::InvalidConfig("missing field: command".into()))
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub(crate) fn require<T: Copy>(&self, v: Option<T>, name: &str) -> Result<T> {
        v.ok_or_else(|| {
            let cmd = self.command.map(Command::name).unwrap_or("?");
            Error::InvalidConfig(format!("{cmd} requires field: {name}"))
        })
    }

    pub(crate) fn samples_or(&self, default: usize) -> Result<usize> {
        let s = self.samples.unwrap_or(default);
        if s < 2 {
            return Err(Error::InvalidConfig(format!(
                "samples must be >= 2, got {s}"
            )));
        }
        Ok(s)
    }

    /// Resolved angle, defaulting to the first calibrated value.
    pub(crate) fn theta_or_calibrated(&self) -> Result<(f64, Option<usize>)> {
        self.theta
            .unwrap_or(ThetaChoice::Calibrated { calibrated: 1 })
            .resolve()
    }
}
