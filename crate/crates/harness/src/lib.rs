//! Command-line harness for fractional decoding: instance construction from
//! JSON configs, word encoding and corruption, decoding, and seeded Monte
//! Carlo experiments with CSV output.

pub mod config;
pub mod experiment;

use std::path::Path;

use fracdec::{CollabConfig, FractionalSpec};
use thiserror::Error;

pub use config::ExperimentConfig;
pub use experiment::{corrupt, describe, run_experiment, summary_csv, Description, Outcome, SummaryRow};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarnessError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl HarnessError {
    /// 1 for validation errors, 2 for I/O errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Invalid(_) => 1,
            HarnessError::Io(_) => 2,
        }
    }
}

/// A validated configuration together with the instance it describes.
#[derive(Debug, Clone)]
pub struct Instance {
    pub config: ExperimentConfig,
    pub spec: FractionalSpec,
}

impl Instance {
    pub fn from_config(config: ExperimentConfig) -> Result<Self, HarnessError> {
        let spec = config.build()?;
        if let Some(t) = config.t_excess {
            CollabConfig::new(&spec, t).map_err(|e| HarnessError::Invalid(format!("t_excess: {e}")))?;
        }
        Ok(Instance { config, spec })
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        Self::from_config(ExperimentConfig::from_json(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
