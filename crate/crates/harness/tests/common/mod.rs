#![allow(dead_code)]

use std::path::PathBuf;

use fracdec_harness::{ExperimentConfig, Instance};

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

pub fn config(name: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(&std::fs::read_to_string(config_path(name)).unwrap()).unwrap()
}

pub fn instance(name: &str) -> Instance {
    Instance::load(&config_path(name)).unwrap()
}
