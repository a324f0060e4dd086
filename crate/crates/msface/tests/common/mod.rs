#![allow(dead_code)]

use std::path::Path;

use msface::{generate_synthetic, ExperimentConfig};
use msface_core::dataset::{Catalog, SynthParams};

/// Small synthetic grid: 10 persons, full sessions and samples, 24x32 images.
pub fn small_params(seed: u64) -> SynthParams {
    SynthParams { person_count: 10, width: 24, height: 32, seed, ..Default::default() }
}

pub fn make_dataset(params: &SynthParams, root: &Path) -> Catalog {
    generate_synthetic(params, root).unwrap()
}

/// Harness settings matching [`small_params`] images.
pub fn small_config(root: &Path, out: &Path) -> ExperimentConfig {
    ExperimentConfig {
        root: root.to_path_buf(),
        out: out.to_path_buf(),
        resize: None,
        window: 8,
        window_max: 12,
        ..Default::default()
    }
}
