//! File formats, dataset scanning, synthetic dataset generation and the
//! experiment harness around `msface-core`.

pub mod config;
pub mod error;
pub mod formats;
pub mod harness;
pub mod pipeline;
pub mod scan;
pub mod synth;

pub use config::{ExperimentConfig, Overrides};
pub use error::{Error, Result};
pub use harness::{Harness, Report, ResultRow};
pub use scan::scan_dataset;
pub use synth::generate_synthetic;
