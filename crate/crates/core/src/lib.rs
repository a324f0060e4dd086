//! Multispectral face identification core.
//!
//! The pipeline runs per sensor (visible, near infrared, thermal):
//!
//! 1. [`imaging`]: percentile intensity normalization and bicubic resize.
//! 2. [`transform`]: orthonormal 2-D DCT-II of the face image.
//! 3. [`features`]: per-frequency training statistics, a Fisher-style
//!    discriminability map and a zonal selection mask.
//! 4. [`matcher`]: fractional Minkowski distances between probes and gallery
//!    templates, nearest-template identification.
//! 5. [`fusion`]: weighted-sum score fusion of the per-sensor distance tables
//!    and exhaustive weight grid search.
//!
//! [`dataset`] holds the file-code naming protocol, catalog and split logic
//! and the synthetic data generator. Everything here is `no_std` + `alloc`;
//! file IO lives in the `msface` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dataset;
pub mod features;
pub mod fusion;
pub mod imaging;
pub mod matcher;
pub mod transform;

mod math;

pub use dataset::{Catalog, DatasetError, GridShape, Illumination, SampleKey, Sensor, Split, SplitSpec, SynthParams};
pub use features::{
    DiscriminabilityMap, FeatureError, FeatureVector, FisherVariant, Freq, FrequencyStats, MaskMode, SelectionMask,
};
pub use fusion::{FusionError, FusionWeights, GridResult};
pub use imaging::{Image, ImagingError, Matrix};
pub use matcher::{DistanceTable, Gallery, IdentificationRate, MatchError, PersonId, TemplateLabel};
pub use transform::{CoefMatrix, Dct2Plan};
