//! Database naming protocol, catalogs, train/test splits and synthetic data.
//!
//! Every capture is identified by an 8-character code such as `07S2IIR3`:
//!
//! | chars | meaning      | values                          |
//! |-------|--------------|---------------------------------|
//! | 1-2   | person       | `01`-`41`                       |
//! | 3-4   | session      | `S1`-`S4`                       |
//! | 5     | sensor       | `C` visible, `I` NIR, `T` thermal |
//! | 6-7   | illumination | `NA`, `IR`, `AR`                |
//! | 8     | sample       | `1`-`5`                         |
//!
//! Relaxed parsing widens the ranges (person `01`-`99`, session and sample
//! `1`-`9`) so generated datasets can vary their size.

mod catalog;
mod code;
mod split;
pub mod synth;

use alloc::string::String;

use thiserror::Error;

pub use catalog::{Catalog, GridShape};
pub use code::{format_sample_code, parse_sample_code, Illumination, PersonId, SampleKey, Sensor};
pub use split::{make_split, Split, SplitEntry, SplitSpec};
pub use synth::{IlluminationEffect, SynthParams, Synthesizer};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatasetError {
    #[error("malformed sample code {0:?}")]
    MalformedCode(String),
    #[error("{field} value {value} is out of range")]
    OutOfRange { field: &'static str, value: u32 },
    #[error("sample {code} appears twice: {first} and {second}")]
    DuplicateKey { code: String, first: String, second: String },
    #[error("test session {0} is also a training session")]
    SessionOverlap(u8),
    #[error("split has no training sessions")]
    NoTrainSessions,
    #[error("person {person} has no {side} images for this split")]
    EmptySplit { person: PersonId, side: &'static str },
    #[error("invalid synthetic parameters: {0}")]
    BadParams(&'static str),
}
