//! Synthetic multispectral datasets in the database layout.
//!
//! Each person owns a fixed base pattern per sensor, built in the DCT domain
//! and inverted to pixels. A capture is
//!
//! ```text
//! clamp01(gain * base + offset + illumination_noise * N + within_noise * N)
//! ```
//!
//! with white Gaussian pixel noise. Without a planted band, identity lives in
//! a low-frequency triangle of coefficients; with one, only the planted
//! coefficients differ between persons.
//!
//! Every capture draws from its own ChaCha stream derived from the seed and
//! the capture key, so output does not depend on generation order.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{DatasetError, GridShape, Illumination, SampleKey, Sensor};
use crate::features::Freq;
use crate::imaging::{Image, Matrix};
use crate::math;
use crate::transform::{CoefMatrix, Dct2Plan};

/// Identity coefficients occupy `row + col <= IDENTITY_BAND`.
const IDENTITY_BAND: usize = 8;
/// Shared "face" structure occupies `0 < row + col <= COMMON_BAND`.
const COMMON_BAND: usize = 5;
const COMMON_STRENGTH: f64 = 0.06;

/// Temperature span used when writing thermal captures as matrices.
pub const THERMAL_BASE_C: f64 = 28.0;
pub const THERMAL_SPAN_C: f64 = 10.0;

/// Per sensor x illumination photometric change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IlluminationEffect {
    pub gain: f64,
    pub offset: f64,
    pub noise: f64,
}

impl IlluminationEffect {
    pub const IDENTITY: IlluminationEffect = IlluminationEffect { gain: 1.0, offset: 0.0, noise: 0.0 };
    /// A visible camera under infrared-only light: nearly black, no identity.
    pub const BLACKOUT: IlluminationEffect = IlluminationEffect { gain: 0.0, offset: 0.04, noise: 0.01 };
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub person_count: u32,
    pub sessions: u8,
    pub samples_per_condition: u8,
    pub width: usize,
    pub height: usize,
    /// Within-person pixel noise per sensor, indexed by [`Sensor::index`].
    pub within_noise: [f64; 3],
    /// Pixel-scale amplitude of the person-specific pattern.
    pub identity_strength: f64,
    /// Indexed `[sensor][illumination]`.
    pub illumination: [[IlluminationEffect; 3]; 3],
    pub planted_band: Option<Vec<Freq>>,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            person_count: 10,
            sessions: 4,
            samples_per_condition: 5,
            width: crate::imaging::CANONICAL_WIDTH,
            height: crate::imaging::CANONICAL_HEIGHT,
            within_noise: [0.05; 3],
            identity_strength: 0.08,
            illumination: [[IlluminationEffect::IDENTITY; 3]; 3],
            planted_band: None,
            seed: 0,
        }
    }
}

impl SynthParams {
    /// Every noise source switched off.
    pub fn noiseless(mut self) -> Self {
        self.within_noise = [0.0; 3];
        for row in &mut self.illumination {
            for e in row {
                e.noise = 0.0;
            }
        }
        self
    }

    /// Visible captures under IR illumination lose all identity.
    pub fn with_visible_blackout(mut self) -> Self {
        self.illumination[Sensor::Vis.index()][Illumination::Ir.index()] = IlluminationEffect::BLACKOUT;
        self
    }

    pub fn effect(&self, sensor: Sensor, illumination: Illumination) -> IlluminationEffect {
        self.illumination[sensor.index()][illumination.index()]
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        if !(1..=99).contains(&self.person_count) {
            return Err(DatasetError::BadParams("person_count must be within 1..=99"));
        }
        if !(1..=9).contains(&self.sessions) || !(1..=9).contains(&self.samples_per_condition) {
            return Err(DatasetError::BadParams("sessions and samples must be within 1..=9"));
        }
        if self.width < 8 || self.height < 8 {
            return Err(DatasetError::BadParams("width and height must be at least 8"));
        }
        let noises = self
            .within_noise
            .iter()
            .chain(self.illumination.iter().flatten().map(|e| &e.noise))
            .chain(core::iter::once(&self.identity_strength));
        for &n in noises {
            if !(n >= 0.0 && n.is_finite()) {
                return Err(DatasetError::BadParams("noise scales must be finite and non-negative"));
            }
        }
        if let Some(band) = &self.planted_band {
            if band.is_empty() || band.iter().any(|f| f.row >= self.height || f.col >= self.width) {
                return Err(DatasetError::BadParams("planted band must be non-empty and inside the grid"));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> GridShape {
        GridShape { persons: self.person_count, sessions: self.sessions, samples: self.samples_per_condition }
    }
}

/// Stream tags keep base patterns, shared structure and capture noise apart.
#[derive(Clone, Copy)]
enum Stream {
    Common = 1,
    Identity = 2,
    Capture = 3,
}

fn rng_for(seed: u64, tag: Stream, parts: [u64; 5]) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stream = (tag as u64) << 56 | parts[0] << 40 | parts[1] << 32 | parts[2] << 24 | parts[3] << 16 | parts[4];
    rng.set_stream(stream);
    rng
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Precomputed base patterns for one parameter set.
#[derive(Debug, Clone)]
pub struct Synthesizer {
    params: SynthParams,
    /// `bases[(person - 1) * 3 + sensor]`.
    bases: Vec<Matrix>,
}

impl Synthesizer {
    pub fn new(params: SynthParams) -> Result<Self, DatasetError> {
        params.validate()?;
        let (w, h) = (params.width, params.height);
        let plan = Dct2Plan::new(w, h);
        // Coefficient c on an orthonormal basis image moves pixels by about 2c/sqrt(wh).
        let pixel_scale = math::sqrt((w * h) as f64) / 2.0;
        let mut bases = Vec::with_capacity(params.person_count as usize * 3);
        let commons: Vec<Matrix> = Sensor::ALL
            .iter()
            .map(|&s| {
                let mut rng = rng_for(params.seed, Stream::Common, [0, s.index() as u64, 0, 0, 0]);
                let mut c = Matrix::zeros(w, h);
                c.set(0, 0, 0.5 * 2.0 * pixel_scale);
                for r in 0..h.min(COMMON_BAND + 1) {
                    for col in 0..w.min(COMMON_BAND + 1 - r) {
                        if r + col > 0 {
                            let v = normal(&mut rng) * COMMON_STRENGTH * pixel_scale / (r + col) as f64;
                            c.set(col, r, v);
                        }
                    }
                }
                c
            })
            .collect();
        for person in 1..=params.person_count {
            for (si, sensor) in Sensor::ALL.iter().enumerate() {
                let mut coefs = commons[si].clone();
                let mut rng = rng_for(params.seed, Stream::Identity, [person as u64, sensor.index() as u64, 0, 0, 0]);
                let amp = params.identity_strength * pixel_scale;
                match &params.planted_band {
                    Some(band) => {
                        for f in band {
                            let v = coefs.get(f.col, f.row) + normal(&mut rng) * amp;
                            coefs.set(f.col, f.row, v);
                        }
                    }
                    None => {
                        for r in 0..h.min(IDENTITY_BAND + 1) {
                            for col in 0..w.min(IDENTITY_BAND + 1 - r) {
                                let v = coefs.get(col, r) + normal(&mut rng) * amp / (1 + r + col) as f64;
                                coefs.set(col, r, v);
                            }
                        }
                    }
                }
                bases.push(plan.inverse(&CoefMatrix::from_matrix(coefs)));
            }
        }
        Ok(Synthesizer { params, bases })
    }

    pub fn params(&self) -> &SynthParams {
        &self.params
    }

    /// Noise-free pattern of a person on a sensor, before illumination.
    pub fn base(&self, person: u32, sensor: Sensor) -> &Matrix {
        &self.bases[(person as usize - 1) * 3 + sensor.index()]
    }

    /// All keys of the generated grid in code order.
    pub fn keys(&self) -> Vec<SampleKey> {
        self.params.grid().keys().collect()
    }

    pub fn sample(&self, key: &SampleKey) -> Image {
        let p = &self.params;
        let e = p.effect(key.sensor(), key.illumination());
        let within = p.within_noise[key.sensor().index()];
        let mut rng = rng_for(
            p.seed,
            Stream::Capture,
            [
                key.person().0 as u64,
                key.sensor().index() as u64,
                key.session() as u64,
                key.illumination().index() as u64,
                key.sample() as u64,
            ],
        );
        let base = self.base(key.person().0, key.sensor());
        let mut out = base.map(|v| e.gain * v + e.offset);
        if e.noise > 0.0 || within > 0.0 {
            for v in out.as_mut_slice() {
                *v += e.noise * normal(&mut rng) + within * normal(&mut rng);
            }
        }
        Image::from_matrix_clamped(out)
    }
}

/// Maps a generated thermal gray level to a temperature in Celsius.
pub fn gray_to_temperature(v: f64) -> f64 {
    THERMAL_BASE_C + THERMAL_SPAN_C * v
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn small() -> SynthParams {
        SynthParams {
            person_count: 3,
            sessions: 2,
            samples_per_condition: 2,
            width: 16,
            height: 20,
            ..Default::default()
        }
    }

    #[test]
    fn noiseless_samples_repeat() {
        let s = Synthesizer::new(small().noiseless()).unwrap();
        for sensor in Sensor::ALL {
            for il in Illumination::ALL {
                let a = s.sample(&SampleKey::new(2, 1, sensor, il, 1).unwrap());
                let b = s.sample(&SampleKey::new(2, 2, sensor, il, 2).unwrap());
                assert_eq!(a, b);
            }
        }
        let a = s.sample(&SampleKey::new(1, 1, Sensor::Vis, Illumination::Na, 1).unwrap());
        let b = s.sample(&SampleKey::new(2, 1, Sensor::Vis, Illumination::Na, 1).unwrap());
        assert_ne!(a, b);
    }

    #[test]
    fn deterministic_per_seed() {
        let k = SampleKey::new(3, 2, Sensor::Th, Illumination::Ar, 2).unwrap();
        let a = Synthesizer::new(small()).unwrap().sample(&k);
        let b = Synthesizer::new(small()).unwrap().sample(&k);
        assert_eq!(a, b);
        let c = Synthesizer::new(SynthParams { seed: 1, ..small() }).unwrap().sample(&k);
        assert_ne!(a, c);
    }

    #[test]
    fn noise_differs_between_samples() {
        let s = Synthesizer::new(small()).unwrap();
        let a = s.sample(&SampleKey::new(1, 1, Sensor::Nir, Illumination::Na, 1).unwrap());
        let b = s.sample(&SampleKey::new(1, 1, Sensor::Nir, Illumination::Na, 2).unwrap());
        assert_ne!(a, b);
    }

    #[test]
    fn blackout_is_dark() {
        let s = Synthesizer::new(small().with_visible_blackout()).unwrap();
        let img = s.sample(&SampleKey::new(1, 1, Sensor::Vis, Illumination::Ir, 1).unwrap());
        let mean = img.pixels().iter().sum::<f64>() / img.pixels().len() as f64;
        assert!(mean < 0.1, "{mean}");
    }

    #[test]
    fn validation() {
        assert!(SynthParams { width: 7, ..small() }.validate().is_err());
        assert!(SynthParams { within_noise: [0.0, -1.0, 0.0], ..small() }.validate().is_err());
        assert!(SynthParams { person_count: 0, ..small() }.validate().is_err());
        assert!(SynthParams { planted_band: Some(vec![Freq::new(20, 0)]), ..small() }.validate().is_err());
        assert!(SynthParams { planted_band: Some(vec![]), ..small() }.validate().is_err());
        assert!(small().validate().is_ok());
    }

    #[test]
    fn planted_band_is_only_identity_carrier() {
        let band = vec![Freq::new(0, 1), Freq::new(1, 0)];
        let s = Synthesizer::new(SynthParams { planted_band: Some(band.clone()), ..small() }).unwrap();
        let plan = Dct2Plan::new(16, 20);
        let a = plan.forward(s.base(1, Sensor::Vis));
        let b = plan.forward(s.base(2, Sensor::Vis));
        for r in 0..20 {
            for c in 0..16 {
                let f = Freq::new(r, c);
                let d = (a.at(f) - b.at(f)).abs();
                if band.contains(&f) {
                    assert!(d > 1e-6);
                } else {
                    assert!(d < 1e-9, "{f} differs by {d}");
                }
            }
        }
    }
}
