//! Experiment configuration.
//!
//! A config file holds `key = value` lines; `#` starts a comment. Every key
//! can also be given on the command line as `--key value`, which overrides
//! the file. List values are comma separated.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use msface_core::dataset::{IlluminationEffect, SynthParams};
use msface_core::features::{FisherVariant, Freq};
use msface_core::imaging::{CANONICAL_HEIGHT, CANONICAL_WIDTH, DEFAULT_SATURATE_FRACTION};
use msface_core::matcher::DEFAULT_EXPONENT;
use msface_core::{Illumination, Sensor};

use crate::error::{Error, Result};
use crate::formats::read_to_string;

macro_rules! config_keys {
    ($($key:ident),* $(,)?) => {
        /// Every recognized key, in canonical order.
        pub const KEYS: &[&str] = &[$(stringify!($key)),*];

        /// Command-line overrides, one optional flag per config key.
        #[derive(Debug, Clone, Default, clap::Args)]
        pub struct Overrides {
            $(
                #[arg(long = stringify!($key), value_name = "VALUE")]
                pub $key: Option<String>,
            )*
        }

        impl Overrides {
            /// The flags that were given, in canonical key order.
            pub fn pairs(&self) -> Vec<(&'static str, &str)> {
                let mut out = Vec::new();
                $(
                    if let Some(v) = &self.$key {
                        out.push((stringify!($key), v.as_str()));
                    }
                )*
                out
            }
        }
    };
}

config_keys!(
    root,
    out,
    strict,
    sensors,
    train_sessions,
    test_sessions,
    train_illuminations,
    test_illuminations,
    normalize,
    saturate,
    resize,
    mask,
    window,
    window_min,
    window_max,
    variant,
    p,
    fusion,
    step,
    score_normalization,
    export_tables,
    tables,
    truth,
    seed,
    persons,
    sessions,
    samples,
    width,
    height,
    noise,
    illumination_noise,
    identity,
    blackout,
    planted_band,
);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskKind {
    Square,
    TopK,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FusionRule {
    Fixed,
    Grid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub root: PathBuf,
    pub out: PathBuf,
    pub strict: bool,
    pub sensors: Vec<Sensor>,
    pub train_sessions: Vec<u8>,
    pub test_sessions: Vec<u8>,
    pub train_illuminations: Vec<Illumination>,
    pub test_illuminations: Vec<Illumination>,
    /// Normalization settings to run, in order.
    pub normalize: Vec<bool>,
    pub saturate: f64,
    pub resize: Option<(usize, usize)>,
    pub mask: MaskKind,
    /// `N` of the square window or `K` of the top-K selection.
    pub window: usize,
    pub window_min: usize,
    pub window_max: usize,
    pub variant: FisherVariant,
    pub p: f64,
    pub fusion: FusionRule,
    pub step: f64,
    pub score_normalization: bool,
    /// Also emit every per-sensor distance table.
    pub export_tables: bool,
    pub tables: Vec<PathBuf>,
    pub truth: Option<PathBuf>,
    pub seed: u64,
    pub persons: u32,
    pub sessions: u8,
    pub samples: u8,
    pub width: usize,
    pub height: usize,
    /// Within-person noise per sensor.
    pub noise: [f64; 3],
    pub illumination_noise: f64,
    pub identity: f64,
    pub blackout: bool,
    pub planted_band: Option<Vec<Freq>>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let synth = SynthParams::default();
        ExperimentConfig {
            root: PathBuf::from("data"),
            out: PathBuf::from("out"),
            strict: false,
            sensors: Sensor::ALL.to_vec(),
            train_sessions: vec![1, 2],
            test_sessions: vec![3, 4],
            train_illuminations: Illumination::ALL.to_vec(),
            test_illuminations: Illumination::ALL.to_vec(),
            normalize: vec![false, true],
            saturate: DEFAULT_SATURATE_FRACTION,
            resize: Some((CANONICAL_WIDTH, CANONICAL_HEIGHT)),
            mask: MaskKind::Square,
            window: 20,
            window_min: 1,
            window_max: 40,
            variant: FisherVariant::VarianceRatio,
            p: DEFAULT_EXPONENT,
            fusion: FusionRule::Fixed,
            step: msface_core::fusion::DEFAULT_STEP,
            score_normalization: false,
            export_tables: false,
            tables: Vec::new(),
            truth: None,
            seed: synth.seed,
            persons: synth.person_count,
            sessions: synth.sessions,
            samples: synth.samples_per_condition,
            width: synth.width,
            height: synth.height,
            noise: synth.within_noise,
            illumination_noise: 0.0,
            identity: synth.identity_strength,
            blackout: false,
            planted_band: None,
        }
    }
}

fn list<T>(key: &str, value: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Vec<T>> {
    let items = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(s).ok_or_else(|| Error::config(key, format!("cannot parse {s:?}"))))
        .collect::<Result<Vec<T>>>()?;
    if items.is_empty() {
        return Err(Error::config(key, "list must not be empty"));
    }
    Ok(items)
}

fn scalar<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::config(key, format!("cannot parse {value:?}")))
}

fn boolean(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::config(key, format!("expected a boolean, found {value:?}"))),
    }
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(",")
}

impl ExperimentConfig {
    /// Defaults updated by a config file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(&read_to_string(path)?)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config(line, format!("line {}: expected `key = value`", n + 1)))?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn apply_overrides(&mut self, overrides: &Overrides) -> Result<()> {
        for (key, value) in overrides.pairs() {
            self.set(key, value)?;
        }
        Ok(())
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "root" => self.root = PathBuf::from(value),
            "out" => self.out = PathBuf::from(value),
            "strict" => self.strict = boolean(key, value)?,
            "sensors" => {
                self.sensors = list(key, value, |s| s.to_ascii_uppercase().parse().ok())?;
            }
            "train_sessions" => self.train_sessions = list(key, value, |s| s.parse().ok())?,
            "test_sessions" => self.test_sessions = list(key, value, |s| s.parse().ok())?,
            "train_illuminations" => {
                self.train_illuminations = list(key, value, |s| s.to_ascii_uppercase().parse().ok())?;
            }
            "test_illuminations" => {
                self.test_illuminations = list(key, value, |s| s.to_ascii_uppercase().parse().ok())?;
            }
            "normalize" => {
                self.normalize = match value.trim().to_ascii_lowercase().as_str() {
                    "both" => vec![false, true],
                    _ => vec![boolean(key, value)?],
                }
            }
            "saturate" => self.saturate = scalar(key, value)?,
            "resize" => {
                self.resize = match value.trim() {
                    "none" | "off" => None,
                    v => {
                        let (w, h) = v.split_once('x').ok_or_else(|| Error::config(key, "expected WxH or none"))?;
                        Some((scalar(key, w)?, scalar(key, h)?))
                    }
                }
            }
            "mask" => {
                self.mask = match value.trim().to_ascii_lowercase().as_str() {
                    "square" => MaskKind::Square,
                    "topk" => MaskKind::TopK,
                    _ => return Err(Error::config(key, "expected square or topk")),
                }
            }
            "window" => self.window = scalar(key, value)?,
            "window_min" => self.window_min = scalar(key, value)?,
            "window_max" => self.window_max = scalar(key, value)?,
            "variant" => {
                self.variant = match value.trim().to_ascii_lowercase().as_str() {
                    "ratio" => FisherVariant::VarianceRatio,
                    "literal" => FisherVariant::Literal,
                    _ => return Err(Error::config(key, "expected ratio or literal")),
                }
            }
            "p" => self.p = scalar(key, value)?,
            "fusion" => {
                self.fusion = match value.trim().to_ascii_lowercase().as_str() {
                    "fixed" => FusionRule::Fixed,
                    "grid" => FusionRule::Grid,
                    _ => return Err(Error::config(key, "expected fixed or grid")),
                }
            }
            "step" => self.step = scalar(key, value)?,
            "score_normalization" => self.score_normalization = boolean(key, value)?,
            "export_tables" => self.export_tables = boolean(key, value)?,
            "tables" => self.tables = list(key, value, |s| Some(PathBuf::from(s)))?,
            "truth" => self.truth = Some(PathBuf::from(value)),
            "seed" => self.seed = scalar(key, value)?,
            "persons" => self.persons = scalar(key, value)?,
            "sessions" => self.sessions = scalar(key, value)?,
            "samples" => self.samples = scalar(key, value)?,
            "width" => self.width = scalar(key, value)?,
            "height" => self.height = scalar(key, value)?,
            "noise" => {
                let v: Vec<f64> = list(key, value, |s| s.parse().ok())?;
                self.noise = match v[..] {
                    [a] => [a; 3],
                    [a, b, c] => [a, b, c],
                    _ => return Err(Error::config(key, "expected one value or one per sensor")),
                };
            }
            "illumination_noise" => self.illumination_noise = scalar(key, value)?,
            "identity" => self.identity = scalar(key, value)?,
            "blackout" => self.blackout = boolean(key, value)?,
            "planted_band" => {
                self.planted_band = match value.trim() {
                    "none" | "" => None,
                    v => Some(list(key, v, |s| {
                        let (r, c) = s.split_once(':')?;
                        Some(Freq::new(r.trim().parse().ok()?, c.trim().parse().ok()?))
                    })?),
                }
            }
            _ => return Err(Error::config(key, "unknown key")),
        }
        Ok(())
    }

    /// Canonical textual value of a key; `set(key, get(key))` is a no-op.
    pub fn get(&self, key: &str) -> Option<String> {
        let b = |v: bool| v.to_string();
        Some(match key {
            "root" => self.root.display().to_string(),
            "out" => self.out.display().to_string(),
            "strict" => b(self.strict),
            "sensors" => join(&self.sensors, |s| s.name().to_string()),
            "train_sessions" => join(&self.train_sessions, u8::to_string),
            "test_sessions" => join(&self.test_sessions, u8::to_string),
            "train_illuminations" => join(&self.train_illuminations, |i| i.code().to_string()),
            "test_illuminations" => join(&self.test_illuminations, |i| i.code().to_string()),
            "normalize" => match self.normalize[..] {
                [false, true] => "both".into(),
                _ => join(&self.normalize, |v| b(*v)),
            },
            "saturate" => self.saturate.to_string(),
            "resize" => self.resize.map_or("none".into(), |(w, h)| format!("{w}x{h}")),
            "mask" => match self.mask {
                MaskKind::Square => "square".into(),
                MaskKind::TopK => "topk".into(),
            },
            "window" => self.window.to_string(),
            "window_min" => self.window_min.to_string(),
            "window_max" => self.window_max.to_string(),
            "variant" => self.variant.to_string(),
            "p" => self.p.to_string(),
            "fusion" => match self.fusion {
                FusionRule::Fixed => "fixed".into(),
                FusionRule::Grid => "grid".into(),
            },
            "step" => self.step.to_string(),
            "score_normalization" => b(self.score_normalization),
            "export_tables" => b(self.export_tables),
            "tables" => join(&self.tables, |p| p.display().to_string()),
            "truth" => self.truth.as_ref().map_or(String::new(), |p| p.display().to_string()),
            "seed" => self.seed.to_string(),
            "persons" => self.persons.to_string(),
            "sessions" => self.sessions.to_string(),
            "samples" => self.samples.to_string(),
            "width" => self.width.to_string(),
            "height" => self.height.to_string(),
            "noise" => join(&self.noise, f64::to_string),
            "illumination_noise" => self.illumination_noise.to_string(),
            "identity" => self.identity.to_string(),
            "blackout" => b(self.blackout),
            "planted_band" => {
                self.planted_band.as_ref().map_or("none".into(), |band| join(band, |f| format!("{}:{}", f.row, f.col)))
            }
            _ => return None,
        })
    }

    /// The whole configuration as a config file.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for key in KEYS {
            let _ = writeln!(s, "{key} = {}", self.get(key).unwrap_or_default());
        }
        s
    }

    /// Checks settings shared by every experiment.
    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p.is_finite()) {
            return Err(Error::config("p", "must be positive and finite"));
        }
        if self.window == 0 {
            return Err(Error::config("window", "must be at least 1"));
        }
        if self.window_min == 0 {
            return Err(Error::config("window_min", "must be at least 1"));
        }
        if self.window_max < self.window_min {
            return Err(Error::config("window_max", "must not be below window_min"));
        }
        if let Some(s) = self.test_sessions.iter().find(|s| self.train_sessions.contains(s)) {
            return Err(Error::config("test_sessions", format!("session {s} is also a training session")));
        }
        if !(self.saturate >= 0.0 && self.saturate < 0.5) {
            return Err(Error::config("saturate", "must be within [0, 0.5)"));
        }
        if let Some((w, h)) = self.resize {
            if w == 0 || h == 0 {
                return Err(Error::config("resize", "dimensions must be positive"));
            }
        }
        if msface_core::fusion::grid_axis(self.step).is_err() {
            return Err(Error::config("step", "must divide 1 into a whole number of intervals"));
        }
        Ok(())
    }

    /// Generator parameters described by the synthetic keys.
    pub fn synth_params(&self) -> Result<SynthParams> {
        let mut params = SynthParams {
            person_count: self.persons,
            sessions: self.sessions,
            samples_per_condition: self.samples,
            width: self.width,
            height: self.height,
            within_noise: self.noise,
            identity_strength: self.identity,
            planted_band: self.planted_band.clone(),
            seed: self.seed,
            ..SynthParams::default()
        };
        for row in &mut params.illumination {
            for e in row.iter_mut() {
                *e = IlluminationEffect { noise: self.illumination_noise, ..*e };
            }
        }
        if self.blackout {
            params = params.with_visible_blackout();
        }
        params.validate().map_err(|e| Error::config("persons", e.to_string()))?;
        Ok(params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_key_round_trips() {
        let cfg = ExperimentConfig {
            planted_band: Some(vec![Freq::new(0, 1), Freq::new(1, 0)]),
            normalize: vec![true],
            resize: None,
            tables: vec!["a.csv".into(), "b.csv".into()],
            truth: Some("t.csv".into()),
            ..Default::default()
        };
        let mut back = ExperimentConfig::default();
        back.apply_text(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
        for key in KEYS {
            assert!(cfg.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn file_syntax() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text("# comment\n\nsensors = th, vis\np = 0.7 # inline\nnormalize = yes\n").unwrap();
        assert_eq!(cfg.sensors, vec![Sensor::Th, Sensor::Vis]);
        assert_eq!(cfg.p, 0.7);
        assert_eq!(cfg.normalize, vec![true]);
    }

    #[test]
    fn unknown_key_is_named() {
        let mut cfg = ExperimentConfig::default();
        let err = cfg.apply_text("windw = 3\n").unwrap_err();
        assert!(matches!(&err, Error::Config { key, .. } if key == "windw"));
        assert!(err.to_string().contains("windw"));
    }

    #[test]
    fn bad_values_name_their_key() {
        let mut cfg = ExperimentConfig::default();
        let err = cfg.set("sensors", "VIS,UV").unwrap_err();
        assert!(err.to_string().contains("sensors"));
        cfg.set("window", "0").unwrap();
        assert!(matches!(cfg.validate(), Err(Error::Config { key, .. }) if key == "window"));
    }

    #[test]
    fn overlapping_sessions_rejected() {
        let mut cfg = ExperimentConfig::default();
        cfg.set("test_sessions", "2,3").unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn overrides_beat_file() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text("seed = 3\n").unwrap();
        let o = Overrides { seed: Some("9".into()), ..Default::default() };
        cfg.apply_overrides(&o).unwrap();
        assert_eq!(cfg.seed, 9);
    }
}
