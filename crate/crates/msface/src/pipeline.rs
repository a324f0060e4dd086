//! Images to distance tables for one split.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, Mutex, RwLock};

use msface_core::dataset::{make_split, Catalog, SampleKey, SplitSpec};
use msface_core::features::{
    build_mask, compute_statistics, extract_features, fisher_map, DiscriminabilityMap, FisherVariant, MaskMode,
    SelectionMask,
};
use msface_core::imaging::{normalize_intensity, resize_bicubic};
use msface_core::matcher::score_probes;
use msface_core::transform::{CoefMatrix, Dct2Plan};
use msface_core::{DistanceTable, Gallery, PersonId};
use rayon::prelude::*;

use crate::error::Result;
use crate::formats::load_image;

/// Probe label shared by every sensor: the capture code with the sensor
/// letter replaced by `*`, so tables from different sensors align.
pub fn probe_label(key: &SampleKey) -> String {
    format!("{:02}S{}*{}{}", key.person().0, key.session(), key.illumination().code(), key.sample())
}

/// Loads, resizes, optionally normalizes and transforms images, caching the
/// coefficients per `(path, normalize)`.
#[derive(Debug)]
pub struct FeatureStore {
    saturate: f64,
    resize: Option<(usize, usize)>,
    cache: RwLock<HashMap<(String, bool), Arc<CoefMatrix>>>,
    plans: Mutex<HashMap<(usize, usize), Arc<Dct2Plan>>>,
}

impl FeatureStore {
    pub fn new(saturate: f64, resize: Option<(usize, usize)>) -> Self {
        FeatureStore { saturate, resize, cache: RwLock::default(), plans: Mutex::default() }
    }

    fn plan(&self, w: usize, h: usize) -> Arc<Dct2Plan> {
        let mut plans = self.plans.lock().expect("plan cache poisoned");
        plans.entry((w, h)).or_insert_with(|| Arc::new(Dct2Plan::new(w, h))).clone()
    }

    pub fn coefficients(&self, path: &str, normalize: bool) -> Result<Arc<CoefMatrix>> {
        let key = (path.to_string(), normalize);
        if let Some(c) = self.cache.read().expect("coefficient cache poisoned").get(&key) {
            return Ok(c.clone());
        }
        let mut img = load_image(Path::new(path))?;
        if let Some((w, h)) = self.resize {
            if (img.width(), img.height()) != (w, h) {
                img = resize_bicubic(&img, w, h)?;
            }
        }
        if normalize {
            img = normalize_intensity(&img, self.saturate)?;
        }
        let coefs = Arc::new(self.plan(img.width(), img.height()).forward(img.as_matrix()));
        self.cache.write().expect("coefficient cache poisoned").insert(key, coefs.clone());
        Ok(coefs)
    }

    pub fn len(&self) -> usize {
        self.cache.read().expect("coefficient cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops cached coefficients; plans are kept.
    pub fn clear(&self) {
        self.cache.write().expect("coefficient cache poisoned").clear();
    }
}

/// Coefficients of one split, ready for any mask.
#[derive(Debug, Clone)]
pub struct PreparedSplit {
    pub train: Vec<(PersonId, Arc<CoefMatrix>)>,
    /// `(probe label, true person, coefficients)`.
    pub test: Vec<(String, PersonId, Arc<CoefMatrix>)>,
}

/// One sensor's matcher output for a split.
#[derive(Debug, Clone)]
pub struct SensorRun {
    pub table: DistanceTable,
    pub truth: Vec<PersonId>,
    pub mask: SelectionMask,
    pub map: Option<DiscriminabilityMap>,
}

impl PreparedSplit {
    pub fn load(store: &FeatureStore, catalog: &Catalog, spec: &SplitSpec, normalize: bool) -> Result<Self> {
        let split = make_split(catalog, spec)?;
        let train = split
            .train
            .par_iter()
            .map(|e| Ok((e.person, store.coefficients(&e.path, normalize)?)))
            .collect::<Result<Vec<_>>>()?;
        let test = split
            .test
            .par_iter()
            .map(|e| Ok((probe_label(&e.key), e.person, store.coefficients(&e.path, normalize)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PreparedSplit { train, test })
    }

    pub fn shape(&self) -> (usize, usize) {
        self.train[0].1.shape()
    }

    pub fn truth(&self) -> Vec<PersonId> {
        self.test.iter().map(|(_, p, _)| *p).collect()
    }

    pub fn discriminability(&self, variant: FisherVariant) -> Result<DiscriminabilityMap> {
        let stats = compute_statistics(self.train.iter().map(|(p, c)| (*p, c.as_ref())))?;
        Ok(fisher_map(&stats, variant))
    }

    /// Mask for `mode`; top-K selection learns its map from the training side.
    pub fn mask(&self, mode: MaskMode, variant: FisherVariant) -> Result<(SelectionMask, Option<DiscriminabilityMap>)> {
        let map = match mode {
            MaskMode::TopK(_) => Some(self.discriminability(variant)?),
            MaskMode::Square(_) => None,
        };
        Ok((build_mask(map.as_ref(), mode, self.shape())?, map))
    }

    pub fn score(&self, mask: &SelectionMask, p: f64) -> Result<DistanceTable> {
        let templates = self
            .train
            .iter()
            .map(|(person, c)| Ok((*person, extract_features(c, mask)?)))
            .collect::<Result<Vec<_>>>()?;
        let gallery = Gallery::new(templates)?;
        let probes = self
            .test
            .iter()
            .map(|(label, _, c)| Ok((label.clone(), extract_features(c, mask)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(score_probes(&probes, &gallery, p)?)
    }

    pub fn run(&self, mode: MaskMode, variant: FisherVariant, p: f64) -> Result<SensorRun> {
        let (mask, map) = self.mask(mode, variant)?;
        let table = self.score(&mask, p)?;
        Ok(SensorRun { table, truth: self.truth(), mask, map })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use msface_core::dataset::parse_sample_code;

    #[test]
    fn probe_label_drops_sensor() {
        let a = parse_sample_code("07S3CIR2", true).unwrap();
        let b = parse_sample_code("07S3TIR2", true).unwrap();
        assert_eq!(probe_label(&a), "07S3*IR2");
        assert_eq!(probe_label(&a), probe_label(&b));
    }
}
