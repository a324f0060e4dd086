//! Frequency-domain feature selection.
//!
//! Training statistics are gathered per DCT coefficient over the gallery
//! images, turned into a discriminability score per coefficient, and a zonal
//! mask picks the coefficients that make up each feature vector.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use thiserror::Error;

use crate::dataset::PersonId;
use crate::imaging::Matrix;
use crate::math;
use crate::transform::CoefMatrix;

/// Denominator guard for zero intra-class variance.
pub const SCORE_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureError {
    #[error("coefficient grid {found:?} does not match {expected:?}")]
    ShapeMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("no training samples")]
    EmptyTraining,
    #[error("invalid mask dimension: {0}")]
    BadDimension(&'static str),
}

/// A DCT coefficient position: `row` is the vertical frequency, `col` the
/// horizontal one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Freq {
    pub row: usize,
    pub col: usize,
}

impl Freq {
    pub const fn new(row: usize, col: usize) -> Self {
        Freq { row, col }
    }
}

impl fmt::Display for Freq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Per-coefficient statistics over a training set. All variances are
/// population variances (divisor = number of images).
#[derive(Debug, Clone)]
pub struct FrequencyStats {
    rows: usize,
    cols: usize,
    persons: Vec<PersonId>,
    images_per_person: Vec<usize>,
    mean: Vec<f64>,
    person_means: Vec<Vec<f64>>,
    person_vars: Vec<Vec<f64>>,
    variance: Vec<f64>,
    intra: Vec<f64>,
}

impl FrequencyStats {
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Persons in ascending id order; index `i` of the per-person accessors
    /// refers to `persons()[i]`.
    pub fn persons(&self) -> &[PersonId] {
        &self.persons
    }

    pub fn person_count(&self) -> usize {
        self.persons.len()
    }

    pub fn images_per_person(&self) -> &[usize] {
        &self.images_per_person
    }

    /// `Some(F)` when every person contributed the same number of images.
    pub fn balanced_count(&self) -> Option<usize> {
        let first = *self.images_per_person.first()?;
        self.images_per_person.iter().all(|&f| f == first).then_some(first)
    }

    fn idx(&self, f: Freq) -> usize {
        f.row * self.cols + f.col
    }

    pub fn mean(&self, f: Freq) -> f64 {
        self.mean[self.idx(f)]
    }

    pub fn person_mean(&self, person: usize, f: Freq) -> f64 {
        self.person_means[person][self.idx(f)]
    }

    pub fn person_variance(&self, person: usize, f: Freq) -> f64 {
        self.person_vars[person][self.idx(f)]
    }

    pub fn variance(&self, f: Freq) -> f64 {
        self.variance[self.idx(f)]
    }

    /// Sum over persons of the per-person variance.
    pub fn intra_variance(&self, f: Freq) -> f64 {
        self.intra[self.idx(f)]
    }

    /// Variance over the whole training subset.
    pub fn inter_variance(&self, f: Freq) -> f64 {
        self.variance(f)
    }
}

/// Accumulates training statistics. Persons are processed in ascending id
/// order so the floating-point reduction order is fixed.
pub fn compute_statistics<'a, I>(train: I) -> Result<FrequencyStats, FeatureError>
where
    I: IntoIterator<Item = (PersonId, &'a CoefMatrix)>,
{
    let mut groups: BTreeMap<PersonId, Vec<&'a CoefMatrix>> = BTreeMap::new();
    let mut shape = None;
    for (person, coefs) in train {
        let s = coefs.shape();
        match shape {
            None => shape = Some(s),
            Some(expected) if expected != s => return Err(FeatureError::ShapeMismatch { expected, found: s }),
            _ => {}
        }
        groups.entry(person).or_default().push(coefs);
    }
    let (rows, cols) = shape.ok_or(FeatureError::EmptyTraining)?;
    let len = rows * cols;

    let total: usize = groups.values().map(Vec::len).sum();
    let mut sum = vec![0.0; len];
    let mut person_means = Vec::with_capacity(groups.len());
    let mut person_vars = Vec::with_capacity(groups.len());
    for images in groups.values() {
        let f = images.len() as f64;
        let mut mp = vec![0.0; len];
        for img in images {
            for (acc, &v) in mp.iter_mut().zip(img.as_slice()) {
                *acc += v;
            }
        }
        for (s, acc) in sum.iter_mut().zip(mp.iter_mut()) {
            *s += *acc;
            *acc /= f;
        }
        let mut vp = vec![0.0; len];
        for img in images {
            for ((acc, &v), &m) in vp.iter_mut().zip(img.as_slice()).zip(&mp) {
                let d = v - m;
                *acc += d * d;
            }
        }
        vp.iter_mut().for_each(|v| *v /= f);
        person_means.push(mp);
        person_vars.push(vp);
    }
    let n = total as f64;
    let mean: Vec<f64> = sum.iter().map(|s| s / n).collect();
    let mut variance = vec![0.0; len];
    for img in groups.values().flatten() {
        for ((acc, &v), &m) in variance.iter_mut().zip(img.as_slice()).zip(&mean) {
            let d = v - m;
            *acc += d * d;
        }
    }
    variance.iter_mut().for_each(|v| *v /= n);
    let mut intra = vec![0.0; len];
    for vp in &person_vars {
        for (acc, v) in intra.iter_mut().zip(vp) {
            *acc += v;
        }
    }

    Ok(FrequencyStats {
        rows,
        cols,
        images_per_person: groups.values().map(Vec::len).collect(),
        persons: groups.into_keys().collect(),
        mean,
        person_means,
        person_vars,
        variance,
        intra,
    })
}

/// Which discriminability formula to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FisherVariant {
    /// `|m_intra - m_inter| / sqrt(s2_intra + s2_inter + eps)` with
    /// `m_intra = mean over persons of m_p` and `m_inter = m`. Identically
    /// zero on balanced training data.
    Literal,
    /// `s2_inter / (s2_intra + eps)`.
    #[default]
    VarianceRatio,
}

impl fmt::Display for FisherVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FisherVariant::Literal => "literal",
            FisherVariant::VarianceRatio => "ratio",
        })
    }
}

/// One non-negative, finite score per coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminabilityMap {
    rows: usize,
    cols: usize,
    scores: Vec<f64>,
    variant: FisherVariant,
}

impl DiscriminabilityMap {
    /// Wraps precomputed scores, e.g. a hand-built map in tests.
    pub fn from_scores(
        rows: usize,
        cols: usize,
        scores: Vec<f64>,
        variant: FisherVariant,
    ) -> Result<Self, FeatureError> {
        if rows == 0 || cols == 0 || scores.len() != rows * cols {
            return Err(FeatureError::BadDimension("score count does not match grid"));
        }
        Ok(Self { rows, cols, scores, variant })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn variant(&self) -> FisherVariant {
        self.variant
    }

    pub fn score(&self, f: Freq) -> f64 {
        self.scores[f.row * self.cols + f.col]
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }
}

pub fn fisher_map(stats: &FrequencyStats, variant: FisherVariant) -> DiscriminabilityMap {
    let len = stats.rows * stats.cols;
    let p = stats.persons.len() as f64;
    let scores = (0..len)
        .map(|i| {
            let intra = stats.intra[i];
            let inter = stats.variance[i];
            match variant {
                FisherVariant::Literal => {
                    let m_intra = stats.person_means.iter().map(|mp| mp[i]).sum::<f64>() / p;
                    (m_intra - stats.mean[i]).abs() / math::sqrt(intra + inter + SCORE_EPSILON)
                }
                FisherVariant::VarianceRatio => inter / (intra + SCORE_EPSILON),
            }
        })
        .collect();
    DiscriminabilityMap { rows: stats.rows, cols: stats.cols, scores, variant }
}

/// How the zonal mask chooses coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskMode {
    /// Upper-left `N x N` low-frequency window.
    Square(usize),
    /// The `K` highest-scoring coefficients of a discriminability map.
    TopK(usize),
}

impl fmt::Display for MaskMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaskMode::Square(n) => write!(f, "{n}x{n}"),
            MaskMode::TopK(k) => write!(f, "top{k}"),
        }
    }
}

/// Ordered list of retained coefficient positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionMask {
    rows: usize,
    cols: usize,
    positions: Vec<Freq>,
    mode: MaskMode,
}

impl SelectionMask {
    /// Builds a mask from explicit positions, rejecting duplicates and
    /// out-of-grid entries.
    pub fn from_positions(shape: (usize, usize), positions: Vec<Freq>, mode: MaskMode) -> Result<Self, FeatureError> {
        let (rows, cols) = shape;
        if positions.is_empty() {
            return Err(FeatureError::BadDimension("mask is empty"));
        }
        if positions.iter().any(|f| f.row >= rows || f.col >= cols) {
            return Err(FeatureError::BadDimension("position outside the grid"));
        }
        let mut seen = positions.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != positions.len() {
            return Err(FeatureError::BadDimension("duplicate position"));
        }
        Ok(Self { rows, cols, positions, mode })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn positions(&self) -> &[Freq] {
        &self.positions
    }

    pub fn mode(&self) -> MaskMode {
        self.mode
    }

    pub fn dimension(&self) -> usize {
        self.positions.len()
    }

    pub fn contains(&self, f: Freq) -> bool {
        self.positions.contains(&f)
    }

    /// Dense 0/1 mask over the grid.
    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for f in &self.positions {
            m.set(f.col, f.row, 1.0);
        }
        m
    }
}

/// Low-frequency-first ordering used to break score ties.
fn low_frequency_first(a: &Freq, b: &Freq) -> Ordering {
    (a.row + a.col, a.row).cmp(&(b.row + b.col, b.row))
}

pub fn build_mask(
    map: Option<&DiscriminabilityMap>,
    mode: MaskMode,
    shape: (usize, usize),
) -> Result<SelectionMask, FeatureError> {
    let (rows, cols) = shape;
    let positions = match mode {
        MaskMode::Square(n) => {
            if n == 0 || n > rows.min(cols) {
                return Err(FeatureError::BadDimension("square window must be within 1..=min(rows, cols)"));
            }
            (0..n).flat_map(|r| (0..n).map(move |c| Freq::new(r, c))).collect()
        }
        MaskMode::TopK(k) => {
            let map = map.ok_or(FeatureError::BadDimension("top-K selection needs a discriminability map"))?;
            if map.shape() != shape {
                return Err(FeatureError::ShapeMismatch { expected: shape, found: map.shape() });
            }
            if k == 0 || k > rows * cols {
                return Err(FeatureError::BadDimension("K must be within 1..=rows*cols"));
            }
            let mut all: Vec<Freq> = (0..rows).flat_map(|r| (0..cols).map(move |c| Freq::new(r, c))).collect();
            all.sort_by(|a, b| map.score(*b).total_cmp(&map.score(*a)).then_with(|| low_frequency_first(a, b)));
            all.truncate(k);
            all
        }
    };
    Ok(SelectionMask { rows, cols, positions, mode })
}

/// Coefficients read off in mask order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    values: Vec<f64>,
    mode: MaskMode,
}

impl FeatureVector {
    pub fn new(values: Vec<f64>, mode: MaskMode) -> Self {
        FeatureVector { values, mode }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    pub fn mode(&self) -> MaskMode {
        self.mode
    }

    pub fn scaled(&self, c: f64) -> FeatureVector {
        FeatureVector { values: self.values.iter().map(|v| v * c).collect(), mode: self.mode }
    }
}

pub fn extract_features(coefs: &CoefMatrix, mask: &SelectionMask) -> Result<FeatureVector, FeatureError> {
    if coefs.shape() != mask.shape() {
        return Err(FeatureError::ShapeMismatch { expected: mask.shape(), found: coefs.shape() });
    }
    Ok(FeatureVector { values: mask.positions.iter().map(|&f| coefs.at(f)).collect(), mode: mask.mode })
}
