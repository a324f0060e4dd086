//! Fractional-distance scoring and closed-set identification.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use thiserror::Error;

pub use crate::dataset::PersonId;
use crate::features::FeatureVector;
use crate::math;

/// Exponent used throughout the pipeline unless overridden.
pub const DEFAULT_EXPONENT: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatchError {
    #[error("vector dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("distance exponent must be positive and finite, got {0}")]
    BadExponent(f64),
    #[error("gallery is empty")]
    EmptyGallery,
    #[error("prediction and truth lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("no predictions to score")]
    Empty,
    #[error("table has {rows}x{cols} labels but {len} entries")]
    BadTable { rows: usize, cols: usize, len: usize },
    #[error("table entry {0} is not finite")]
    NonFinite(usize),
}

/// `(sum_i |x_i - y_i|^p)^(1/p)`.
///
/// Not a metric for `p < 1`; it is still symmetric, non-negative and zero on
/// equal inputs, and positively homogeneous of degree one.
pub fn fractional_distance(x: &[f64], y: &[f64], p: f64) -> Result<f64, MatchError> {
    if x.len() != y.len() {
        return Err(MatchError::DimensionMismatch(x.len(), y.len()));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(MatchError::BadExponent(p));
    }
    Ok(distance_unchecked(x, y, p))
}

#[inline]
fn distance_unchecked(x: &[f64], y: &[f64], p: f64) -> f64 {
    let diffs = x.iter().zip(y).map(|(a, b)| (a - b).abs());
    if p == 0.5 {
        let s: f64 = diffs.map(math::sqrt).sum();
        s * s
    } else if p == 1.0 {
        diffs.sum()
    } else if p == 2.0 {
        math::sqrt(diffs.map(|d| d * d).sum())
    } else {
        math::powf(diffs.map(|d| math::powf(d, p)).sum(), 1.0 / p)
    }
}

/// Column label of a distance table: the template's person and its ordinal
/// among that person's templates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TemplateLabel {
    pub person: PersonId,
    pub index: u32,
}

impl fmt::Display for TemplateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.person, self.index)
    }
}

/// Enrolled templates.
#[derive(Debug, Clone)]
pub struct Gallery {
    templates: Vec<(PersonId, FeatureVector)>,
    labels: Vec<TemplateLabel>,
}

impl Gallery {
    pub fn new(templates: Vec<(PersonId, FeatureVector)>) -> Result<Self, MatchError> {
        let dim = templates.first().ok_or(MatchError::EmptyGallery)?.1.dimension();
        if let Some((_, v)) = templates.iter().find(|(_, v)| v.dimension() != dim) {
            return Err(MatchError::DimensionMismatch(dim, v.dimension()));
        }
        let mut counts: alloc::collections::BTreeMap<PersonId, u32> = Default::default();
        let labels = templates
            .iter()
            .map(|(person, _)| {
                let c = counts.entry(*person).or_insert(0);
                let label = TemplateLabel { person: *person, index: *c };
                *c += 1;
                label
            })
            .collect();
        Ok(Self { templates, labels })
    }

    pub fn dimension(&self) -> usize {
        self.templates[0].1.dimension()
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn labels(&self) -> &[TemplateLabel] {
        &self.labels
    }

    pub fn templates(&self) -> &[(PersonId, FeatureVector)] {
        &self.templates
    }

    pub fn person_count(&self) -> usize {
        let mut p: Vec<PersonId> = self.labels.iter().map(|l| l.person).collect();
        p.sort_unstable();
        p.dedup();
        p.len()
    }
}

/// Probe x template distances, row-major.
///
/// Raw matcher output is non-negative; a table fused with a negative weight
/// may hold negative entries, so only finiteness is enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    probes: Vec<String>,
    templates: Vec<TemplateLabel>,
    data: Vec<f64>,
}

impl DistanceTable {
    pub fn from_parts(probes: Vec<String>, templates: Vec<TemplateLabel>, data: Vec<f64>) -> Result<Self, MatchError> {
        let (rows, cols) = (probes.len(), templates.len());
        if rows == 0 || cols == 0 || rows * cols != data.len() {
            return Err(MatchError::BadTable { rows, cols, len: data.len() });
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(MatchError::NonFinite(i));
        }
        Ok(Self { probes, templates, data })
    }

    pub fn rows(&self) -> usize {
        self.probes.len()
    }

    pub fn cols(&self) -> usize {
        self.templates.len()
    }

    pub fn probe_labels(&self) -> &[String] {
        &self.probes
    }

    pub fn template_labels(&self) -> &[TemplateLabel] {
        &self.templates
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.templates.len() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let c = self.templates.len();
        &self.data[row * c..(row + 1) * c]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Same labels, entries replaced by `f(entry)`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<DistanceTable, MatchError> {
        DistanceTable::from_parts(
            self.probes.clone(),
            self.templates.clone(),
            self.data.iter().map(|&v| f(v)).collect(),
        )
    }

    pub fn same_labels(&self, other: &DistanceTable) -> bool {
        self.probes == other.probes && self.templates == other.templates
    }
}

/// Distances from every probe to every gallery template.
pub fn score_probes(
    probes: &[(String, FeatureVector)],
    gallery: &Gallery,
    p: f64,
) -> Result<DistanceTable, MatchError> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(MatchError::BadExponent(p));
    }
    let dim = gallery.dimension();
    let mut data = Vec::with_capacity(probes.len() * gallery.len());
    for (_, probe) in probes {
        if probe.dimension() != dim {
            return Err(MatchError::DimensionMismatch(probe.dimension(), dim));
        }
        for (_, t) in &gallery.templates {
            data.push(distance_unchecked(probe.values(), t.values(), p));
        }
    }
    DistanceTable::from_parts(probes.iter().map(|(l, _)| l.clone()).collect(), gallery.labels.clone(), data)
}

/// Column index of the nearest template in a row of distances. Ties go to the
/// lowest person id, then the lowest template index.
pub fn nearest_template(row: &[f64], labels: &[TemplateLabel]) -> usize {
    let mut best = 0;
    for j in 1..row.len() {
        let ord = row[j].total_cmp(&row[best]).then_with(|| labels[j].cmp(&labels[best]));
        if ord == Ordering::Less {
            best = j;
        }
    }
    best
}

/// Predicted person for every probe row.
pub fn identify(table: &DistanceTable) -> Vec<PersonId> {
    (0..table.rows()).map(|r| table.templates[nearest_template(table.row(r), &table.templates)].person).collect()
}

/// Closed-set identification rate as an exact fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IdentificationRate {
    pub correct: usize,
    pub total: usize,
}

impl IdentificationRate {
    pub fn percent(&self) -> f64 {
        100.0 * self.correct as f64 / self.total as f64
    }

    /// Percentage rounded to 0.01.
    pub fn rounded(&self) -> f64 {
        math::round(self.percent() * 100.0) / 100.0
    }
}

impl PartialOrd for IdentificationRate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        // Cross-multiplication keeps the comparison exact.
        let a = self.correct as u128 * other.total as u128;
        let b = other.correct as u128 * self.total as u128;
        Some(a.cmp(&b))
    }
}

impl fmt::Display for IdentificationRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2}", self.percent())
    }
}

pub fn identification_rate(predicted: &[PersonId], truth: &[PersonId]) -> Result<IdentificationRate, MatchError> {
    if predicted.len() != truth.len() {
        return Err(MatchError::LengthMismatch(predicted.len(), truth.len()));
    }
    if predicted.is_empty() {
        return Err(MatchError::Empty);
    }
    let correct = predicted.iter().zip(truth).filter(|(a, b)| a == b).count();
    Ok(IdentificationRate { correct, total: predicted.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::MaskMode;
    use alloc::format;
    use alloc::vec;

    fn fv(v: &[f64]) -> FeatureVector {
        FeatureVector::new(v.to_vec(), MaskMode::TopK(v.len()))
    }

    #[test]
    fn hand_cases() {
        assert_eq!(fractional_distance(&[1.0, 2.0], &[1.0, 2.0], 0.5).unwrap(), 0.0);
        assert_eq!(fractional_distance(&[0.0, 0.0], &[3.0, 4.0], 2.0).unwrap(), 5.0);
        assert_eq!(fractional_distance(&[0.0, 0.0], &[1.0, 1.0], 0.5).unwrap(), 4.0);
        let d = fractional_distance(&[0.0, 0.0], &[1.0, 1.0], 0.7).unwrap();
        assert!((d - libm::pow(2.0, 1.0 / 0.7)).abs() < 1e-12);
    }

    #[test]
    fn distance_errors() {
        assert_eq!(fractional_distance(&[0.0], &[0.0, 1.0], 0.5), Err(MatchError::DimensionMismatch(1, 2)));
        assert_eq!(fractional_distance(&[0.0], &[1.0], 0.0), Err(MatchError::BadExponent(0.0)));
        assert!(fractional_distance(&[0.0], &[1.0], f64::NAN).is_err());
    }

    #[test]
    fn exact_match_wins() {
        let gallery = Gallery::new(vec![
            (PersonId(3), fv(&[1.0, 1.0])),
            (PersonId(7), fv(&[0.2, 0.4])),
            (PersonId(7), fv(&[5.0, 5.0])),
        ])
        .unwrap();
        assert_eq!(gallery.labels()[2], TemplateLabel { person: PersonId(7), index: 1 });
        let table = score_probes(&[("q".into(), fv(&[0.2, 0.4]))], &gallery, 0.5).unwrap();
        assert_eq!(table.get(0, 1), 0.0);
        assert_eq!(identify(&table), vec![PersonId(7)]);
    }

    #[test]
    fn ties_go_to_lower_person() {
        let labels = vec![
            TemplateLabel { person: PersonId(5), index: 0 },
            TemplateLabel { person: PersonId(2), index: 1 },
            TemplateLabel { person: PersonId(2), index: 0 },
        ];
        let t = DistanceTable::from_parts(vec!["a".into()], labels, vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(identify(&t), vec![PersonId(2)]);
        assert_eq!(nearest_template(t.row(0), t.template_labels()), 2);
    }

    #[test]
    fn rate_values() {
        let p: Vec<PersonId> = (0..205).map(|i| PersonId(if i < 184 { 1 } else { 2 })).collect();
        let t = vec![PersonId(1); 205];
        let r = identification_rate(&p, &t).unwrap();
        assert_eq!(r.rounded(), 89.76);
        assert_eq!(format!("{r}"), "89.76");
        assert_eq!(identification_rate(&t, &t).unwrap().percent(), 100.0);
        assert_eq!(identification_rate(&[PersonId(2)], &[PersonId(1)]).unwrap().percent(), 0.0);
        assert_eq!(identification_rate(&[], &[]), Err(MatchError::Empty));
        assert_eq!(identification_rate(&t[..1], &t), Err(MatchError::LengthMismatch(1, 205)));
    }

    #[test]
    fn gallery_validation() {
        assert!(matches!(Gallery::new(vec![]), Err(MatchError::EmptyGallery)));
        assert!(matches!(
            Gallery::new(vec![(PersonId(1), fv(&[1.0])), (PersonId(2), fv(&[1.0, 2.0]))]),
            Err(MatchError::DimensionMismatch(1, 2))
        ));
    }

    #[test]
    fn table_rejects_non_finite() {
        let l = vec![TemplateLabel { person: PersonId(1), index: 0 }];
        assert_eq!(DistanceTable::from_parts(vec!["a".into()], l, vec![f64::NAN]), Err(MatchError::NonFinite(0)));
    }
}
