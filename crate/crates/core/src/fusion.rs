//! Score-level fusion of per-sensor distance tables.
//!
//! Tables are combined entrywise with a weighted sum `sum_i w_i d_i`. The
//! fixed rule gives every sensor the same weight; the trained rule searches
//! the weights exhaustively on a grid and reports the identification-rate
//! surface.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::dataset::PersonId;
use crate::matcher::{identification_rate, nearest_template, DistanceTable, IdentificationRate, MatchError};
use crate::math;

/// Default grid increment for weight searches.
pub const DEFAULT_STEP: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FusionError {
    #[error("fusion needs at least {needed} tables, got {got}")]
    TooFewTables { needed: usize, got: usize },
    #[error("table {index} is {found:?}, expected {expected:?}")]
    ShapeMismatch { index: usize, expected: (usize, usize), found: (usize, usize) },
    #[error("table {0} has different row or column labels")]
    LabelMismatch(usize),
    #[error("{weights} weights for {tables} tables")]
    WeightCountMismatch { weights: usize, tables: usize },
    #[error("grid step {0} must divide [0, 1] into a whole number of intervals")]
    BadStep(f64),
    #[error("{truth} truth labels for {rows} probes")]
    TruthLength { truth: usize, rows: usize },
    #[error(transparent)]
    Match(#[from] MatchError),
}

/// One weight per sensor, in table order.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionWeights(Vec<f64>);

impl FusionWeights {
    pub fn new(weights: Vec<f64>) -> Self {
        FusionWeights(weights)
    }

    /// Fixed rule: `1/n` each.
    pub fn equal(n: usize) -> Self {
        FusionWeights(vec![1.0 / n as f64; n])
    }

    /// `alpha * A + (1 - alpha) * B`.
    pub fn two_way(alpha: f64) -> Self {
        FusionWeights(vec![alpha, 1.0 - alpha])
    }

    /// `alpha * A + beta * B + (1 - alpha - beta) * C`. The third weight may
    /// be negative when `alpha + beta > 1`.
    pub fn three_way(alpha: f64, beta: f64) -> Self {
        FusionWeights(vec![alpha, beta, 1.0 - alpha - beta])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// True when every weight is non-negative.
    pub fn in_simplex(&self) -> bool {
        self.0.iter().all(|&w| w >= 0.0)
    }
}

fn check_aligned(tables: &[&DistanceTable], needed: usize) -> Result<(), FusionError> {
    if tables.len() < needed {
        return Err(FusionError::TooFewTables { needed, got: tables.len() });
    }
    let first = tables[0];
    let expected = (first.rows(), first.cols());
    for (index, t) in tables.iter().enumerate().skip(1) {
        let found = (t.rows(), t.cols());
        if found != expected {
            return Err(FusionError::ShapeMismatch { index, expected, found });
        }
        if !t.same_labels(first) {
            return Err(FusionError::LabelMismatch(index));
        }
    }
    Ok(())
}

/// Weighted sum of one entry, accumulated in table order.
#[inline]
fn weighted_entry(tables: &[&DistanceTable], weights: &[f64], idx: usize) -> f64 {
    let mut acc = 0.0;
    for (t, w) in tables.iter().zip(weights) {
        acc += w * t.as_slice()[idx];
    }
    acc
}

/// Entrywise arithmetic mean of two or more aligned tables.
pub fn fuse_fixed(tables: &[&DistanceTable]) -> Result<DistanceTable, FusionError> {
    check_aligned(tables, 2)?;
    let k = tables.len() as f64;
    let len = tables[0].as_slice().len();
    let data = (0..len).map(|i| tables.iter().map(|t| t.as_slice()[i]).sum::<f64>() / k).collect();
    rebuild(tables[0], data)
}

pub fn fuse_weighted(tables: &[&DistanceTable], weights: &FusionWeights) -> Result<DistanceTable, FusionError> {
    check_aligned(tables, 1)?;
    if weights.0.len() != tables.len() {
        return Err(FusionError::WeightCountMismatch { weights: weights.0.len(), tables: tables.len() });
    }
    let len = tables[0].as_slice().len();
    let data = (0..len).map(|i| weighted_entry(tables, &weights.0, i)).collect();
    rebuild(tables[0], data)
}

fn rebuild(like: &DistanceTable, data: Vec<f64>) -> Result<DistanceTable, FusionError> {
    Ok(DistanceTable::from_parts(like.probe_labels().to_vec(), like.template_labels().to_vec(), data)?)
}

/// Min-max rescale of all entries onto `[0, 1]`. Off by default in the
/// pipeline; a constant table maps to zeros.
pub fn normalize_minmax(table: &DistanceTable) -> DistanceTable {
    let (lo, hi) =
        table.as_slice().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let span = hi - lo;
    table.map(|v| if span > 0.0 { (v - lo) / span } else { 0.0 }).expect("rescaled entries stay finite")
}

/// Inclusive grid `{0, step, ..., 1}`; endpoints are exact.
pub fn grid_axis(step: f64) -> Result<Vec<f64>, FusionError> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(FusionError::BadStep(step));
    }
    let intervals = math::round(1.0 / step);
    if (intervals * step - 1.0).abs() > 1e-9 {
        return Err(FusionError::BadStep(step));
    }
    let n = intervals as usize;
    Ok((0..=n).map(|i| i as f64 / n as f64).collect())
}

/// Identification-rate curve (2-way) or surface (3-way) over the weight grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    alphas: Vec<f64>,
    betas: Option<Vec<f64>>,
    surface: Vec<IdentificationRate>,
    best: (usize, usize),
    best_rate: IdentificationRate,
}

impl GridResult {
    /// Assembles a result from a precomputed surface (row = alpha index).
    /// The best point is the first maximum in row-major order.
    pub fn from_surface(alphas: Vec<f64>, betas: Option<Vec<f64>>, surface: Vec<IdentificationRate>) -> Self {
        let cols = betas.as_ref().map_or(1, Vec::len);
        assert_eq!(surface.len(), alphas.len() * cols, "surface does not match grid");
        let mut best = 0;
        for (i, r) in surface.iter().enumerate() {
            if r > &surface[best] {
                best = i;
            }
        }
        GridResult { best: (best / cols, best % cols), best_rate: surface[best], alphas, betas, surface }
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn betas(&self) -> Option<&[f64]> {
        self.betas.as_deref()
    }

    pub fn is_three_way(&self) -> bool {
        self.betas.is_some()
    }

    /// `(alpha points, beta points)`; beta count is 1 for a 2-way curve.
    pub fn dims(&self) -> (usize, usize) {
        (self.alphas.len(), self.betas.as_ref().map_or(1, Vec::len))
    }

    pub fn rate_at(&self, alpha_idx: usize, beta_idx: usize) -> IdentificationRate {
        self.surface[alpha_idx * self.dims().1 + beta_idx]
    }

    pub fn surface(&self) -> &[IdentificationRate] {
        &self.surface
    }

    pub fn best_index(&self) -> (usize, usize) {
        self.best
    }

    pub fn best_rate(&self) -> IdentificationRate {
        self.best_rate
    }

    pub fn best_alpha(&self) -> f64 {
        self.alphas[self.best.0]
    }

    pub fn best_beta(&self) -> Option<f64> {
        self.betas.as_ref().map(|b| b[self.best.1])
    }

    pub fn weights_at(&self, alpha_idx: usize, beta_idx: usize) -> FusionWeights {
        match &self.betas {
            Some(b) => FusionWeights::three_way(self.alphas[alpha_idx], b[beta_idx]),
            None => FusionWeights::two_way(self.alphas[alpha_idx]),
        }
    }

    pub fn best_weights(&self) -> FusionWeights {
        self.weights_at(self.best.0, self.best.1)
    }

    /// Whether the best point has non-negative weights on every sensor.
    pub fn best_in_simplex(&self) -> bool {
        self.best_weights().in_simplex()
    }
}

fn rate_for_weights(
    tables: &[&DistanceTable],
    weights: &[f64],
    truth: &[PersonId],
    row_buf: &mut [f64],
) -> IdentificationRate {
    let labels = tables[0].template_labels();
    let cols = tables[0].cols();
    let mut correct = 0;
    for (r, want) in truth.iter().enumerate() {
        for (c, slot) in row_buf.iter_mut().enumerate() {
            *slot = weighted_entry(tables, weights, r * cols + c);
        }
        if labels[nearest_template(row_buf, labels)].person == *want {
            correct += 1;
        }
    }
    IdentificationRate { correct, total: truth.len() }
}

fn check_truth(table: &DistanceTable, truth: &[PersonId]) -> Result<(), FusionError> {
    if truth.len() != table.rows() {
        return Err(FusionError::TruthLength { truth: truth.len(), rows: table.rows() });
    }
    Ok(())
}

/// Sweeps `alpha` over the inclusive grid for `alpha * A + (1 - alpha) * B`.
/// Ties on the best rate go to the smallest alpha.
pub fn grid_search_2(
    a: &DistanceTable,
    b: &DistanceTable,
    truth: &[PersonId],
    step: f64,
) -> Result<GridResult, FusionError> {
    let tables = [a, b];
    check_aligned(&tables, 2)?;
    check_truth(a, truth)?;
    let alphas = grid_axis(step)?;
    let mut buf = vec![0.0; a.cols()];
    let surface = alphas
        .iter()
        .map(|&al| rate_for_weights(&tables, FusionWeights::two_way(al).as_slice(), truth, &mut buf))
        .collect();
    Ok(GridResult::from_surface(alphas, None, surface))
}

/// Sweeps the full `(alpha, beta)` unit square for
/// `alpha * A + beta * B + (1 - alpha - beta) * C`, including points where the
/// weight on `C` is negative. Ties go to the lexicographically smallest
/// `(alpha, beta)`.
pub fn grid_search_3(
    a: &DistanceTable,
    b: &DistanceTable,
    c: &DistanceTable,
    truth: &[PersonId],
    step: f64,
) -> Result<GridResult, FusionError> {
    let tables = [a, b, c];
    check_aligned(&tables, 3)?;
    check_truth(a, truth)?;
    let axis = grid_axis(step)?;
    let mut buf = vec![0.0; a.cols()];
    let mut surface = Vec::with_capacity(axis.len() * axis.len());
    for &al in &axis {
        for &be in &axis {
            let w = FusionWeights::three_way(al, be);
            surface.push(rate_for_weights(&tables, w.as_slice(), truth, &mut buf));
        }
    }
    Ok(GridResult::from_surface(axis.clone(), Some(axis), surface))
}

/// Rate of one fused configuration, computed through a materialized table.
pub fn fused_rate(
    tables: &[&DistanceTable],
    weights: &FusionWeights,
    truth: &[PersonId],
) -> Result<IdentificationRate, FusionError> {
    let fused = fuse_weighted(tables, weights)?;
    check_truth(&fused, truth)?;
    Ok(identification_rate(&crate::matcher::identify(&fused), truth)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::{identify, TemplateLabel};
    use alloc::string::String;

    fn labels(n: usize) -> Vec<TemplateLabel> {
        (0..n).map(|i| TemplateLabel { person: PersonId(i as u32 + 1), index: 0 }).collect()
    }

    fn table(rows: usize, data: Vec<f64>) -> DistanceTable {
        let cols = data.len() / rows;
        let probes = (0..rows).map(|i| alloc::format!("p{i}")).collect::<Vec<String>>();
        DistanceTable::from_parts(probes, labels(cols), data).unwrap()
    }

    #[test]
    fn fixed_is_mean() {
        let a = table(1, vec![2.0, 1.0]);
        let b = table(1, vec![4.0, 1.0]);
        let f = fuse_fixed(&[&a, &b]).unwrap();
        assert_eq!(f.as_slice(), &[3.0, 1.0]);
        let same = fuse_fixed(&[&a, &a, &a]).unwrap();
        assert_eq!(same.as_slice(), a.as_slice());
        assert!(matches!(fuse_fixed(&[&a]), Err(FusionError::TooFewTables { .. })));
    }

    #[test]
    fn alignment_errors() {
        let a = table(1, vec![2.0, 1.0]);
        let b = table(2, vec![4.0, 1.0, 0.0, 0.0]);
        assert!(matches!(fuse_fixed(&[&a, &b]), Err(FusionError::ShapeMismatch { index: 1, .. })));
        let c = DistanceTable::from_parts(vec!["other".into()], labels(2), vec![1.0, 1.0]).unwrap();
        assert_eq!(fuse_fixed(&[&a, &c]), Err(FusionError::LabelMismatch(1)));
        assert!(matches!(
            fuse_weighted(&[&a, &a], &FusionWeights::equal(3)),
            Err(FusionError::WeightCountMismatch { weights: 3, tables: 2 })
        ));
    }

    #[test]
    fn endpoints_select_single_tables() {
        let a = table(2, vec![0.3, 0.9, 0.5, 0.1]);
        let b = table(2, vec![0.8, 0.2, 0.4, 0.6]);
        assert_eq!(fuse_weighted(&[&a, &b], &FusionWeights::two_way(1.0)).unwrap(), a);
        assert_eq!(fuse_weighted(&[&a, &b], &FusionWeights::two_way(0.0)).unwrap(), b);
    }

    #[test]
    fn grid_axis_inclusive() {
        let g = grid_axis(0.01).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[100], 1.0);
        assert_eq!(g[50], 0.5);
        assert_eq!(grid_axis(0.25).unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(grid_axis(0.3).is_err());
        assert!(grid_axis(0.0).is_err());
    }

    #[test]
    fn identical_tables_give_flat_curve() {
        let a = table(2, vec![0.3, 0.9, 0.5, 0.1]);
        let truth = [PersonId(1), PersonId(1)];
        let g = grid_search_2(&a, &a, &truth, 0.1).unwrap();
        assert!(g.surface().iter().all(|r| r.correct == 1));
        assert_eq!(g.best_alpha(), 0.0);
        assert!(g.best_in_simplex());
    }

    #[test]
    fn truth_length_checked() {
        let a = table(2, vec![0.3, 0.9, 0.5, 0.1]);
        assert_eq!(grid_search_2(&a, &a, &[PersonId(1)], 0.5), Err(FusionError::TruthLength { truth: 1, rows: 2 }));
    }

    #[test]
    fn minmax_normalization() {
        let a = table(1, vec![2.0, 4.0, 3.0]);
        assert_eq!(normalize_minmax(&a).as_slice(), &[0.0, 1.0, 0.5]);
        let flat = table(1, vec![2.0, 2.0]);
        assert_eq!(normalize_minmax(&flat).as_slice(), &[0.0, 0.0]);
        assert_eq!(identify(&normalize_minmax(&a)), identify(&a));
    }
}
