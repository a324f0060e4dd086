//! Image containers and the preprocessing applied before the DCT.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::math;

/// Canonical face width after preprocessing.
pub const CANONICAL_WIDTH: usize = 100;
/// Canonical face height after preprocessing.
pub const CANONICAL_HEIGHT: usize = 145;
/// Default fraction of pixels saturated at each end by [`normalize_intensity`].
pub const DEFAULT_SATURATE_FRACTION: f64 = 0.01;
/// Bicubic kernel parameter (Catmull-Rom family).
pub const BICUBIC_A: f64 = -0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImagingError {
    #[error("image dimensions {width}x{height} do not match {len} pixels")]
    BadDimensions { width: usize, height: usize, len: usize },
    #[error("pixel {index} has value {value} outside [0, 1]")]
    PixelOutOfRange { index: usize, value: f64 },
    #[error("saturate fraction {0} is outside [0, 0.5)")]
    BadFraction(f64),
    #[error("image {width}x{height} is smaller than the 4x4 bicubic support")]
    TooSmall { width: usize, height: usize },
    #[error("row {row} has {found} cells, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },
}

/// Dense row-major matrix of reals. `get(x, y)` reads column `x` of row `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self, ImagingError> {
        if width == 0 || height == 0 || width * height != data.len() {
            return Err(ImagingError::BadDimensions { width, height, len: data.len() });
        }
        Ok(Self { width, height, data })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "matrix dimensions must be non-zero");
        Self { width, height, data: vec![0.0; width * height] }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(width, height);
        for y in 0..height {
            for x in 0..width {
                m.data[y * width + x] = f(x, y);
            }
        }
        m
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.data[y * self.width + x] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix { width: self.width, height: self.height, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    pub fn energy(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }
}

/// Grayscale intensities in `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Image(Matrix);

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self, ImagingError> {
        Self::from_matrix(Matrix::new(width, height, pixels)?)
    }

    pub fn from_matrix(m: Matrix) -> Result<Self, ImagingError> {
        if let Some((index, &value)) = m.data.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
            return Err(ImagingError::PixelOutOfRange { index, value });
        }
        Ok(Image(m))
    }

    /// Clamps every value into `[0, 1]`; NaN becomes 0.
    pub fn from_matrix_clamped(mut m: Matrix) -> Self {
        for v in &mut m.data {
            *v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
        }
        Image(m)
    }

    pub fn constant(width: usize, height: usize, value: f64) -> Self {
        Image::from_matrix_clamped(Matrix::from_fn(width, height, |_, _| value))
    }

    pub fn width(&self) -> usize {
        self.0.width
    }

    pub fn height(&self) -> usize {
        self.0.height
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.0.get(x, y)
    }

    pub fn pixels(&self) -> &[f64] {
        &self.0.data
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }
}

/// Maps a temperature matrix to gray levels with a per-image linear min-max
/// stretch. A constant matrix maps to 0.5 everywhere.
pub fn thermal_to_gray(rows: &[Vec<f64>]) -> Result<Image, ImagingError> {
    let height = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    if width == 0 {
        return Err(ImagingError::BadDimensions { width, height, len: 0 });
    }
    let mut data = Vec::with_capacity(width * height);
    for (row, cells) in rows.iter().enumerate() {
        if cells.len() != width {
            return Err(ImagingError::RaggedRows { row, expected: width, found: cells.len() });
        }
        data.extend_from_slice(cells);
    }
    let (lo, hi) = min_max(&data);
    let span = hi - lo;
    let data = if span > 0.0 {
        data.iter().map(|t| ((t - lo) / span).clamp(0.0, 1.0)).collect()
    } else {
        vec![0.5; data.len()]
    };
    Ok(Image(Matrix { width, height, data }))
}

fn min_max(values: &[f64]) -> (f64, f64) {
    values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// Nearest-rank percentile bounds `(p_lo, p_hi)` used by [`normalize_intensity`].
///
/// The rank of a fraction `q` over `n` sorted values is `ceil(q * n)`, clamped
/// to `[1, n]` (1-based).
pub fn saturation_bounds(pixels: &[f64], saturate_fraction: f64) -> Result<(f64, f64), ImagingError> {
    if !(0.0..0.5).contains(&saturate_fraction) {
        return Err(ImagingError::BadFraction(saturate_fraction));
    }
    let mut sorted = pixels.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let lo = nearest_rank(n, saturate_fraction);
    let hi = nearest_rank(n, 1.0 - saturate_fraction);
    Ok((sorted[lo - 1], sorted[hi - 1]))
}

fn nearest_rank(n: usize, q: f64) -> usize {
    // Guard against q * n landing a hair above an integer (0.99 * 200).
    let r = math::ceil(q * n as f64 - 1e-9);
    (r.max(1.0) as usize).min(n)
}

/// Contrast stretch: the lowest and highest `saturate_fraction` of pixels are
/// clipped and the rest mapped linearly onto `[0, 1]`.
pub fn normalize_intensity(img: &Image, saturate_fraction: f64) -> Result<Image, ImagingError> {
    let (lo, hi) = saturation_bounds(img.pixels(), saturate_fraction)?;
    let m = if hi > lo {
        let span = hi - lo;
        img.0.map(|v| ((v.clamp(lo, hi) - lo) / span).clamp(0.0, 1.0))
    } else {
        img.0.map(|_| 0.5)
    };
    Ok(Image(m))
}

/// Keys cubic convolution kernel with parameter [`BICUBIC_A`].
#[inline]
pub fn cubic_kernel(x: f64) -> f64 {
    let a = BICUBIC_A;
    let x = x.abs();
    if x <= 1.0 {
        ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0
    } else if x < 2.0 {
        ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a
    } else {
        0.0
    }
}

/// Four clamped source taps and their weights for one output coordinate.
struct Taps {
    index: [usize; 4],
    weight: [f64; 4],
}

fn taps_for_axis(src_len: usize, dst_len: usize) -> Vec<Taps> {
    let scale = src_len as f64 / dst_len as f64;
    let last = src_len as isize - 1;
    (0..dst_len)
        .map(|o| {
            // Pixel centres aligned: output o covers source [o*scale, (o+1)*scale).
            let center = (o as f64 + 0.5) * scale - 0.5;
            let base = math::floor(center) as isize;
            let mut t = Taps { index: [0; 4], weight: [0.0; 4] };
            for k in 0..4 {
                let s = base - 1 + k as isize;
                t.index[k] = s.clamp(0, last) as usize;
                t.weight[k] = cubic_kernel(center - s as f64);
            }
            t
        })
        .collect()
}

/// Separable bicubic resampling without output clamping.
pub fn resize_bicubic_matrix(m: &Matrix, out_w: usize, out_h: usize) -> Result<Matrix, ImagingError> {
    if m.width < 4 || m.height < 4 {
        return Err(ImagingError::TooSmall { width: m.width, height: m.height });
    }
    if out_w == 0 || out_h == 0 {
        return Err(ImagingError::BadDimensions { width: out_w, height: out_h, len: 0 });
    }
    let xt = taps_for_axis(m.width, out_w);
    let yt = taps_for_axis(m.height, out_h);

    // Horizontal pass: height rows of out_w.
    let mut tmp = Matrix::zeros(out_w, m.height);
    for y in 0..m.height {
        let src = m.row(y);
        for (x, t) in xt.iter().enumerate() {
            let v: f64 = (0..4).map(|k| t.weight[k] * src[t.index[k]]).sum();
            tmp.set(x, y, v);
        }
    }
    // Vertical pass.
    let mut out = Matrix::zeros(out_w, out_h);
    for (y, t) in yt.iter().enumerate() {
        for x in 0..out_w {
            let v: f64 = (0..4).map(|k| t.weight[k] * tmp.get(x, t.index[k])).sum();
            out.set(x, y, v);
        }
    }
    Ok(out)
}

/// Bicubic resize to `out_w x out_h`, output clamped to `[0, 1]`.
pub fn resize_bicubic(img: &Image, out_w: usize, out_h: usize) -> Result<Image, ImagingError> {
    resize_bicubic_matrix(&img.0, out_w, out_h).map(Image::from_matrix_clamped)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(n: usize) -> Image {
        let px: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        Image::new(n, 1, px).unwrap()
    }

    #[test]
    fn image_rejects_out_of_range_pixels() {
        assert!(matches!(Image::new(2, 1, vec![0.0, 1.5]), Err(ImagingError::PixelOutOfRange { index: 1, .. })));
        assert!(matches!(Image::new(2, 2, vec![0.0; 3]), Err(ImagingError::BadDimensions { .. })));
    }

    #[test]
    fn thermal_min_max() {
        let img = thermal_to_gray(&[vec![20.0, 30.0], vec![25.0, 35.0]]).unwrap();
        let want = [0.0, 2.0 / 3.0, 1.0 / 3.0, 1.0];
        for (a, b) in img.pixels().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn thermal_constant_is_mid_gray() {
        let img = thermal_to_gray(&[vec![36.5; 3], vec![36.5; 3]]).unwrap();
        assert!(img.pixels().iter().all(|&v| v == 0.5));
    }

    #[test]
    fn thermal_ragged() {
        let err = thermal_to_gray(&[vec![1.0, 2.0], vec![3.0]]).unwrap_err();
        assert_eq!(err, ImagingError::RaggedRows { row: 1, expected: 2, found: 1 });
    }

    #[test]
    fn ramp_clamps_at_one_percent_ranks() {
        // 200 sorted values: rank ceil(0.01*200)=2 and ceil(0.99*200)=198.
        let img = ramp(200);
        let out = normalize_intensity(&img, 0.01).unwrap();
        let p = out.pixels();
        assert_eq!(p[0], 0.0);
        assert_eq!(p[1], 0.0);
        assert!(p[2] > 0.0);
        assert!(p[196] < 1.0);
        assert_eq!(p[197], 1.0);
        assert_eq!(p[199], 1.0);
        let lo = 1.0 / 199.0;
        let hi = 197.0 / 199.0;
        for (i, &v) in p.iter().enumerate() {
            let x = (i as f64 / 199.0).clamp(lo, hi);
            assert!((v - (x - lo) / (hi - lo)).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_normalizes_to_half() {
        let out = normalize_intensity(&Image::constant(5, 5, 0.3), 0.01).unwrap();
        assert!(out.pixels().iter().all(|&v| v == 0.5));
    }

    #[test]
    fn bad_fraction() {
        let img = Image::constant(2, 2, 0.1);
        assert_eq!(normalize_intensity(&img, 0.5), Err(ImagingError::BadFraction(0.5)));
        assert_eq!(normalize_intensity(&img, -0.1), Err(ImagingError::BadFraction(-0.1)));
    }

    #[test]
    fn kernel_interpolates() {
        assert_eq!(cubic_kernel(0.0), 1.0);
        assert_eq!(cubic_kernel(1.0), 0.0);
        assert_eq!(cubic_kernel(2.0), 0.0);
        assert_eq!(cubic_kernel(-1.0), 0.0);
        // Partition of unity at an arbitrary phase.
        let t = 0.3;
        let s: f64 = (-1..3).map(|k| cubic_kernel(t - k as f64)).sum();
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn resize_too_small() {
        let img = Image::constant(3, 8, 0.2);
        assert_eq!(resize_bicubic(&img, 10, 10), Err(ImagingError::TooSmall { width: 3, height: 8 }));
    }

    #[test]
    fn resize_constant_stays_constant() {
        let img = Image::constant(7, 9, 0.42);
        let out = resize_bicubic(&img, 100, 145).unwrap();
        assert!(out.pixels().iter().all(|&v| (v - 0.42).abs() < 1e-12));
    }
}
