//! Orthonormal two-dimensional DCT-II and its inverse.
//!
//! Each axis is normalized by its own length, so the transform is orthonormal
//! on rectangular grids and Parseval holds:
//!
//! ```text
//! X[l, k] = s_l s_k  sum_{n<b} sum_{m<a} x[n, m] cos((2m+1)k pi / 2a) cos((2n+1)l pi / 2b)
//! s_0 = sqrt(1/len), s_j = sqrt(2/len) for j > 0
//! ```
//!
//! where `a` is the width and `b` the height. Coefficients are stored with the
//! same row-major layout as the source image: column index = horizontal
//! frequency, row index = vertical frequency, `(0, 0)` is DC.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::features::Freq;
use crate::imaging::{Image, Matrix};
use crate::math;

/// DCT coefficients on the same grid as the source image.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefMatrix(Matrix);

impl CoefMatrix {
    pub fn from_matrix(m: Matrix) -> Self {
        CoefMatrix(m)
    }

    pub fn width(&self) -> usize {
        self.0.width()
    }

    pub fn height(&self) -> usize {
        self.0.height()
    }

    /// `(rows, cols)` of the frequency grid.
    pub fn shape(&self) -> (usize, usize) {
        (self.0.height(), self.0.width())
    }

    #[inline]
    pub fn at(&self, f: Freq) -> f64 {
        self.0.get(f.col, f.row)
    }

    pub fn dc(&self) -> f64 {
        self.0.get(0, 0)
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }
}

/// Precomputed cosine bases for one image size.
#[derive(Debug, Clone)]
pub struct Dct2Plan {
    width: usize,
    height: usize,
    basis_w: Vec<f64>,
    basis_h: Vec<f64>,
}

/// `n x n` orthonormal DCT-II basis, row `k` holds frequency `k`.
fn basis(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut c = Vec::with_capacity(n * n);
    for k in 0..n {
        let s = if k == 0 { math::sqrt(1.0 / nf) } else { math::sqrt(2.0 / nf) };
        for m in 0..n {
            c.push(s * math::cos(PI * (2 * m + 1) as f64 * k as f64 / (2.0 * nf)));
        }
    }
    c
}

impl Dct2Plan {
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "DCT plan needs a non-empty grid");
        Self { width, height, basis_w: basis(width), basis_h: basis(height) }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    fn check(&self, m: &Matrix) {
        assert!(
            m.width() == self.width && m.height() == self.height,
            "plan is {}x{}, input is {}x{}",
            self.width,
            self.height,
            m.width(),
            m.height()
        );
    }

    pub fn forward(&self, x: &Matrix) -> CoefMatrix {
        self.check(x);
        let (a, b) = (self.width, self.height);
        // Rows: tmp[n][k] = sum_m Cw[k][m] x[n][m]
        let mut tmp = Matrix::zeros(a, b);
        for n in 0..b {
            let row = x.row(n);
            for k in 0..a {
                let ck = &self.basis_w[k * a..(k + 1) * a];
                tmp.set(k, n, dot(ck, row));
            }
        }
        // Columns: out[l][k] = sum_n Ch[l][n] tmp[n][k]
        let mut out = Matrix::zeros(a, b);
        let t = tmp.as_slice();
        let o = out.as_mut_slice();
        for l in 0..b {
            let cl = &self.basis_h[l * b..(l + 1) * b];
            let orow = &mut o[l * a..(l + 1) * a];
            for (n, &c) in cl.iter().enumerate() {
                for (dst, &src) in orow.iter_mut().zip(&t[n * a..(n + 1) * a]) {
                    *dst += c * src;
                }
            }
        }
        CoefMatrix(out)
    }

    pub fn inverse(&self, coefs: &CoefMatrix) -> Matrix {
        let x = coefs.as_matrix();
        self.check(x);
        let (a, b) = (self.width, self.height);
        // Columns: tmp[n][k] = sum_l Ch[l][n] X[l][k]
        let mut tmp = Matrix::zeros(a, b);
        {
            let src = x.as_slice();
            let t = tmp.as_mut_slice();
            for l in 0..b {
                let xrow = &src[l * a..(l + 1) * a];
                for n in 0..b {
                    let c = self.basis_h[l * b + n];
                    for (dst, &s) in t[n * a..(n + 1) * a].iter_mut().zip(xrow) {
                        *dst += c * s;
                    }
                }
            }
        }
        // Rows: out[n][m] = sum_k Cw[k][m] tmp[n][k]
        let mut out = Matrix::zeros(a, b);
        for n in 0..b {
            let trow = tmp.row(n);
            for m in 0..a {
                let v: f64 = (0..a).map(|k| self.basis_w[k * a + m] * trow[k]).sum();
                out.set(m, n, v);
            }
        }
        out
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One-shot forward transform of an image.
pub fn dct2_forward(img: &Image) -> CoefMatrix {
    Dct2Plan::new(img.width(), img.height()).forward(img.as_matrix())
}

/// One-shot inverse transform.
pub fn dct2_inverse(coefs: &CoefMatrix) -> Matrix {
    Dct2Plan::new(coefs.width(), coefs.height()).inverse(coefs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn constant_4x4() {
        let c = dct2_forward(&Image::constant(4, 4, 0.25));
        assert!((c.dc() - 1.0).abs() < 1e-15);
        assert!(c.as_slice()[1..].iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn single_pixel_is_identity() {
        let img = Image::new(1, 1, vec![0.37]).unwrap();
        let c = dct2_forward(&img);
        assert!((c.dc() - 0.37).abs() < 1e-16);
    }

    #[test]
    fn constant_inverse() {
        let (a, b) = (6, 5);
        let mut m = Matrix::zeros(a, b);
        m.set(0, 0, math::sqrt((a * b) as f64) * 0.8);
        let x = dct2_inverse(&CoefMatrix::from_matrix(m));
        assert!(x.as_slice().iter().all(|v| (v - 0.8).abs() < 1e-14));
    }

    #[test]
    #[should_panic(expected = "plan is")]
    fn plan_shape_mismatch_panics() {
        Dct2Plan::new(4, 4).forward(&Matrix::zeros(4, 5));
    }
}
