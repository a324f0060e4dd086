mod common;

use std::f64::consts::PI;

use msface_core::imaging::{Image, Matrix};
use msface_core::transform::{dct2_forward, dct2_inverse, CoefMatrix, Dct2Plan};
use msface_core::Freq;
use proptest::prelude::*;

/// Direct double sum with each axis normalized by its own length.
fn naive_dct2(x: &Matrix) -> Vec<f64> {
    let (a, b) = (x.width(), x.height());
    let c = |k: usize| if k == 0 { (0.5f64).sqrt() } else { 1.0 };
    let mut out = vec![0.0; a * b];
    for l in 0..b {
        for k in 0..a {
            let mut s = 0.0;
            for n in 0..b {
                for m in 0..a {
                    s += x.get(m, n)
                        * ((2 * m + 1) as f64 * k as f64 * PI / (2.0 * a as f64)).cos()
                        * ((2 * n + 1) as f64 * l as f64 * PI / (2.0 * b as f64)).cos();
                }
            }
            out[l * a + k] = (2.0 / a as f64).sqrt() * (2.0 / b as f64).sqrt() * c(k) * c(l) * s;
        }
    }
    out
}

#[test]
fn forward_matches_double_sum_on_random_8x8() {
    let mut rng = common::rng(11);
    let plan = Dct2Plan::new(8, 8);
    for _ in 0..100 {
        let x = common::random_matrix(&mut rng, 8, 8);
        let got = plan.forward(&x);
        for (g, w) in got.as_slice().iter().zip(naive_dct2(&x)) {
            assert!((g - w).abs() < 1e-10, "{g} vs {w}");
        }
    }
}

#[test]
fn forward_matches_double_sum_on_rectangle() {
    let mut rng = common::rng(12);
    let x = common::random_matrix(&mut rng, 7, 11);
    let got = Dct2Plan::new(7, 11).forward(&x);
    for (g, w) in got.as_slice().iter().zip(naive_dct2(&x)) {
        assert!((g - w).abs() < 1e-10);
    }
}

#[test]
fn roundtrip_and_parseval_at_canonical_size() {
    let mut rng = common::rng(13);
    let plan = Dct2Plan::new(100, 145);
    let x = common::random_matrix(&mut rng, 100, 145);
    let c = plan.forward(&x);
    let y = plan.inverse(&c);
    let scale = x.as_slice().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (a, b) in x.as_slice().iter().zip(y.as_slice()) {
        assert!((a - b).abs() <= 1e-9 * scale);
    }
    let (ex, ec) = (x.energy(), c.as_matrix().energy());
    assert!((ex - ec).abs() <= 1e-9 * ex);
}

#[test]
fn unit_coefficient_inverts_to_basis_image() {
    let (a, b) = (6, 9);
    let (k, l) = (2, 5);
    let mut m = Matrix::zeros(a, b);
    m.set(k, l, 1.0);
    let img = dct2_inverse(&CoefMatrix::from_matrix(m));
    for n in 0..b {
        for mm in 0..a {
            let want = (2.0 / a as f64).sqrt()
                * (2.0 / b as f64).sqrt()
                * ((2 * mm + 1) as f64 * k as f64 * PI / (2.0 * a as f64)).cos()
                * ((2 * n + 1) as f64 * l as f64 * PI / (2.0 * b as f64)).cos();
            assert!((img.get(mm, n) - want).abs() < 1e-12);
        }
    }
    assert!((img.energy() - 1.0).abs() < 1e-12);
}

#[test]
fn dc_of_constant_image() {
    let c = dct2_forward(&Image::constant(10, 12, 0.7));
    assert!((c.at(Freq::new(0, 0)) - (120f64).sqrt() * 0.7).abs() < 1e-12);
    assert!(c.as_slice()[1..].iter().all(|v| v.abs() < 1e-12));
}

#[test]
fn smooth_images_compact_energy_into_low_corner() {
    let mut rng = common::rng(14);
    let noise = common::random_matrix(&mut rng, 100, 145);
    // 9x9 box blur, edge clamped.
    let r = 4isize;
    let smooth = Matrix::from_fn(100, 145, |x, y| {
        let mut s = 0.0;
        for dy in -r..=r {
            for dx in -r..=r {
                let xx = (x as isize + dx).clamp(0, 99) as usize;
                let yy = (y as isize + dy).clamp(0, 144) as usize;
                s += noise.get(xx, yy);
            }
        }
        s / 81.0
    });
    let c = Dct2Plan::new(100, 145).forward(&smooth);
    let total = c.as_matrix().energy();
    let low: f64 = (0..10).flat_map(|r| (0..10).map(move |k| (r, k))).map(|(r, k)| c.at(Freq::new(r, k)).powi(2)).sum();
    assert!(low / total >= 0.9, "{}", low / total);
}

fn matrix_strategy() -> impl Strategy<Value = Matrix> {
    (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
        prop::collection::vec(-10.0f64..10.0, w * h).prop_map(move |d| Matrix::new(w, h, d).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn parseval_holds(x in matrix_strategy()) {
        let c = Dct2Plan::new(x.width(), x.height()).forward(&x);
        let (ex, ec) = (x.energy(), c.as_matrix().energy());
        prop_assert!((ex - ec).abs() <= 1e-9 * ex.max(1e-300));
    }
}

proptest! {
    #[test]
    fn linear(x in matrix_strategy(), alpha in -3.0f64..3.0, beta in -3.0f64..3.0, seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let y = common::random_matrix(&mut rng, x.width(), x.height());
        let plan = Dct2Plan::new(x.width(), x.height());
        let combo = Matrix::new(
            x.width(),
            x.height(),
            x.as_slice().iter().zip(y.as_slice()).map(|(a, b)| alpha * a + beta * b).collect(),
        ).unwrap();
        let lhs = plan.forward(&combo);
        let (fx, fy) = (plan.forward(&x), plan.forward(&y));
        for i in 0..lhs.as_slice().len() {
            let rhs = alpha * fx.as_slice()[i] + beta * fy.as_slice()[i];
            prop_assert!((lhs.as_slice()[i] - rhs).abs() < 1e-10);
        }
    }
}
