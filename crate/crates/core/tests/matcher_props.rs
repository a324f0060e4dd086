mod common;

use msface_core::features::{FeatureVector, MaskMode};
use msface_core::matcher::{fractional_distance, identify, score_probes, DistanceTable, Gallery, TemplateLabel};
use msface_core::PersonId;
use proptest::prelude::*;
use rand::Rng;

fn fv(v: Vec<f64>) -> FeatureVector {
    let n = v.len();
    FeatureVector::new(v, MaskMode::TopK(n))
}

#[test]
fn p2_equals_euclidean_on_random_pairs() {
    let mut rng = common::rng(21);
    for _ in 0..1000 {
        let n = rng.random_range(1..64);
        let x = common::random_vec(&mut rng, n, 10.0);
        let y = common::random_vec(&mut rng, n, 10.0);
        let direct = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        assert!((fractional_distance(&x, &y, 2.0).unwrap() - direct).abs() < 1e-12);
    }
}

#[test]
fn score_probes_matches_elementwise_loop() {
    let mut rng = common::rng(22);
    let dim = 12;
    let templates: Vec<(PersonId, FeatureVector)> =
        (0..8).map(|i| (PersonId(i / 2 + 1), fv(common::random_vec(&mut rng, dim, 3.0)))).collect();
    let probes: Vec<(String, FeatureVector)> =
        (0..5).map(|i| (format!("p{i}"), fv(common::random_vec(&mut rng, dim, 3.0)))).collect();
    let gallery = Gallery::new(templates.clone()).unwrap();
    let table = score_probes(&probes, &gallery, 0.5).unwrap();
    assert_eq!((table.rows(), table.cols()), (5, 8));
    for (r, (_, p)) in probes.iter().enumerate() {
        for (c, (_, t)) in templates.iter().enumerate() {
            let mut s = 0.0;
            for i in 0..dim {
                s += (p.values()[i] - t.values()[i]).abs().powf(0.5);
            }
            let want = s.powf(2.0);
            assert!((table.get(r, c) - want).abs() <= 1e-12 * want.max(1.0));
        }
    }
    let one = score_probes(&probes[..1], &Gallery::new(templates[..1].to_vec()).unwrap(), 0.5).unwrap();
    assert_eq!(one.get(0, 0), fractional_distance(probes[0].1.values(), templates[0].1.values(), 0.5).unwrap());
}

fn brute_force_identify(table: &DistanceTable) -> Vec<PersonId> {
    (0..table.rows())
        .map(|r| {
            let mut best: Option<(f64, TemplateLabel)> = None;
            for (c, label) in table.template_labels().iter().enumerate() {
                let d = table.get(r, c);
                best = match best {
                    Some((bd, bl)) if bd < d || (bd == d && bl < *label) => Some((bd, bl)),
                    _ => Some((d, *label)),
                };
            }
            best.unwrap().1.person
        })
        .collect()
}

fn random_table(seed: u64, rows: usize, persons: u32, per: u32, quantize: bool) -> DistanceTable {
    let mut rng = common::rng(seed);
    let labels: Vec<TemplateLabel> =
        (1..=persons).flat_map(|p| (0..per).map(move |i| TemplateLabel { person: PersonId(p), index: i })).collect();
    let data = (0..rows * labels.len())
        .map(|_| {
            let v = rng.random::<f64>() * 10.0;
            if quantize {
                v.round()
            } else {
                v
            }
        })
        .collect();
    DistanceTable::from_parts((0..rows).map(|i| format!("p{i}")).collect(), labels, data).unwrap()
}

#[test]
fn identify_matches_exhaustive_scan() {
    for seed in 0..20 {
        // Rounded entries force plenty of ties.
        let t = random_table(seed, 15, 6, 3, seed % 2 == 0);
        assert_eq!(identify(&t), brute_force_identify(&t));
    }
}

#[test]
fn identify_ignores_increasing_transforms() {
    let t = random_table(3, 20, 7, 2, false);
    let base = identify(&t);
    assert_eq!(identify(&t.map(|v| v.sqrt()).unwrap()), base);
    assert_eq!(identify(&t.map(|v| 3.0 * v + 7.0).unwrap()), base);
    assert_eq!(identify(&t.map(|v| v.exp().min(1e300)).unwrap()), base);
}

#[test]
fn identify_is_invariant_to_feature_scaling() {
    let mut rng = common::rng(4);
    let templates: Vec<(PersonId, FeatureVector)> =
        (0..12).map(|i| (PersonId(i % 4 + 1), fv(common::random_vec(&mut rng, 9, 1.0)))).collect();
    let probes: Vec<(String, FeatureVector)> =
        (0..10).map(|i| (format!("p{i}"), fv(common::random_vec(&mut rng, 9, 1.0)))).collect();
    let run = |c: f64| {
        let g = Gallery::new(templates.iter().map(|(p, v)| (*p, v.scaled(c))).collect()).unwrap();
        let q: Vec<_> = probes.iter().map(|(l, v)| (l.clone(), v.scaled(c))).collect();
        identify(&score_probes(&q, &g, 0.5).unwrap())
    };
    assert_eq!(run(1.0), run(4.0));
    assert_eq!(run(1.0), run(0.125));
}

fn pair(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (prop::collection::vec(-5.0f64..5.0, n), prop::collection::vec(-5.0f64..5.0, n))
}

proptest! {
    #[test]
    fn homogeneous((x, y) in (1usize..20).prop_flat_map(pair), c in 0.01f64..50.0, p in 0.2f64..3.0) {
        let cx: Vec<f64> = x.iter().map(|v| v * c).collect();
        let cy: Vec<f64> = y.iter().map(|v| v * c).collect();
        let d = fractional_distance(&x, &y, p).unwrap();
        let dc = fractional_distance(&cx, &cy, p).unwrap();
        prop_assert!((dc - c * d).abs() <= 1e-9 * (c * d).max(1.0));
    }

    #[test]
    fn half_power_is_symmetric_and_non_negative((x, y) in (1usize..20).prop_flat_map(pair)) {
        let a = fractional_distance(&x, &y, 0.5).unwrap();
        let b = fractional_distance(&y, &x, 0.5).unwrap();
        prop_assert!(a >= 0.0);
        prop_assert_eq!(a, b);
        prop_assert_eq!(fractional_distance(&x, &x, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn triangle_inequality_for_p_at_least_one(
        (x, y) in (1usize..10).prop_flat_map(pair),
        zs in prop::collection::vec(-5.0f64..5.0, 10),
        p in 1.0f64..4.0,
    ) {
        let z = &zs[..x.len()];
        let xy = fractional_distance(&x, &y, p).unwrap();
        let xz = fractional_distance(&x, z, p).unwrap();
        let zy = fractional_distance(z, &y, p).unwrap();
        prop_assert!(xy <= xz + zy + 1e-9);
    }
}
