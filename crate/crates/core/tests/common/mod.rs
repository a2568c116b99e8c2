#![allow(dead_code)]

use infocus_core::geometry::{FeatureMatrix, WeightDistribution};
use proptest::prelude::*;

#[derive(Debug, Clone)]
pub struct Case {
    pub x: FeatureMatrix,
    pub f: WeightDistribution,
    pub g: WeightDistribution,
}

/// Feature matrix with `n` in `[2, max_n]`, `p` in `[1, max_p]`, entries in `[-1, 1]`.
pub fn features(max_n: usize, max_p: usize) -> impl Strategy<Value = FeatureMatrix> {
    (2..=max_n, 1..=max_p).prop_flat_map(|(n, p)| {
        prop::collection::vec(-1.0..1.0f64, n * p)
            .prop_map(move |v| FeatureMatrix::new(n, p, v).unwrap())
    })
}

pub fn weights(n: usize) -> impl Strategy<Value = WeightDistribution> {
    prop::collection::vec(0.1..1.0f64, n)
        .prop_map(|w| WeightDistribution::from_unnormalized(w).unwrap())
}

/// Context with full support and a group on a random proper subset.
pub fn case(max_n: usize, max_p: usize) -> impl Strategy<Value = Case> {
    features(max_n, max_p).prop_flat_map(|x| {
        let n = x.nrows();
        (
            Just(x),
            weights(n),
            prop::collection::vec(0.1..1.0f64, n),
            prop::collection::vec(any::<bool>(), n),
            0..n,
        )
            .prop_map(move |(x, f, raw, mask, forced)| {
                let mut g: Vec<f64> = raw
                    .iter()
                    .zip(&mask)
                    .enumerate()
                    .map(|(i, (w, &m))| if m || i == forced { *w } else { 0.0 })
                    .collect();
                if g.iter().all(|&w| w > 0.0) {
                    g[(forced + 1) % n] = 0.0;
                }
                Case {
                    x,
                    f,
                    g: WeightDistribution::from_unnormalized(g).unwrap(),
                }
            })
    })
}

pub fn point(p: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0f64, p)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
