mod common;

use common::{distance, point, rel_err, Case};
use infocus_core::complement::complement_of;
use infocus_core::extensions::{
    decision_ratio, metacontrast_membership, metacontrast_minimize, metacontrast_value,
    subtractive_extremum, subtractive_value, MetaContrastParams, SubtractiveExtremum,
};
use infocus_core::focal::relative_dispersion;
use infocus_core::geometry::{
    centroid, centroid_inertia, inertia_about, squared_distance, FeatureMatrix, WeightDistribution,
};
use infocus_oracle::{scan_extrema, Instance};
use proptest::prelude::*;

fn instance(c: &Case) -> Instance {
    Instance {
        x: c.x.rows().map(|r| r.to_vec()).collect(),
        f: c.f.weights().to_vec(),
        g: c.g.weights().to_vec(),
    }
}

/// Brute-force extremum of `γ` on the centroid line, as `(ε, is_minimum)`.
fn brute_force(c: &Case, h: &WeightDistribution, wg: f64, wc: f64) -> (f64, bool) {
    instance(c)
        .gamma_extremum_on_line(h.weights(), wg, wc, -50.0, 50.0)
        .expect("a single bounded extremum")
}

fn decision_coefficient(c: &Case, a: &[f64]) -> f64 {
    // δ_β = δ − β C + O(β²) with C = (Σg D² − δ Σf D²) / (2 Δ_f^a).
    let moment = |w: &WeightDistribution, k: i32| -> f64 {
        c.x.rows()
            .zip(w.weights())
            .map(|(r, wi)| wi * squared_distance(r, a).powi(k))
            .sum()
    };
    let delta = moment(&c.g, 1) / moment(&c.f, 1);
    (moment(&c.g, 2) - delta * moment(&c.f, 2)) / (2.0 * moment(&c.f, 1))
}

proptest! {
    #[test]
    fn decision_ratio_error_is_first_order_in_beta(c in common::case(10, 3), probe in point(3)) {
        let a = &probe[..c.x.ncols()];
        let delta = relative_dispersion(&c.x, &c.f, &c.g, a).unwrap();
        prop_assume!(decision_coefficient(&c, a).abs() > 1e-3 * delta.max(1e-3));
        let errors: Vec<f64> = [1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&beta| (decision_ratio(&c.x, &c.f, &c.g, a, beta).unwrap() - delta).abs())
            .collect();
        for w in errors.windows(2) {
            let ratio = w[0] / w[1];
            prop_assert!((5.0..=20.0).contains(&ratio), "errors {errors:?}");
        }
    }

    #[test]
    fn subtractive_extremum_matches_brute_force(
        c in common::case(10, 3),
        lambda in prop::sample::select(vec![0.0, 0.25, 0.4, 0.6, 1.0]),
    ) {
        let (wg, wc) = (1.0 - lambda, lambda);
        let ext = subtractive_extremum(&c.x, &c.f, &c.g, wg, wc);
        prop_assume!(ext.is_ok());
        let ext = ext.unwrap();
        let expected = (lambda - 1.0) / (1.0 - 2.0 * lambda);
        prop_assert!((ext.eps().unwrap() - expected).abs() <= 1e-12);
        prop_assert_eq!(matches!(ext, SubtractiveExtremum::Minimum { .. }), lambda < 0.5);

        let (eps, is_min) = brute_force(&c, &c.f, wg, wc);
        prop_assert_eq!(is_min, lambda < 0.5);
        prop_assert!((eps - expected).abs() <= 1e-6, "{eps} vs {expected}");
    }

    #[test]
    fn subtractive_extremum_is_global(
        c in common::case(10, 3),
        lambda in prop::sample::select(vec![0.0, 0.25, 0.4, 0.6, 1.0]),
        offsets in prop::collection::vec(point(3), 50),
    ) {
        let (wg, wc) = (1.0 - lambda, lambda);
        let ext = subtractive_extremum(&c.x, &c.f, &c.g, wg, wc);
        prop_assume!(ext.is_ok());
        let ext = ext.unwrap();
        let at = ext.point().unwrap().to_vec();
        let best = subtractive_value(&c.x, &c.f, &c.g, wg, wc, &at).unwrap();
        let sign = if lambda < 0.5 { 1.0 } else { -1.0 };
        for h in offsets {
            let probe: Vec<f64> = at.iter().zip(&h).map(|(a, h)| a + h).collect();
            let v = subtractive_value(&c.x, &c.f, &c.g, wg, wc, &probe).unwrap();
            prop_assert!(sign * (v - best) >= -1e-12 * best.abs().max(1.0));
        }
    }

    #[test]
    fn balanced_weights_put_the_extremum_at_minus_half(c in common::case(10, 3), a in 0.1..5.0f64) {
        for (wg, wc, is_min) in [(a, -a, true), (-a, a, false)] {
            let ext = subtractive_extremum(&c.x, &c.f, &c.g, wg, wc);
            prop_assume!(ext.is_ok());
            let ext = ext.unwrap();
            prop_assert_eq!(ext.eps(), Some(-0.5));
            prop_assert_eq!(matches!(ext, SubtractiveExtremum::Minimum { .. }), is_min);
            let (eps, found_min) = brute_force(&c, &c.f, wg, wc);
            prop_assert_eq!(found_min, is_min);
            prop_assert!((eps + 0.5).abs() <= 1e-6);
        }
    }

    #[test]
    fn subtractive_extremum_ignores_dispersion(
        c in common::case(8, 3),
        noise in prop::collection::vec(point(3), 8),
        scale in 0.1..2.0f64,
        lambda in prop::sample::select(vec![0.0, 0.25, 0.4, 0.6, 1.0]),
    ) {
        let (n, p) = (c.x.nrows(), c.x.ncols());
        // Each individual splits into two half-weight copies at x ± z.
        let mut rows = Vec::with_capacity(2 * n);
        for (i, r) in c.x.rows().enumerate() {
            for sign in [1.0, -1.0] {
                rows.push((0..p).map(|k| r[k] + sign * scale * noise[i][k]).collect::<Vec<_>>());
            }
        }
        let double = |w: &WeightDistribution| {
            WeightDistribution::from_unnormalized(w.weights().iter().flat_map(|&v| [v, v]).collect())
                .unwrap()
        };
        let x2 = FeatureMatrix::from_rows(&rows).unwrap();
        let (f2, g2) = (double(&c.f), double(&c.g));
        prop_assert!(centroid_inertia(&x2, &f2).unwrap() > centroid_inertia(&c.x, &c.f).unwrap());

        let (wg, wc) = (1.0 - lambda, lambda);
        let before = subtractive_extremum(&c.x, &c.f, &c.g, wg, wc);
        prop_assume!(before.is_ok());
        let before = before.unwrap();
        let after = subtractive_extremum(&x2, &f2, &g2, wg, wc).unwrap();
        prop_assert_eq!(before.eps(), after.eps());
        prop_assert!(distance(before.point().unwrap(), after.point().unwrap()) <= 1e-12);
    }

    #[test]
    fn complement_context_keeps_the_extremum_on_the_line(
        c in common::case(10, 3),
        lambda in prop::sample::select(vec![0.0, 0.25, 0.4, 0.6, 1.0]),
    ) {
        let comp = complement_of(&c.f, &c.g, None);
        prop_assume!(comp.is_ok());
        let gbar = comp.unwrap().gbar;
        let (wg, wc) = (1.0 - lambda, lambda);
        let ext = subtractive_extremum(&c.x, &gbar, &c.g, wg, wc);
        prop_assume!(ext.is_ok());
        let at = ext.unwrap().point().unwrap().to_vec();

        let cf = centroid(&c.x, &c.f).unwrap();
        let cg = centroid(&c.x, &c.g).unwrap();
        prop_assume!(squared_distance(&cf, &cg) > 1e-6);
        let dir: Vec<f64> = cf.iter().zip(&cg).map(|(f, g)| f - g).collect();
        let along: f64 = at.iter().zip(&cf).zip(&dir).map(|((a, f), d)| (a - f) * d).sum::<f64>()
            / dir.iter().map(|d| d * d).sum::<f64>();
        let foot: Vec<f64> = cf.iter().zip(&dir).map(|(f, d)| f + along * d).collect();
        prop_assert!(distance(&at, &foot) <= 1e-9 * (1.0 + along.abs()), "off the line by {}", distance(&at, &foot));

        let (eps, _) = brute_force(&c, &gbar, wg, wc);
        prop_assert!((eps - along).abs() <= 1e-6 * (1.0 + along.abs()), "{eps} vs {along}");
    }

    #[test]
    fn metacontrast_memberships_mix_to_the_context(
        x in common::features(12, 3),
        probes in prop::collection::vec(point(3), 100),
        beta in 0.1..20.0f64,
    ) {
        let n = x.nrows();
        let f = WeightDistribution::uniform(n).unwrap();
        for probe in probes {
            let a = &probe[..x.ncols()];
            let m = metacontrast_membership(&x, a, beta).unwrap();
            let mixed = m.rho * inertia_about(&x, &m.group, a).unwrap()
                + (1.0 - m.rho) * inertia_about(&x, &m.complement, a).unwrap();
            let context = inertia_about(&x, &f, a).unwrap();
            prop_assert!(rel_err(mixed, context) <= 1e-10, "{mixed} vs {context}");
        }
    }

    #[test]
    fn metacontrast_is_symmetric_for_mirrored_data(
        half in prop::collection::vec(-1.0..1.0f64, 1..6),
        center in -1.0..1.0f64,
        shifts in prop::collection::vec(0.0..2.0f64, 20),
        lambda in 0.0..1.0f64,
        beta in 0.5..15.0f64,
    ) {
        let mut rows: Vec<Vec<f64>> = half.iter().map(|v| vec![center + v]).collect();
        rows.extend(half.iter().map(|v| vec![center - v]));
        let x = FeatureMatrix::from_rows(&rows).unwrap();
        let params = MetaContrastParams::new(lambda, beta).unwrap();
        for t in shifts {
            let right = metacontrast_value(&x, &[center + t], params).unwrap();
            let left = metacontrast_value(&x, &[center - t], params).unwrap();
            prop_assert!((right - left).abs() <= 1e-10 * right.abs().max(1.0), "{right} vs {left}");
        }
    }
}

#[test]
fn metacontrast_value_two_ways() {
    let x = FeatureMatrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]]).unwrap();
    let params = MetaContrastParams::new(0.08, 1.0).unwrap();
    let direct = metacontrast_value(&x, &[0.0], params).unwrap();
    let m = metacontrast_membership(&x, &[0.0], 1.0).unwrap();
    let split = |w: &WeightDistribution| {
        centroid_inertia(&x, w).unwrap() + squared_distance(&centroid(&x, w).unwrap(), &[0.0])
    };
    let decomposed = 0.92 * split(&m.group) - 0.08 * split(&m.complement);
    assert!(
        (direct - decomposed).abs() <= 1e-10,
        "{direct} vs {decomposed}"
    );
}

#[test]
fn minimize_agrees_with_a_finer_scan() {
    let rows: Vec<Vec<f64>> = (0..=10).map(|i| vec![i as f64 / 10.0]).collect();
    let x = FeatureMatrix::from_rows(&rows).unwrap();
    let params = MetaContrastParams::new(0.0, 7.7).unwrap();
    let minima = metacontrast_minimize(&x, params, (0.0, 1.0)).unwrap();
    assert!(!minima.is_empty());

    let spacing = 1.0 / 2000.0;
    let fine = 20001;
    let value = |a: f64| metacontrast_value(&x, &[a], params).unwrap();
    let grid: Vec<(f64, f64)> = (0..fine)
        .map(|i| {
            let a = i as f64 / (fine - 1) as f64;
            (a, value(a))
        })
        .collect();
    let fine_minima: Vec<f64> = (0..fine)
        .filter(|&i| {
            let v = grid[i].1;
            (i == 0 || grid[i - 1].1 > v) && (i + 1 == fine || grid[i + 1].1 >= v)
        })
        .map(|i| grid[i].0)
        .collect();
    assert_eq!(
        minima.len(),
        fine_minima.len(),
        "{minima:?} vs {fine_minima:?}"
    );
    for (m, f) in minima.iter().zip(&fine_minima) {
        assert!((m.position - f).abs() <= spacing, "{} vs {f}", m.position);
        assert!(m.value <= value(*f) + 1e-12);
    }

    // Interior minima are genuine: the oracle agrees within the grid spacing.
    for m in minima.iter().filter(|m| !m.at_boundary) {
        let e = scan_extrema(value, m.position - spacing, m.position + spacing, 101);
        if let Some(e) = e {
            assert!((e.argmin - m.position).abs() <= spacing);
        }
    }
}
