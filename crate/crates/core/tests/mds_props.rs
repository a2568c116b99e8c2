mod common;

use common::{features, rel_err};
use infocus_core::geometry::{
    centroid_inertia, centroid_inertia_from_distances, squared_distances, WeightDistribution,
};
use infocus_core::mds::embed;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn full_rank_embedding_reconstructs_distances(x in features(20, 5)) {
        let d = squared_distances(&x);
        let n = d.size();
        let emb = embed(&d, n).unwrap();
        let scale = d.as_slice().iter().cloned().fold(0.0, f64::max);
        for i in 0..n {
            for j in 0..n {
                let r = infocus_core::geometry::squared_distance(
                    emb.coordinates.row(i),
                    emb.coordinates.row(j),
                );
                prop_assert!((r - d.get(i, j)).abs() <= 1e-8 * scale, "({i},{j}) {r} vs {}", d.get(i, j));
            }
        }
    }

    #[test]
    fn embedding_conserves_inertia(x in features(20, 5)) {
        let d = squared_distances(&x);
        let n = d.size();
        let emb = embed(&d, n).unwrap();
        let f = WeightDistribution::uniform(n).unwrap();
        let from_coordinates = centroid_inertia(&emb.coordinates, &f).unwrap();
        let from_distances = centroid_inertia_from_distances(&d, &f).unwrap();
        prop_assert!(rel_err(from_coordinates, from_distances) <= 1e-9);
        prop_assert!(rel_err(emb.total_dispersion, from_distances) <= 1e-9);
        prop_assert!(rel_err(emb.retained_dispersion(), from_distances) <= 1e-9);
    }

    #[test]
    fn euclidean_eigenvalues_are_nonnegative(x in features(20, 5)) {
        let emb = embed(&squared_distances(&x), 1).unwrap();
        let max = emb.eigenvalues[0];
        prop_assert!(emb.eigenvalues.iter().all(|&l| l >= -1e-8 * max));
        prop_assert!(emb.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn explained_fraction_grows_with_dims(x in features(15, 5)) {
        let d = squared_distances(&x);
        let mut last = 0.0;
        for dims in 1..=d.size() {
            let frac = embed(&d, dims).unwrap().explained_fraction;
            prop_assert!(frac >= last - 1e-15, "dims {dims}: {frac} < {last}");
            prop_assert!(frac <= 1.0 + 1e-12);
            last = frac;
        }
        prop_assert!((last - 1.0).abs() <= 1e-12);
    }
}
