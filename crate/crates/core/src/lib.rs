//! Context-dependent focal points of a weighted group.
//!
//! Given a weighted sample (the *context* `f`) and a group `g` inside it, the
//! relative dispersion `δ(a) = Δ_g^a / Δ_f^a` measures how spread out the
//! group looks from a reference point `a`, in units of the spread of the whole
//! context. It has exactly one minimizer, the *in-focus* `a₋`, and exactly one
//! maximizer, the *out-focus* `a₊`. Both lie on the line through the two
//! centroids, outside the segment joining them.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: feature matrices, weight distributions, squared distances,
//!   centroids, inertias and the Huygens decomposition.
//! - [`focal`]: relative dispersion and the closed-form in/out-focus points.
//! - [`complement`]: complementary groups and the out-focus/in-focus duality.
//! - [`mds`]: classical multidimensional scaling of squared distances.
//! - [`extensions`]: the decision-rule ratio limit, subtractive combinations,
//!   and the metacontrast prototypicality function.
//! - [`ingest`]: the UCI house-votes-84 reader, group-mean imputation, generic
//!   CSV loading and group selection.
//!
//! ```
//! use infocus_core::geometry::{FeatureMatrix, WeightDistribution};
//! use infocus_core::focal::focal_points;
//!
//! let x = FeatureMatrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]]).unwrap();
//! let f = WeightDistribution::uniform(4).unwrap();
//! let g = WeightDistribution::new(vec![0.5, 0.5, 0.0, 0.0]).unwrap();
//! let foci = focal_points(&x, &f, &g).unwrap();
//! assert!((foci.eps_minus + 5f64.sqrt() / 2.0).abs() < 1e-12);
//! assert!((foci.polarization_ratio - 5f64.sqrt()).abs() < 1e-12);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN takes the error path.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complement;
pub mod error;
pub mod extensions;
pub mod focal;
pub mod geometry;
pub mod ingest;
pub mod mds;
pub mod optimize;
mod sum;

pub use error::{Error, Result};
