//! Classical (Torgerson) multidimensional scaling with uniform weights.
//!
//! 1. Double-center the squared distances: `B = −½ J D J`, `J = I − 𝟙𝟙ᵀ/n`.
//! 2. Eigendecompose `B` and sort eigenvalues in non-increasing order.
//! 3. Coordinates on axis `k` are `u_k √λ_k`.
//!
//! For squared Euclidean distances `B = X_c X_cᵀ`, so `trace(B)/n` is the
//! inertia `Δ_f` of the cloud under uniform weights and each axis carries
//! `λ_k / n` of it.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::geometry::{centroid, DistanceMatrix, FeatureMatrix, WeightDistribution};
use crate::sum::compensated_sum;

/// Eigenvalues at or below this fraction of the largest one count as zero.
const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct MdsEmbedding {
    /// All eigenvalues of the double-centered matrix, non-increasing.
    pub eigenvalues: Vec<f64>,
    /// `n × dims` centered factorial coordinates.
    pub coordinates: FeatureMatrix,
    /// Share of the positive spectrum carried by the retained axes.
    pub explained_fraction: f64,
    /// Inertia of the whole cloud under uniform weights, `trace(B) / n`.
    pub total_dispersion: f64,
    /// Number of eigenvalues treated as positive.
    pub positive_rank: usize,
    /// Set when more axes were requested than there are positive eigenvalues;
    /// the extra columns are zero.
    pub padded: bool,
    axes: Vec<Vec<f64>>,
}

impl MdsEmbedding {
    pub fn dims(&self) -> usize {
        self.coordinates.ncols()
    }

    pub fn len(&self) -> usize {
        self.coordinates.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Retained eigenvalues, clamped at zero; padded axes report zero.
    pub fn retained_eigenvalues(&self) -> Vec<f64> {
        (0..self.dims())
            .map(|k| {
                if k < self.positive_rank {
                    self.eigenvalues[k].max(0.0)
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// Fraction of the positive spectrum carried by each retained axis.
    pub fn axis_fractions(&self) -> Vec<f64> {
        let total = self.positive_sum();
        self.retained_eigenvalues()
            .into_iter()
            .map(|l| if total > 0.0 { l / total } else { 0.0 })
            .collect()
    }

    /// Inertia of the retained coordinates, `Σ_retained λ_k / n`.
    pub fn retained_dispersion(&self) -> f64 {
        compensated_sum(self.retained_eigenvalues()) / self.len() as f64
    }

    /// Unit eigenvector (length `n`) of retained axis `k`.
    pub fn axis(&self, k: usize) -> &[f64] {
        &self.axes[k]
    }

    fn positive_sum(&self) -> f64 {
        compensated_sum(self.eigenvalues[..self.positive_rank].iter().copied())
    }
}

/// `B = −½ J D J`.
pub fn double_center(d: &DistanceMatrix) -> DMatrix<f64> {
    let n = d.size();
    let nf = n as f64;
    let row_means: Vec<f64> = (0..n)
        .map(|i| compensated_sum(d.row(i).iter().copied()) / nf)
        .collect();
    let grand_mean = compensated_sum(row_means.iter().copied()) / nf;
    DMatrix::from_fn(n, n, |i, j| {
        -0.5 * (d.get(i, j) - row_means[i] - row_means[j] + grand_mean)
    })
}

/// Embeds a squared-distance matrix into `dims` factorial axes.
pub fn embed(d: &DistanceMatrix, dims: usize) -> Result<MdsEmbedding> {
    if dims == 0 {
        return Err(Error::InvalidInput(
            "at least one dimension is required".into(),
        ));
    }
    let n = d.size();
    if n == 0 {
        return Err(Error::InvalidInput("empty distance matrix".into()));
    }
    let b = double_center(d);
    let total_dispersion = compensated_sum(b.diagonal().iter().copied()) / n as f64;
    let eigen = SymmetricEigen::new(b);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eigen.eigenvalues[j]
            .total_cmp(&eigen.eigenvalues[i])
            .then(i.cmp(&j))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eigen.eigenvalues[k]).collect();

    let largest = eigenvalues[0];
    let positive_rank = if largest > 0.0 {
        eigenvalues
            .iter()
            .take_while(|&&l| l > RANK_TOLERANCE * largest)
            .count()
    } else {
        0
    };

    let kept = dims.min(positive_rank);
    let mut axes = Vec::with_capacity(dims);
    let mut values = vec![0.0; n * dims];
    for (k, &src) in order.iter().take(kept).enumerate() {
        let mut axis: Vec<f64> = eigen.eigenvectors.column(src).iter().copied().collect();
        canonicalize_sign(&mut axis);
        let scale = eigenvalues[k].sqrt();
        for (i, u) in axis.iter().enumerate() {
            values[i * dims + k] = u * scale;
        }
        axes.push(axis);
    }
    axes.resize(dims, vec![0.0; n]);

    let positive_sum = compensated_sum(eigenvalues[..positive_rank].iter().copied());
    let explained_fraction = if positive_sum > 0.0 {
        compensated_sum(eigenvalues[..kept].iter().copied()) / positive_sum
    } else {
        0.0
    };

    Ok(MdsEmbedding {
        eigenvalues,
        coordinates: FeatureMatrix::new(n, dims, values)?,
        explained_fraction,
        total_dispersion,
        positive_rank,
        padded: dims > positive_rank,
        axes,
    })
}

/// Makes the entry of largest magnitude positive; near-ties go to the lowest index.
fn canonicalize_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|x| max - x.abs() <= 1e-10 * max)
        .unwrap_or(0);
    if v[pivot] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Projects a point of the original feature space onto the retained axes.
///
/// The embedding must come from the squared distances of `x`, and `f` must be
/// the uniform context used by the embedding.
pub fn project_point(
    embedding: &MdsEmbedding,
    x: &FeatureMatrix,
    f: &WeightDistribution,
    point: &[f64],
) -> Result<Vec<f64>> {
    let n = x.nrows();
    if embedding.len() != n {
        return Err(Error::DimensionMismatch {
            expected: embedding.len(),
            found: n,
        });
    }
    if point.len() != x.ncols() {
        return Err(Error::DimensionMismatch {
            expected: x.ncols(),
            found: point.len(),
        });
    }
    if f.len() != n || !f.is_uniform(1e-12) {
        return Err(Error::InvalidWeights(
            "MDS projection requires the uniform context".into(),
        ));
    }
    let center = centroid(x, f)?;
    let offset: Vec<f64> = point.iter().zip(&center).map(|(p, c)| p - c).collect();
    // Inner products of every centered row with the centered point.
    let gram: Vec<f64> = x
        .rows()
        .map(|row| {
            compensated_sum(
                row.iter()
                    .zip(&center)
                    .zip(&offset)
                    .map(|((r, c), o)| (r - c) * o),
            )
        })
        .collect();
    let eigenvalues = embedding.retained_eigenvalues();
    Ok((0..embedding.dims())
        .map(|k| {
            if eigenvalues[k] > 0.0 {
                compensated_sum(embedding.axes[k].iter().zip(&gram).map(|(u, g)| u * g))
                    / eigenvalues[k].sqrt()
            } else {
                0.0
            }
        })
        .collect())
}
