//! Weighted geometry of a point cloud: squared Euclidean distances, centroids,
//! inertias and the Huygens decomposition
//! `Δ_w^a = Δ_w + ‖x̄_w − a‖²`.

use crate::error::{Error, Result};
use crate::sum::{compensated_sum, Accumulator};

/// Weight sums within this distance of 1 are silently renormalized.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Negative inertias or squared distances above `-NEGATIVE_CLAMP` are
/// floating-point cancellation and are clamped to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-10;

/// `n` individuals described by `p` real features, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl FeatureMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(format!(
                "feature matrix must have at least one row and one column, got {rows}x{cols}"
            )));
        }
        if values.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite feature at row {}, column {}",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, values)
    }

    /// Number of individuals `n`.
    pub fn nrows(&self) -> usize {
        self.rows
    }

    /// Number of features `p`.
    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// Nonnegative weights summing to one: a context `f`, a group `g` or a
/// complement `ḡ`. Zero entries are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightDistribution(Vec<f64>);

impl WeightDistribution {
    /// Accepts weights whose sum is within [`WEIGHT_SUM_TOLERANCE`] of 1 and
    /// renormalizes them exactly.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        check_nonnegative(&weights)?;
        let total = compensated_sum(weights.iter().copied());
        if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(Self::rescaled(weights, total))
    }

    /// Normalizes arbitrary nonnegative weights with a positive sum.
    pub fn from_unnormalized(weights: Vec<f64>) -> Result<Self> {
        check_nonnegative(&weights)?;
        let total = compensated_sum(weights.iter().copied());
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidWeights(format!(
                "weights must have a positive finite sum, got {total}"
            )));
        }
        Ok(Self::rescaled(weights, total))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidWeights("empty distribution".into()));
        }
        Ok(Self(vec![1.0 / n as f64; n]))
    }

    pub fn point_mass(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::InvalidInput(format!(
                "index {index} out of range for {n} individuals"
            )));
        }
        let mut w = vec![0.0; n];
        w[index] = 1.0;
        Ok(Self(w))
    }

    /// Uniform weights over the selected members, zero elsewhere.
    pub fn indicator(n: usize, members: &[usize]) -> Result<Self> {
        let mut mask = vec![false; n];
        for &i in members {
            if i >= n {
                return Err(Error::InvalidInput(format!(
                    "index {i} out of range for {n} individuals"
                )));
            }
            mask[i] = true;
        }
        let count = mask.iter().filter(|&&m| m).count();
        if count == 0 {
            return Err(Error::InvalidInput("empty group selection".into()));
        }
        let w = 1.0 / count as f64;
        Ok(Self(
            mask.into_iter().map(|m| if m { w } else { 0.0 }).collect(),
        ))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    /// Number of individuals with positive weight.
    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|&&w| w > 0.0).count()
    }

    /// True when every weight equals `1/n` within `tol`.
    pub fn is_uniform(&self, tol: f64) -> bool {
        let u = 1.0 / self.0.len() as f64;
        self.0.iter().all(|&w| (w - u).abs() <= tol)
    }

    fn rescaled(mut weights: Vec<f64>, total: f64) -> Self {
        if total != 1.0 {
            for w in &mut weights {
                *w /= total;
            }
        }
        Self(weights)
    }
}

fn check_nonnegative(weights: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::InvalidWeights("empty distribution".into()));
    }
    if let Some((i, w)) = weights
        .iter()
        .enumerate()
        .find(|(_, w)| !w.is_finite() || **w < 0.0)
    {
        return Err(Error::InvalidWeights(format!(
            "weight {i} is {w}, expected a finite nonnegative value"
        )));
    }
    Ok(())
}

/// Symmetric matrix of squared Euclidean distances with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    size: usize,
    values: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds a distance matrix from row-major entries, checking symmetry,
    /// zero diagonal and nonnegativity.
    pub fn from_entries(size: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != size * size {
            return Err(Error::DimensionMismatch {
                expected: size * size,
                found: values.len(),
            });
        }
        for i in 0..size {
            if values[i * size + i] != 0.0 {
                return Err(Error::InvalidInput(format!(
                    "nonzero diagonal entry at {i}"
                )));
            }
            for j in 0..i {
                let (a, b) = (values[i * size + j], values[j * size + i]);
                if !a.is_finite() || a < 0.0 || a != b {
                    return Err(Error::InvalidInput(format!(
                        "entries ({i},{j}) = {a} and ({j},{i}) = {b} must be equal, finite and nonnegative"
                    )));
                }
            }
        }
        Ok(Self { size, values })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.size..(i + 1) * self.size]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// `D_fg` and `b_fg = Δ_f − Δ_g − D_fg` obtained from distances alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossTerms {
    pub d_fg: f64,
    pub b_fg: f64,
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Pairwise squared Euclidean distances `D_ij = Σ_k (x_ik − x_jk)²`.
pub fn squared_distances(x: &FeatureMatrix) -> DistanceMatrix {
    let n = x.nrows();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..i {
            let d = squared_distance(x.row(i), x.row(j));
            values[i * n + j] = d;
            values[j * n + i] = d;
        }
    }
    DistanceMatrix { size: n, values }
}

fn check_weights(x: &FeatureMatrix, w: &WeightDistribution) -> Result<()> {
    if w.len() != x.nrows() {
        return Err(Error::DimensionMismatch {
            expected: x.nrows(),
            found: w.len(),
        });
    }
    Ok(())
}

fn check_point(x: &FeatureMatrix, a: &[f64]) -> Result<()> {
    if a.len() != x.ncols() {
        return Err(Error::DimensionMismatch {
            expected: x.ncols(),
            found: a.len(),
        });
    }
    Ok(())
}

/// Weighted centroid `Σ_i w_i x_i`.
pub fn centroid(x: &FeatureMatrix, w: &WeightDistribution) -> Result<Vec<f64>> {
    check_weights(x, w)?;
    let mut acc = vec![Accumulator::default(); x.ncols()];
    for (row, &wi) in x.rows().zip(w.weights()) {
        if wi == 0.0 {
            continue;
        }
        for (a, v) in acc.iter_mut().zip(row) {
            a.add(wi * v);
        }
    }
    Ok(acc.iter().map(Accumulator::total).collect())
}

/// Inertia about a reference point, `Δ_w^a = Σ_i w_i ‖x_i − a‖²`.
pub fn inertia_about(x: &FeatureMatrix, w: &WeightDistribution, a: &[f64]) -> Result<f64> {
    check_weights(x, w)?;
    check_point(x, a)?;
    Ok(compensated_sum(
        x.rows()
            .zip(w.weights())
            .filter(|(_, &wi)| wi != 0.0)
            .map(|(row, &wi)| wi * squared_distance(row, a)),
    ))
}

/// Inertia about the centroid in its pairwise form `½ Σ_ij w_i w_j D_ij`.
pub fn centroid_inertia(x: &FeatureMatrix, w: &WeightDistribution) -> Result<f64> {
    check_weights(x, w)?;
    let mut acc = Accumulator::default();
    let ws = w.weights();
    for i in 0..x.nrows() {
        if ws[i] == 0.0 {
            continue;
        }
        for j in 0..i {
            if ws[j] != 0.0 {
                acc.add(ws[i] * ws[j] * squared_distance(x.row(i), x.row(j)));
            }
        }
    }
    // Summing each unordered pair once absorbs the ½.
    Ok(acc.total())
}

/// `½ Σ_ij w_i w_j D_ij` from a distance matrix.
pub fn centroid_inertia_from_distances(d: &DistanceMatrix, w: &WeightDistribution) -> Result<f64> {
    if w.len() != d.size() {
        return Err(Error::DimensionMismatch {
            expected: d.size(),
            found: w.len(),
        });
    }
    let ws = w.weights();
    let mut acc = Accumulator::default();
    for i in 0..d.size() {
        for j in 0..i {
            acc.add(ws[i] * ws[j] * d.get(i, j));
        }
    }
    Ok(acc.total())
}

/// `D_fg = −½ Σ_ij (f_i−g_i)(f_j−g_j) D_ij` and `b_fg = Σ_ij f_i (f_j−g_j) D_ij`.
pub fn cross_terms(
    d: &DistanceMatrix,
    f: &WeightDistribution,
    g: &WeightDistribution,
) -> Result<CrossTerms> {
    let n = d.size();
    for w in [f, g] {
        if w.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: w.len(),
            });
        }
    }
    let (fw, gw) = (f.weights(), g.weights());
    let mut d_acc = Accumulator::default();
    let mut b_acc = Accumulator::default();
    for i in 0..n {
        let hi = fw[i] - gw[i];
        for j in 0..n {
            let dij = d.get(i, j);
            if dij == 0.0 {
                continue;
            }
            let hj = fw[j] - gw[j];
            d_acc.add(hi * hj * dij);
            b_acc.add(fw[i] * hj * dij);
        }
    }
    let d_fg = clamp_nonnegative(-0.5 * d_acc.total(), "D_fg")?;
    Ok(CrossTerms {
        d_fg,
        b_fg: b_acc.total(),
    })
}

/// Clamps round-off negatives to zero; larger negatives signal non-Euclidean input.
pub(crate) fn clamp_nonnegative(value: f64, what: &str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value > -NEGATIVE_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::InvalidInput(format!(
            "{what} = {value} is negative; distances are not Euclidean"
        )))
    }
}
