//! Relative dispersion and its two extremizers.
//!
//! Along the centroid line `a(ε) = x̄_f + ε (x̄_f − x̄_g)` the relative
//! dispersion reduces to
//!
//! ```text
//! δ(ε) = (Δ_g + D_fg (ε + 1)²) / (Δ_f + D_fg ε²)
//! ```
//!
//! whose stationary points solve `D_fg ε² − b_fg ε − Δ_f = 0` with
//! `b_fg = Δ_f − Δ_g − D_fg`. The smaller root gives the in-focus `a₋`
//! (global minimum of `δ` over the whole space), the larger root the
//! out-focus `a₊` (global maximum).

use crate::error::{Error, Result};
use crate::geometry::{
    centroid, centroid_inertia, inertia_about, squared_distance, FeatureMatrix, WeightDistribution,
};
use crate::sum::compensated_sum;

/// Scalar summary of a (context, group) pair together with its focal points.
#[derive(Debug, Clone, PartialEq)]
pub struct FocalAnalysis {
    pub centroid_f: Vec<f64>,
    pub centroid_g: Vec<f64>,
    /// Context inertia about its centroid, `Δ_f`.
    pub delta_f: f64,
    /// Group inertia about its centroid, `Δ_g`.
    pub delta_g: f64,
    /// Squared distance between the centroids, `D_fg`.
    pub d_fg: f64,
    pub b_fg: f64,
    pub eps_minus: f64,
    pub eps_plus: f64,
    /// In-focus point.
    pub a_minus: Vec<f64>,
    /// Out-focus point.
    pub a_plus: Vec<f64>,
    pub delta_at_minus: f64,
    pub delta_at_plus: f64,
    /// `|ε₊ − ε₋|`.
    pub polarization_ratio: f64,
}

impl FocalAnalysis {
    /// `(1 + (Δ_f+Δ_g)/D_fg)² − 4 Δ_f Δ_g / D_fg²`, which equals the squared
    /// polarization ratio.
    pub fn squared_polarization_identity(&self) -> f64 {
        let s = 1.0 + (self.delta_f + self.delta_g) / self.d_fg;
        s * s - 4.0 * self.delta_f * self.delta_g / (self.d_fg * self.d_fg)
    }

    pub fn line_profile(&self) -> LineProfile {
        LineProfile {
            delta_f: self.delta_f,
            delta_g: self.delta_g,
            d_fg: self.d_fg,
        }
    }
}

/// Relative dispersion restricted to the centroid line, as a function of `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineProfile {
    pub delta_f: f64,
    pub delta_g: f64,
    pub d_fg: f64,
}

impl LineProfile {
    pub fn value(&self, eps: f64) -> f64 {
        let shifted = eps + 1.0;
        (self.delta_g + self.d_fg * shifted * shifted) / (self.delta_f + self.d_fg * eps * eps)
    }

    /// `steps` evenly spaced samples over `[eps_min, eps_max]`, endpoints included.
    pub fn sample(&self, eps_min: f64, eps_max: f64, steps: usize) -> Result<Vec<(f64, f64)>> {
        if steps < 2 {
            return Err(Error::InvalidInput(format!(
                "profile needs at least 2 steps, got {steps}"
            )));
        }
        if !(eps_min.is_finite() && eps_max.is_finite() && eps_min < eps_max) {
            return Err(Error::InvalidInput(format!(
                "invalid profile range [{eps_min}, {eps_max}]"
            )));
        }
        let span = eps_max - eps_min;
        let last = (steps - 1) as f64;
        Ok((0..steps)
            .map(|i| {
                let eps = if i + 1 == steps {
                    eps_max
                } else {
                    eps_min + span * (i as f64 / last)
                };
                (eps, self.value(eps))
            })
            .collect())
    }
}

/// Coefficients `α_i(ε) = (1+ε) f_i − ε g_i`; they sum to one but may be negative.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedDistribution(Vec<f64>);

impl SignedDistribution {
    pub fn coefficients(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        compensated_sum(self.0.iter().copied())
    }

    /// The point `Σ_i α_i x_i`.
    pub fn combine(&self, x: &FeatureMatrix) -> Result<Vec<f64>> {
        if self.0.len() != x.nrows() {
            return Err(Error::DimensionMismatch {
                expected: x.nrows(),
                found: self.0.len(),
            });
        }
        Ok((0..x.ncols())
            .map(|k| compensated_sum(x.rows().zip(&self.0).map(|(row, &a)| a * row[k])))
            .collect())
    }
}

/// Centroids closer than this (in squared distance) are treated as coincident.
pub fn coincidence_threshold(delta_f: f64) -> f64 {
    1e-12 * (delta_f + 1.0)
}

/// Roots `(ε₋, ε₊)` of `D_fg ε² − b_fg ε − Δ_f = 0` from the three inertias.
///
/// Writing `ε₋ = −1 − u`, the excess `u ≥ 0` solves
/// `D_fg u² + (D_fg + Δ_f − Δ_g) u − Δ_g = 0`, and `ε₊ = −Δ_f / (D_fg ε₋)`.
/// This form has no cancellation and returns the bounds `−1` and
/// `Δ_f / D_fg` exactly when `Δ_g = 0`.
pub fn focal_roots(delta_f: f64, delta_g: f64, d_fg: f64) -> Result<(f64, f64)> {
    let (eps_minus, eps_plus, _) = roots_and_excess(delta_f, delta_g, d_fg)?;
    Ok((eps_minus, eps_plus))
}

/// Roots plus `u = −1 − ε₋ ≥ 0`, which is exactly zero when `Δ_g = 0`.
fn roots_and_excess(delta_f: f64, delta_g: f64, d_fg: f64) -> Result<(f64, f64, f64)> {
    if !(delta_f > 0.0) {
        return Err(Error::DegenerateContext(format!(
            "context inertia is {delta_f}"
        )));
    }
    if !(d_fg > coincidence_threshold(delta_f)) {
        return Err(Error::CoincidentCentroids { d_fg });
    }
    let delta_g = delta_g.max(0.0);
    let c = d_fg + delta_f - delta_g;
    let root = (c * c + 4.0 * d_fg * delta_g).sqrt();
    let excess = if c > 0.0 {
        2.0 * delta_g / (c + root)
    } else {
        (root - c) / (2.0 * d_fg)
    };
    let eps_minus = -1.0 - excess;
    let eps_plus = delta_f / (d_fg * (1.0 + excess));
    Ok((eps_minus, eps_plus, excess))
}

/// First-order expansion of the roots in `Δ_g`:
/// `ε₋ ≈ −1 − Δ_g/(Δ_f+D_fg)` and `ε₊ ≈ Δ_f/D_fg − Δ_f Δ_g / (D_fg (Δ_f+D_fg))`.
pub fn first_order_roots(delta_f: f64, delta_g: f64, d_fg: f64) -> (f64, f64) {
    let sum = delta_f + d_fg;
    (
        -1.0 - delta_g / sum,
        delta_f / d_fg - delta_f * delta_g / (d_fg * sum),
    )
}

/// `δ(a) = Δ_g^a / Δ_f^a`, evaluated from the definition.
pub fn relative_dispersion(
    x: &FeatureMatrix,
    f: &WeightDistribution,
    g: &WeightDistribution,
    a: &[f64],
) -> Result<f64> {
    let denominator = inertia_about(x, f, a)?;
    let numerator = inertia_about(x, g, a)?;
    if denominator <= 0.0 {
        return Err(Error::DegenerateContext(
            "all context mass sits at the reference point".into(),
        ));
    }
    Ok(numerator / denominator)
}

/// Point `x̄_f + ε (x̄_f − x̄_g)` on the centroid line.
pub fn line_point(
    x: &FeatureMatrix,
    f: &WeightDistribution,
    g: &WeightDistribution,
    eps: f64,
) -> Result<Vec<f64>> {
    let cf = centroid(x, f)?;
    let cg = centroid(x, g)?;
    Ok(affine(&cf, &cg, eps))
}

fn affine(cf: &[f64], cg: &[f64], eps: f64) -> Vec<f64> {
    cf.iter().zip(cg).map(|(f, g)| f + eps * (f - g)).collect()
}

pub fn signed_coefficients(
    f: &WeightDistribution,
    g: &WeightDistribution,
    eps: f64,
) -> Result<SignedDistribution> {
    if f.len() != g.len() {
        return Err(Error::DimensionMismatch {
            expected: f.len(),
            found: g.len(),
        });
    }
    Ok(SignedDistribution(
        f.weights()
            .iter()
            .zip(g.weights())
            .map(|(fi, gi)| (1.0 + eps) * fi - eps * gi)
            .collect(),
    ))
}

/// Computes the in-focus and out-focus points of `g` in context `f`.
pub fn focal_points(
    x: &FeatureMatrix,
    f: &WeightDistribution,
    g: &WeightDistribution,
) -> Result<FocalAnalysis> {
    let centroid_f = centroid(x, f)?;
    let centroid_g = centroid(x, g)?;
    let delta_f = centroid_inertia(x, f)?;
    let delta_g = centroid_inertia(x, g)?;
    let d_fg = squared_distance(&centroid_f, &centroid_g);

    let (eps_minus, eps_plus, excess) = roots_and_excess(delta_f, delta_g, d_fg)?;
    // Anchored at x̄_g so that a singleton group's in-focus is its own point.
    let a_minus: Vec<f64> = centroid_g
        .iter()
        .zip(&centroid_f)
        .map(|(g, f)| g - excess * (f - g))
        .collect();
    let a_plus = affine(&centroid_f, &centroid_g, eps_plus);
    let delta_at_minus = relative_dispersion(x, f, g, &a_minus)?;
    let delta_at_plus = relative_dispersion(x, f, g, &a_plus)?;
    debug_assert!(delta_at_minus <= delta_at_plus);
    debug_assert!({
        let profile = LineProfile {
            delta_f,
            delta_g,
            d_fg,
        };
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-6 * a.abs().max(b.abs()).max(1.0);
        close(profile.value(eps_minus), delta_at_minus)
            && close(profile.value(eps_plus), delta_at_plus)
    });

    Ok(FocalAnalysis {
        centroid_f,
        centroid_g,
        delta_f,
        delta_g,
        d_fg,
        b_fg: delta_f - delta_g - d_fg,
        eps_minus,
        eps_plus,
        a_minus,
        a_plus,
        delta_at_minus,
        delta_at_plus,
        polarization_ratio: eps_plus - eps_minus,
    })
}

/// Samples `δ(a(ε))` on `steps` evenly spaced values of `ε`.
pub fn dispersion_profile(
    x: &FeatureMatrix,
    f: &WeightDistribution,
    g: &WeightDistribution,
    eps_range: (f64, f64),
    steps: usize,
) -> Result<Vec<(f64, f64)>> {
    let profile = profile_of(x, f, g)?;
    profile.sample(eps_range.0, eps_range.1, steps)
}

/// Builds the line profile of a pair without solving for its roots.
pub fn profile_of(
    x: &FeatureMatrix,
    f: &WeightDistribution,
    g: &WeightDistribution,
) -> Result<LineProfile> {
    let cf = centroid(x, f)?;
    let cg = centroid(x, g)?;
    Ok(LineProfile {
        delta_f: centroid_inertia(x, f)?,
        delta_g: centroid_inertia(x, g)?,
        d_fg: squared_distance(&cf, &cg),
    })
}

/// First-order predictions `(ε₋, ε₊)` for small group inertia.
pub fn expansion_check(
    x: &FeatureMatrix,
    f: &WeightDistribution,
    g: &WeightDistribution,
) -> Result<(f64, f64)> {
    let p = profile_of(x, f, g)?;
    // Same preconditions as the exact roots.
    focal_roots(p.delta_f, p.delta_g, p.d_fg)?;
    Ok(first_order_roots(p.delta_f, p.delta_g, p.d_fg))
}
