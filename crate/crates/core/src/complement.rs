//! Complementary groups: `ḡ` such that `ρ g + (1−ρ) ḡ = f`.
//!
//! Since `Δ_f^a = ρ Δ_g^a + (1−ρ) Δ_ḡ^a` for every `a`, the relative
//! dispersions satisfy `ρ δ(a|g,f) + (1−ρ) δ(a|ḡ,f) = 1`. Maximizing one is
//! minimizing the other, so the out-focus of `g` is the in-focus of `ḡ`.

use crate::error::{Error, Result};
use crate::geometry::{inertia_about, FeatureMatrix, WeightDistribution};

/// Complement entries above `-ROUNDOFF` are treated as exact zeros.
const ROUNDOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplementResult {
    /// Mixing weight of the group.
    pub rho: f64,
    pub rho_max: f64,
    pub gbar: WeightDistribution,
}

/// `min_i f_i / g_i` over the support of `g`.
pub fn rho_max(f: &WeightDistribution, g: &WeightDistribution) -> Result<f64> {
    if f.len() != g.len() {
        return Err(Error::DimensionMismatch {
            expected: f.len(),
            found: g.len(),
        });
    }
    let mut best = f64::INFINITY;
    for (i, (&fi, &gi)) in f.weights().iter().zip(g.weights()).enumerate() {
        if gi <= 0.0 {
            continue;
        }
        if fi <= 0.0 {
            return Err(Error::ComplementUndefined(format!(
                "individual {i} has group weight {gi} but no context weight"
            )));
        }
        best = best.min(fi / gi);
    }
    if !best.is_finite() {
        return Err(Error::InvalidWeights("group has no positive weight".into()));
    }
    Ok(best)
}

/// Builds `ḡ = (f − ρ g) / (1 − ρ)`, with `ρ` defaulting to `ρ_max`.
pub fn complement_of(
    f: &WeightDistribution,
    g: &WeightDistribution,
    rho: Option<f64>,
) -> Result<ComplementResult> {
    let rho_max = rho_max(f, g)?;
    let rho = rho.unwrap_or(rho_max);
    if !(rho > 0.0 && rho <= rho_max) {
        return Err(Error::InvalidInput(format!(
            "mixing weight {rho} outside (0, {rho_max}]"
        )));
    }
    if rho >= 1.0 {
        return Err(Error::ComplementUndefined(
            "group equals the context, so there is nothing left to complement".into(),
        ));
    }
    let scale = 1.0 - rho;
    let mut weights = Vec::with_capacity(f.len());
    for (i, (&fi, &gi)) in f.weights().iter().zip(g.weights()).enumerate() {
        let w = (fi - rho * gi) / scale;
        if w < -ROUNDOFF {
            return Err(Error::ComplementUndefined(format!(
                "negative complement weight {w} at individual {i}"
            )));
        }
        weights.push(w.max(0.0));
    }
    let gbar = WeightDistribution::from_unnormalized(weights)?;
    Ok(ComplementResult { rho, rho_max, gbar })
}

/// `δ'(a) = Δ_g^a / Δ_ḡ^a`, the relative dispersion of `g` against its complement.
pub fn dual_dispersion(
    x: &FeatureMatrix,
    g: &WeightDistribution,
    gbar: &WeightDistribution,
    a: &[f64],
) -> Result<f64> {
    let denominator = inertia_about(x, gbar, a)?;
    if denominator <= 0.0 {
        return Err(Error::DegenerateContext(
            "all complement mass sits at the reference point".into(),
        ));
    }
    Ok(inertia_about(x, g, a)? / denominator)
}

/// `(1−ρ) / (1/δ − ρ)`: the dual dispersion expressed through `δ(a|g,f)`.
pub fn dual_from_relative(delta: f64, rho: f64) -> f64 {
    (1.0 - rho) / (1.0 / delta - rho)
}
