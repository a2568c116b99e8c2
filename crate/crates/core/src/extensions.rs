//! Related objectives built from the same inertias.
//!
//! - [`decision_ratio`]: miss / correct-rejection ratio of the rule
//!   "assign `i` to the group with probability `exp(−β D_ia)`", which tends to
//!   `δ(a)` as `β → 0`.
//! - [`subtractive_extremum`]: extremum of `γ(a) = A Δ_g^a − B Δ_f^a`.
//! - [`metacontrast_value`] and [`metacontrast_minimize`]: the
//!   prototypicality function `Γ(a) = (1−λ) Δ_{g(a)}^a − λ Δ_{ḡ(a)}^a` where the
//!   group itself depends on `a` through `g_i(a) ∝ exp(−β D_ia)`.

use crate::error::{Error, Result};
use crate::geometry::{
    centroid, inertia_about, squared_distance, FeatureMatrix, WeightDistribution,
};
use crate::optimize::golden_section_minimize;
use crate::sum::compensated_sum;

/// Minimum number of grid points used by [`metacontrast_minimize`].
pub const METACONTRAST_GRID: usize = 2001;

/// Local minima closer than this are merged.
pub const MINIMA_MERGE_DISTANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetaContrastParams {
    /// Weight of the complement term, in `[0, 1]`.
    pub lambda: f64,
    /// Decay of the membership exponential, positive.
    pub beta: f64,
}

impl MetaContrastParams {
    pub fn new(lambda: f64, beta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidInput(format!(
                "lambda {lambda} outside [0, 1]"
            )));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidInput(format!("beta {beta} must be positive")));
        }
        Ok(Self { lambda, beta })
    }
}

impl Default for MetaContrastParams {
    fn default() -> Self {
        Self {
            lambda: 0.08,
            beta: 7.7,
        }
    }
}

/// Location and nature of the extremum of a subtractive combination.
#[derive(Debug, Clone, PartialEq)]
pub enum SubtractiveExtremum {
    Minimum {
        eps: f64,
        a: Vec<f64>,
    },
    Maximum {
        eps: f64,
        a: Vec<f64>,
    },
    /// `A = B ≠ 0`: `γ` is affine in `a` and has no bounded extremum.
    Unbounded,
}

impl SubtractiveExtremum {
    pub fn eps(&self) -> Option<f64> {
        match self {
            Self::Minimum { eps, .. } | Self::Maximum { eps, .. } => Some(*eps),
            Self::Unbounded => None,
        }
    }

    pub fn point(&self) -> Option<&[f64]> {
        match self {
            Self::Minimum { a, .. } | Self::Maximum { a, .. } => Some(a),
            Self::Unbounded => None,
        }
    }
}

/// `Σ_i g_i (1 − e^{−β D_ia}) / Σ_i f_i (1 − e^{−β D_ia})`.
pub fn decision_ratio(
    x: &FeatureMatrix,
    f: &WeightDistribution,
    g: &WeightDistribution,
    a: &[f64],
    beta: f64,
) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidInput(format!("beta {beta} must be positive")));
    }
    if a.len() != x.ncols() {
        return Err(Error::DimensionMismatch {
            expected: x.ncols(),
            found: a.len(),
        });
    }
    for w in [f, g] {
        if w.len() != x.nrows() {
            return Err(Error::DimensionMismatch {
                expected: x.nrows(),
                found: w.len(),
            });
        }
    }
    // 1 − e^{−βD} via expm1 keeps full precision as β → 0.
    let reject: Vec<f64> = x
        .rows()
        .map(|row| -(-beta * squared_distance(row, a)).exp_m1())
        .collect();
    let weighted = |w: &WeightDistribution| {
        compensated_sum(w.weights().iter().zip(&reject).map(|(wi, r)| wi * r))
    };
    let denominator = weighted(f);
    if denominator <= 0.0 {
        return Err(Error::DegenerateContext(
            "reference point coincides with every context member".into(),
        ));
    }
    Ok(weighted(g) / denominator)
}

/// `γ(a) = A Δ_g^a − B Δ_f^a`.
pub fn subtractive_value(
    x: &FeatureMatrix,
    f: &WeightDistribution,
    g: &WeightDistribution,
    weight_group: f64,
    weight_context: f64,
    a: &[f64],
) -> Result<f64> {
    Ok(weight_group * inertia_about(x, g, a)? - weight_context * inertia_about(x, f, a)?)
}

/// Extremum of `γ(a) = A Δ_g^a − B Δ_f^a`.
///
/// `γ` is a quadratic in `a` with Hessian `2 (A − B) I`, stationary at
/// `ε = A / (B − A)` on the centroid line. With `A = 1−λ`, `B = λ` this is
/// `ε = (λ−1)/(1−2λ)`; with `A + B = 0` it is the mid-point `ε = −½`.
pub fn subtractive_extremum(
    x: &FeatureMatrix,
    f: &WeightDistribution,
    g: &WeightDistribution,
    weight_group: f64,
    weight_context: f64,
) -> Result<SubtractiveExtremum> {
    if weight_group == 0.0 && weight_context == 0.0 {
        return Err(Error::InvalidInput(
            "A = B = 0 makes the combination identically zero".into(),
        ));
    }
    let cf = centroid(x, f)?;
    let cg = centroid(x, g)?;
    let d_fg = squared_distance(&cf, &cg);
    if d_fg <= 0.0 {
        return Err(Error::CoincidentCentroids { d_fg });
    }
    let curvature = weight_group - weight_context;
    if curvature == 0.0 {
        return Ok(SubtractiveExtremum::Unbounded);
    }
    let eps = weight_group / (weight_context - weight_group);
    let a = cf.iter().zip(&cg).map(|(f, g)| f + eps * (f - g)).collect();
    Ok(if curvature > 0.0 {
        SubtractiveExtremum::Minimum { eps, a }
    } else {
        SubtractiveExtremum::Maximum { eps, a }
    })
}

/// Distance-dependent group `g(a)`, its mass fraction `ρ(a) = Z(a)/n` and the
/// complement `ḡ(a)`, all relative to the uniform context.
#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub group: WeightDistribution,
    pub rho: f64,
    pub complement: WeightDistribution,
}

pub fn metacontrast_membership(x: &FeatureMatrix, a: &[f64], beta: f64) -> Result<Membership> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidInput(format!("beta {beta} must be positive")));
    }
    if a.len() != x.ncols() {
        return Err(Error::DimensionMismatch {
            expected: x.ncols(),
            found: a.len(),
        });
    }
    let n = x.nrows();
    if n < 2 {
        return Err(Error::ComplementUndefined(
            "a single individual has no complement".into(),
        ));
    }
    let scaled: Vec<f64> = x
        .rows()
        .map(|row| beta * squared_distance(row, a))
        .collect();
    let nearest = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    // Shift by the nearest distance so the exponentials cannot all underflow.
    let shifted: Vec<f64> = scaled.iter().map(|s| (nearest - s).exp()).collect();
    let shifted_sum = compensated_sum(shifted.iter().copied());
    let group = WeightDistribution::from_unnormalized(shifted)?;
    let rho = (-nearest).exp() * shifted_sum / n as f64;

    // ḡ_i = (1/n − ρ g_i)/(1 − ρ) ∝ 1 − e^{−β D_ia}
    let rejection: Vec<f64> = scaled.iter().map(|s| -(-s).exp_m1()).collect();
    if rejection.iter().all(|&r| r <= 0.0) {
        return Err(Error::ComplementUndefined(
            "reference point coincides with every individual".into(),
        ));
    }
    let complement = WeightDistribution::from_unnormalized(rejection)?;
    Ok(Membership {
        group,
        rho,
        complement,
    })
}

/// `Γ(a) = (1−λ) Δ_{g(a)}^a − λ Δ_{ḡ(a)}^a`.
pub fn metacontrast_value(x: &FeatureMatrix, a: &[f64], params: MetaContrastParams) -> Result<f64> {
    let m = metacontrast_membership(x, a, params.beta)?;
    let within = inertia_about(x, &m.group, a)?;
    let between = inertia_about(x, &m.complement, a)?;
    Ok((1.0 - params.lambda) * within - params.lambda * between)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalMinimum {
    pub position: f64,
    pub value: f64,
    /// The minimum sits on an end of the search domain.
    pub at_boundary: bool,
}

/// All local minima of `Γ` over a one-dimensional domain, sorted by position.
///
/// A grid of [`METACONTRAST_GRID`] points brackets every basin, which
/// golden-section search then refines.
pub fn metacontrast_minimize(
    x: &FeatureMatrix,
    params: MetaContrastParams,
    domain: (f64, f64),
) -> Result<Vec<LocalMinimum>> {
    if x.ncols() != 1 {
        return Err(Error::UnsupportedDimension {
            expected: 1,
            found: x.ncols(),
        });
    }
    let (lo, hi) = domain;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidInput(format!("invalid domain [{lo}, {hi}]")));
    }
    let steps = METACONTRAST_GRID;
    let spacing = (hi - lo) / (steps - 1) as f64;
    let grid: Vec<f64> = (0..steps)
        .map(|i| {
            if i + 1 == steps {
                hi
            } else {
                lo + spacing * i as f64
            }
        })
        .collect();
    let values = grid
        .iter()
        .map(|&a| metacontrast_value(x, &[a], params))
        .collect::<Result<Vec<f64>>>()?;

    let mut eval = |a: f64| metacontrast_value(x, &[a], params).unwrap_or(f64::INFINITY);
    let mut minima: Vec<LocalMinimum> = Vec::new();
    let last = steps - 1;
    for i in 0..steps {
        let left_ok = i == 0 || values[i] < values[i - 1];
        let right_ok = i == last || values[i] <= values[i + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let at_boundary = i == 0 || i == last;
        let candidate = if at_boundary {
            LocalMinimum {
                position: grid[i],
                value: values[i],
                at_boundary,
            }
        } else {
            let (position, value) =
                golden_section_minimize(&mut eval, grid[i - 1], grid[i + 1], 1e-12 * (hi - lo));
            if value <= values[i] {
                LocalMinimum {
                    position,
                    value,
                    at_boundary,
                }
            } else {
                LocalMinimum {
                    position: grid[i],
                    value: values[i],
                    at_boundary,
                }
            }
        };
        match minima.last_mut() {
            Some(prev) if (candidate.position - prev.position).abs() < MINIMA_MERGE_DISTANCE => {
                if candidate.value < prev.value {
                    *prev = candidate;
                }
            }
            _ => minima.push(candidate),
        }
    }
    Ok(minima)
}
