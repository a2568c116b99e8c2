//! Brute-force reference computations for testing.
//!
//! Everything here works on plain `Vec<f64>` data and shares no code with
//! `infocus-core`: weighted means and inertias are summed directly, and
//! extrema are found by dense grid scans refined with golden-section search.

use rand::Rng;

/// A random weighted point cloud with a context `f` and a group `g`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub x: Vec<Vec<f64>>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn p(&self) -> usize {
        self.x[0].len()
    }

    pub fn centroid_f(&self) -> Vec<f64> {
        weighted_mean(&self.x, &self.f)
    }

    pub fn centroid_g(&self) -> Vec<f64> {
        weighted_mean(&self.x, &self.g)
    }

    /// `x̄_f + ε (x̄_f − x̄_g)`.
    pub fn line_point(&self, eps: f64) -> Vec<f64> {
        let cf = self.centroid_f();
        let cg = self.centroid_g();
        cf.iter().zip(&cg).map(|(f, g)| f + eps * (f - g)).collect()
    }

    pub fn delta(&self, a: &[f64]) -> f64 {
        inertia(&self.x, &self.g, a) / inertia(&self.x, &self.f, a)
    }

    pub fn delta_on_line(&self, eps: f64) -> f64 {
        self.delta(&self.line_point(eps))
    }

    /// Sign-carrying numerator of `dδ(a(ε))/dε`, from direct sums over individuals.
    pub fn delta_slope(&self, eps: f64) -> f64 {
        let a = self.line_point(eps);
        let cf = self.centroid_f();
        let cg = self.centroid_g();
        let dir: Vec<f64> = cf.iter().zip(&cg).map(|(f, g)| f - g).collect();
        let moment = |w: &[f64]| -> f64 {
            self.x
                .iter()
                .zip(w)
                .map(|(row, wi)| {
                    let dot: f64 = row
                        .iter()
                        .zip(&a)
                        .zip(&dir)
                        .map(|((x, a), d)| (x - a) * d)
                        .sum();
                    -2.0 * wi * dot
                })
                .sum()
        };
        let (num, den) = (inertia(&self.x, &self.g, &a), inertia(&self.x, &self.f, &a));
        moment(&self.g) * den - num * moment(&self.f)
    }

    /// `γ(a) = A Δ_g^a − B Δ_h^a` for an arbitrary second distribution `h`.
    pub fn gamma(&self, h: &[f64], weight_group: f64, weight_other: f64, a: &[f64]) -> f64 {
        weight_group * inertia(&self.x, &self.g, a) - weight_other * inertia(&self.x, h, a)
    }

    /// Bounded extremum of `γ` along the centroid line, as `(ε, is_minimum)`;
    /// `None` when neither or both searches end on the boundary of `[lo, hi]`.
    pub fn gamma_extremum_on_line(
        &self,
        h: &[f64],
        weight_group: f64,
        weight_other: f64,
        lo: f64,
        hi: f64,
    ) -> Option<(f64, bool)> {
        let value = |e: f64| self.gamma(h, weight_group, weight_other, &self.line_point(e));
        let dir: Vec<f64> = self
            .centroid_f()
            .iter()
            .zip(self.centroid_g())
            .map(|(f, g)| f - g)
            .collect();
        let slope = |e: f64| -> f64 {
            let a = self.line_point(e);
            self.x
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let dot: f64 = row
                        .iter()
                        .zip(&a)
                        .zip(&dir)
                        .map(|((x, a), d)| (a - x) * d)
                        .sum();
                    2.0 * (weight_group * self.g[i] - weight_other * h[i]) * dot
                })
                .sum()
        };
        let (min_at, _) = golden_min(value, lo, hi, 1e-10);
        let (max_at, _) = golden_min(|e| -value(e), lo, hi, 1e-10);
        let margin = 1e-3 * (hi - lo);
        let interior = |e: f64| e > lo + margin && e < hi - margin;
        let width = 1e-4 * (hi - lo);
        match (interior(min_at), interior(max_at)) {
            (true, false) => Some((polish_root(slope, min_at, width), true)),
            (false, true) => Some((polish_root(slope, max_at, width), false)),
            _ => None,
        }
    }

    /// Extrema of `δ` along the centroid line over `[lo, hi]`, polished by
    /// bisection on the sign of the slope.
    pub fn line_extrema(&self, lo: f64, hi: f64, steps: usize) -> Option<Extrema> {
        let mut e = scan_extrema(|eps| self.delta_on_line(eps), lo, hi, steps)?;
        let width = 2.0 * (hi - lo) / (steps - 1) as f64;
        e.argmin = polish_root(|eps| self.delta_slope(eps), e.argmin, width);
        e.argmax = polish_root(|eps| self.delta_slope(eps), e.argmax, width);
        e.min = self.delta_on_line(e.argmin);
        e.max = self.delta_on_line(e.argmax);
        Some(e)
    }
}

/// Bisection for a sign change of `slope` in `[guess − width, guess + width]`;
/// returns `guess` unchanged when the bracket holds no sign change.
pub fn polish_root<F: Fn(f64) -> f64>(slope: F, guess: f64, width: f64) -> f64 {
    let (mut a, mut b) = (guess - width, guess + width);
    let (sa, sb) = (slope(a), slope(b));
    if sa == 0.0 {
        return a;
    }
    if sb == 0.0 {
        return b;
    }
    if sa.signum() == sb.signum() {
        return guess;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let sm = slope(m);
        if sm == 0.0 {
            return m;
        }
        if sm.signum() == sa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn normalized(mut w: Vec<f64>) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    for v in &mut w {
        *v /= s;
    }
    w
}

/// `n ∈ [2, max_n]`, `p ∈ [1, max_p]`, features in `[-1, 1]`, strictly
/// positive context weights, and a group supported on a random nonempty
/// subset that is not the whole set when `n > 1`.
pub fn random_instance<R: Rng>(rng: &mut R, max_n: usize, max_p: usize) -> Instance {
    let n = rng.gen_range(2..=max_n);
    let p = rng.gen_range(1..=max_p);
    let x = (0..n)
        .map(|_| (0..p).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let f = normalized((0..n).map(|_| rng.gen_range(0.1..1.0)).collect());
    let size = rng.gen_range(1..n);
    let mut members: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        members.swap(i, rng.gen_range(0..=i));
    }
    let mut g = vec![0.0; n];
    for &i in &members[..size] {
        g[i] = rng.gen_range(0.1..1.0);
    }
    Instance {
        x,
        f,
        g: normalized(g),
    }
}

pub fn weighted_mean(x: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    let p = x[0].len();
    (0..p)
        .map(|k| x.iter().zip(w).map(|(row, wi)| wi * row[k]).sum())
        .collect()
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

/// `Σ_i w_i ‖x_i − a‖²`.
pub fn inertia(x: &[Vec<f64>], w: &[f64], a: &[f64]) -> f64 {
    x.iter()
        .zip(w)
        .map(|(row, wi)| wi * squared_distance(row, a))
        .sum()
}

/// Golden-section minimization on `[lo, hi]`.
pub fn golden_min<F: Fn(f64) -> f64>(objective: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if objective(c) < objective(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let m = 0.5 * (a + b);
    (m, objective(m))
}

#[derive(Debug, Clone, Copy)]
pub struct Extrema {
    pub argmin: f64,
    pub min: f64,
    pub argmax: f64,
    pub max: f64,
}

/// Global minimum and maximum of `objective` over `[lo, hi]`: a grid of
/// `steps` points brackets each extremum, golden-section refines it.
///
/// Returns `None` when either extremum falls on the boundary of the grid.
pub fn scan_extrema<F: Fn(f64) -> f64>(
    objective: F,
    lo: f64,
    hi: f64,
    steps: usize,
) -> Option<Extrema> {
    let h = (hi - lo) / (steps - 1) as f64;
    let values: Vec<f64> = (0..steps).map(|i| objective(lo + h * i as f64)).collect();
    let (imin, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))?;
    let (imax, _) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))?;
    if imin == 0 || imin == steps - 1 || imax == 0 || imax == steps - 1 {
        return None;
    }
    let at = |i: usize| lo + h * i as f64;
    let (argmin, min) = golden_min(&objective, at(imin - 1), at(imin + 1), 1e-11);
    let (argmax, neg) = golden_min(|e| -objective(e), at(imax - 1), at(imax + 1), 1e-11);
    Some(Extrema {
        argmin,
        min,
        argmax,
        max: -neg,
    })
}

/// Unit vector orthogonal to `u` (assumed unit), or `None` in one dimension.
pub fn random_orthogonal<R: Rng>(rng: &mut R, u: &[f64]) -> Option<Vec<f64>> {
    if u.len() < 2 {
        return None;
    }
    loop {
        let mut v: Vec<f64> = (0..u.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let dot: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
        for (vi, ui) in v.iter_mut().zip(u) {
            *vi -= dot * ui;
        }
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return Some(v.into_iter().map(|c| c / norm).collect());
        }
    }
}

/// Smallest and largest `δ` found off the centroid line: a `side × side`
/// grid over the plane spanned by the line and a random orthogonal
/// direction, plus random probes in the full space around both extremizers.
pub fn off_line_extrema<R: Rng>(
    rng: &mut R,
    inst: &Instance,
    line: &Extrema,
    side: usize,
) -> (f64, f64) {
    let cf = inst.centroid_f();
    let cg = inst.centroid_g();
    let dir: Vec<f64> = cf.iter().zip(&cg).map(|(f, g)| f - g).collect();
    let len = dir.iter().map(|c| c * c).sum::<f64>().sqrt();
    let u: Vec<f64> = dir.iter().map(|c| c / len).collect();
    let reach = 1.5 * line.argmin.abs().max(line.argmax.abs()).max(1.0) * len;

    let mut lowest = f64::INFINITY;
    let mut highest = f64::NEG_INFINITY;
    let mut record = |d: f64| {
        lowest = lowest.min(d);
        highest = highest.max(d);
    };

    if let Some(v) = random_orthogonal(rng, &u) {
        for i in 0..side {
            let s = -reach + 2.0 * reach * i as f64 / (side - 1) as f64;
            for j in 0..side {
                let t = -reach + 2.0 * reach * j as f64 / (side - 1) as f64;
                if t == 0.0 {
                    continue;
                }
                let a: Vec<f64> = (0..cf.len()).map(|k| cf[k] + s * u[k] + t * v[k]).collect();
                record(inst.delta(&a));
            }
        }
    }
    for center in [line.argmin, line.argmax] {
        let base = inst.line_point(center);
        for _ in 0..200 {
            let scale = 10f64.powf(rng.gen_range(-4.0..0.0)) * len;
            let a: Vec<f64> = base
                .iter()
                .map(|b| b + scale * rng.gen_range(-1.0..1.0))
                .collect();
            record(inst.delta(&a));
        }
    }
    (lowest, highest)
}
