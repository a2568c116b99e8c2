//! One-dimensional golden-section search.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimizes a unimodal `objective` on `[lo, hi]` and returns `(x, objective(x))`.
///
/// Iterates until the bracket is narrower than `tol` or 200 iterations have run.
pub fn golden_section_minimize<F>(mut objective: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = objective(c);
    let mut fd = objective(d);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = objective(d);
        }
    }
    let mid = 0.5 * (a + b);
    let fm = objective(mid);
    // The midpoint is not always the best point seen in the final bracket.
    [(mid, fm), (c, fc), (d, fd)]
        .into_iter()
        .fold(
            (mid, fm),
            |best, cand| if cand.1 < best.1 { cand } else { best },
        )
}
