use crate::error::{Error, Result};

/// Absolute tolerance on the target quantity for every inversion.
pub const BISECTION_TOLERANCE: f64 = 1e-6;
pub const BISECTION_MAX_ITERATIONS: usize = 200;

/// Finds `x` in `[lo, hi]` with `|f(x) - target| <= tol` for a function that is
/// increasing on the bracket. The caller checks that the bracket contains the
/// target.
pub(crate) fn bisect_increasing<F>(mut f: F, mut lo: f64, mut hi: f64, target: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    for _ in 0..BISECTION_MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let value = f(mid)?;
        let residual = value - target;
        if residual.abs() <= tol {
            return Ok(mid);
        }
        if residual < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence { iterations: BISECTION_MAX_ITERATIONS })
}
