//! Bracketed root finding for monotone decreasing functions.

use crate::error::{Error, Result};

const MAX_STEPS: usize = 200;

/// Root of a decreasing function on `[lo, hi]` with `f(lo) > 0 > f(hi)`.
///
/// `f` returns its value and, when it has one, its derivative. A Newton step
/// is taken from the latest iterate when a derivative is available, otherwise
/// a secant step across the bracket; any step that leaves the bracket, or a
/// bracket that fails to halve over two steps, falls back to bisection.
/// Stops when `|f| <= ftol` or the bracket collapses to a few ulps.
pub(crate) fn solve_decreasing<F>(what: &'static str, mut f: F, lo: f64, hi: f64, ftol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, Option<f64>)>,
{
    let (mut lo, mut hi) = (lo, hi);
    let (mut f_lo, _) = f(lo)?;
    let (mut f_hi, _) = f(hi)?;
    if !(f_lo > 0.0 && f_hi < 0.0) {
        if f_lo.abs() <= ftol {
            return Ok(lo);
        }
        if f_hi.abs() <= ftol {
            return Ok(hi);
        }
        return Err(Error::BracketFailure { what, lo, hi });
    }
    let mut x = 0.5 * (lo + hi);
    let mut width_before = hi - lo;
    for step in 0..MAX_STEPS {
        let (fx, slope) = f(x)?;
        if fx.abs() <= ftol {
            return Ok(x);
        }
        if fx > 0.0 {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        if hi - lo <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            return Ok(x);
        }
        let candidate = match slope {
            Some(d) if d < 0.0 => x - fx / d,
            _ => hi - f_hi * (hi - lo) / (f_hi - f_lo),
        };
        let shrinking = step % 2 == 0 || hi - lo <= 0.5 * width_before;
        if step % 2 == 1 {
            width_before = hi - lo;
        }
        x = if shrinking && candidate > lo && candidate < hi { candidate } else { 0.5 * (lo + hi) };
    }
    Err(Error::IterationCap { what, iterations: MAX_STEPS })
}
