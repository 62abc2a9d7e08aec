//! Approximations to the modal value of `M_n`.
//!
//! The continuous interpolant `g_λ(x) = 1 - Γ(x+1,λ)/Γ(x+1)` is strictly
//! decreasing, and the root of `g_λ(x) = 1/n` tracks the mode. Expanding
//! `ln g_λ` for large `x` gives
//!
//! ```text
//! h(x) = -x ln x + (1 + ln λ) x - (3/2) ln x + (ln λ - λ - ln(2π)/2) + (λ - 13/12)/x
//! ```
//!
//! with an `O(x^-2)` remainder. Keeping only the first two terms yields the
//! closed form `x0 = ln n / W(ln n / (e λ))`; one Newton step on `h` gives
//! `x1`. The formulas are asymptotic in `x`, so they are only meaningful once
//! `x0 > max(3, 2λ)`; below that use [`crate::maxdist::mode`].

use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::instance::ProblemInstance;
use crate::roots::solve_decreasing;
use crate::specfun::{self, half_ln_two_pi, Accuracy};

/// Target accuracy of the reference root solves, in log space.
pub const ROOT_FTOL: f64 = 1e-10;
/// Smallest first argument tried when bracketing `β_n`.
pub const BETA_FLOOR: f64 = 1e-6;
/// How far past `x0` the initial bracket reaches.
pub const BRACKET_REACH: f64 = 50.0;
const BRACKET_DOUBLINGS: usize = 8;

/// The truncated expansion `h(x)` of `ln g_λ(x)`. Intended for `x > 1`.
pub fn log_g_expansion(x: f64, lambda: f64) -> f64 {
    let ln_x = x.ln();
    let ln_lambda = lambda.ln();
    -x * ln_x + (1.0 + ln_lambda) * x - 1.5 * ln_x
        + (ln_lambda - lambda - half_ln_two_pi())
        + (lambda - 13.0 / 12.0) / x
}

/// `h'(x) = ln λ - ln x - 3/(2x) - (λ - 13/12)/x²`.
pub fn log_g_expansion_slope(x: f64, lambda: f64) -> f64 {
    lambda.ln() - x.ln() - 1.5 / x - (lambda - 13.0 / 12.0) / (x * x)
}

/// `x0 = ln n / W₀(ln n / (e λ))`, the root of `x (ln x - ln λ - 1) = ln n`.
pub fn x0(inst: &ProblemInstance) -> Result<f64> {
    let ln_n = inst.ln_n();
    if ln_n <= 0.0 {
        return Err(Error::Degenerate { what: "x0", ln_n });
    }
    Ok(ln_n / specfun::lambert_w0(ln_n / (E * inst.lambda()))?)
}

/// One Newton step on `h` from `x0`, keeping only the terms that survive as
/// `n → ∞`:
/// `x1 = x0 + (ln λ - λ - ln(2π)/2 - (3/2) ln x0) / (ln x0 - ln λ)`.
pub fn x1(inst: &ProblemInstance) -> Result<f64> {
    refine_once(x0(inst)?, inst.lambda())
}

fn refine_once(x0: f64, lambda: f64) -> Result<f64> {
    let ln_x0 = x0.ln();
    let ln_lambda = lambda.ln();
    let denom = ln_x0 - ln_lambda;
    if denom.abs() < 1e-9 {
        return Err(Error::SingularDenominator { ln_x0, ln_lambda });
    }
    Ok(x0 + (ln_lambda - lambda - half_ln_two_pi() - 1.5 * ln_x0) / denom)
}

/// Full Newton iterates `x ← x - (h(x) + ln n)/h'(x)` starting from `x_start`.
///
/// Every iterate must stay inside `(1, 10 x_start)`.
pub fn newton_refine(inst: &ProblemInstance, x_start: f64, steps: usize) -> Result<Vec<f64>> {
    if !(x_start.is_finite() && x_start > 1.0) {
        return Err(Error::Domain { what: "newton_refine", value: x_start });
    }
    let limit = 10.0 * x_start;
    let lambda = inst.lambda();
    let mut x = x_start;
    let mut iterates = Vec::with_capacity(steps);
    for step in 1..=steps {
        let residual = log_g_expansion(x, lambda) + inst.ln_n();
        x -= residual / log_g_expansion_slope(x, lambda);
        if !(x > 1.0 && x < limit) {
            return Err(Error::Divergence { step, iterate: x, limit });
        }
        iterates.push(x);
    }
    Ok(iterates)
}

/// `ln n / ln ln n`, independent of λ.
pub fn kimber_estimate(inst: &ProblemInstance) -> Result<f64> {
    let ln_n = inst.ln_n();
    if ln_n <= 1.0 {
        return Err(Error::Domain { what: "kimber_estimate", value: ln_n });
    }
    Ok(ln_n / ln_n.ln())
}

fn initial_upper(inst: &ProblemInstance) -> Result<f64> {
    Ok(x0(inst)? + BRACKET_REACH)
}

/// Push `hi` outward until `f(hi) < 0`.
fn widen_upper<F>(what: &'static str, f: &mut F, lo: f64, mut hi: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, Option<f64>)>,
{
    for _ in 0..BRACKET_DOUBLINGS {
        if f(hi)?.0 < 0.0 {
            return Ok(hi);
        }
        hi *= 2.0;
    }
    Err(Error::BracketFailure { what, lo, hi })
}

/// Anderson's normalizing constant `β_n`: the first argument at which the
/// regularized incomplete gamma tail reaches `1/n`, i.e. the solution of
/// `1 - Q(β, λ) = 1/n`.
///
/// `1 - Q(β, λ) = P(β, λ)` is decreasing in `β` (for integer `β` it is
/// `Pr[X >= β]`). The solve runs on `ln P(β, λ) + ln n`, bracketed from
/// `β = 1e-6` up to `x0 + 50` (doubled if needed), to a log-space residual of
/// `1e-10`.
pub fn anderson_beta(inst: &ProblemInstance, acc: Accuracy) -> Result<f64> {
    let lambda = inst.lambda();
    let ln_n = inst.ln_n();
    let mut f =
        |beta: f64| -> Result<(f64, Option<f64>)> { Ok((specfun::log_reg_gamma(beta, lambda, acc)?.0 + ln_n, None)) };
    let hi = widen_upper("anderson_beta", &mut f, BETA_FLOOR, initial_upper(inst)?)?;
    solve_decreasing("anderson_beta", f, BETA_FLOOR, hi, ROOT_FTOL)
}

/// Root of `ln g_λ(x) = -ln n` on the series-evaluated interpolant, solved
/// with Newton steps safeguarded by a bisection bracket.
///
/// `g_λ(x) = P(x+1, λ)` is decreasing on `(-1, ∞)`, so the root exists for
/// every `n > 1`; it is negative when `n < 1/(1 - e^{-λ})`. The bracket starts
/// at `BETA_FLOOR - 1`, mirroring `anderson_beta` (whose root is this one
/// plus one).
pub fn continuous_root(inst: &ProblemInstance, acc: Accuracy) -> Result<f64> {
    let lambda = inst.lambda();
    let ln_n = inst.ln_n();
    let mut f = |x: f64| -> Result<(f64, Option<f64>)> {
        let (v, slope) = specfun::log_g_with_slope(x, lambda, acc)?;
        Ok((v + ln_n, Some(slope)))
    };
    let lo = BETA_FLOOR - 1.0;
    let at_lo = f(lo)?.0;
    if at_lo.abs() <= ROOT_FTOL {
        return Ok(lo);
    }
    if at_lo < 0.0 {
        return Err(Error::BracketFailure { what: "continuous_root", lo, hi: lo });
    }
    let hi = widen_upper("continuous_root", &mut f, lo, initial_upper(inst)?)?;
    solve_decreasing("continuous_root", f, lo, hi, ROOT_FTOL)
}

/// Every approximation for one instance. Fields that the formulas cannot
/// produce at this instance hold the typed error.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub x0: Result<f64>,
    pub x1: Result<f64>,
    /// Further Newton iterates on `h`, started from `x1`.
    pub x_newton: Result<Vec<f64>>,
    pub kimber: Result<f64>,
    pub beta_n: Result<f64>,
    pub continuous_root: Result<f64>,
}

pub fn report(inst: &ProblemInstance, newton_steps: usize, acc: Accuracy) -> AsymptoticReport {
    let x1 = x1(inst);
    let x_newton = match &x1 {
        Ok(start) => newton_refine(inst, *start, newton_steps),
        Err(e) => Err(e.clone()),
    };
    AsymptoticReport {
        x0: x0(inst),
        x1,
        x_newton,
        kimber: kimber_estimate(inst),
        beta_n: anderson_beta(inst, acc),
        continuous_root: continuous_root(inst, acc),
    }
}
