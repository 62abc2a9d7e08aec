//! Special functions: log-gamma, Poisson tails in log space, the regularized
//! incomplete gamma function for real first argument, the interpolant
//! `g_λ(x) = 1 - Γ(x+1, λ)/Γ(x+1)` and the principal branch of Lambert W.
//!
//! Everything here is a pure function of its arguments.

use std::f64::consts::{E, LN_2, PI};

use crate::error::{Error, Result};
use crate::instance::LogProb;

/// Tolerance and iteration budget for the iterative series and continued
/// fractions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    rel_tol: f64,
    max_iter: usize,
}

impl Accuracy {
    pub fn new(rel_tol: f64, max_iter: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1e-6) || max_iter < 10 {
            return Err(Error::InvalidAccuracy { rel_tol, max_iter });
        }
        Ok(Self { rel_tol, max_iter })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }
}

impl Default for Accuracy {
    fn default() -> Self {
        Self { rel_tol: 1e-13, max_iter: 500 }
    }
}

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Stirling series coefficients `B_{2m} / (2m (2m-1))`, m = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Below this the argument is shifted upward before the asymptotic series is
/// applied. At 10 the first omitted Stirling term is under 2e-18.
const ASYMPTOTIC_FLOOR: f64 = 10.0;

/// `ln Γ(x)` for `x > 0`.
///
/// Integers up to 21 go through the exact factorial, so `ln Γ(1) = ln Γ(2) = 0`
/// exactly. Other arguments below 10 are shifted with
/// `Γ(x) = Γ(x+m) / (x (x+1) ... (x+m-1))`, then the Stirling series with the eight fixed Bernoulli coefficients in
/// [`STIRLING`] is summed. Near the zeros of `ln Γ` at 1 and 2 the error is
/// absolute (a few ulps of `ln Γ(10)`) rather than relative.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain { what: "log_gamma", value: x });
    }
    if x <= 21.0 && x.fract() == 0.0 {
        let factorial: u64 = (1..x as u64).product();
        return Ok((factorial as f64).ln());
    }
    let mut z = x;
    let mut product = 1.0;
    while z < ASYMPTOTIC_FLOOR {
        product *= z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    series *= inv;
    let stirling = (z - 0.5) * z.ln() - z + HALF_LN_2PI + series;
    Ok(stirling - product.ln())
}

/// Digamma `ψ(x) = d/dx ln Γ(x)` for `x > 0`, by the same shift-then-series
/// scheme as [`log_gamma`].
pub fn digamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain { what: "digamma", value: x });
    }
    let mut z = x;
    let mut shift = 0.0;
    while z < ASYMPTOTIC_FLOOR {
        shift += 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    // B_{2m} / (2m), m = 1..=7
    const C: [f64; 7] =
        [1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0];
    let mut series = 0.0;
    for c in C.iter().rev() {
        series = series * inv2 + c;
    }
    series *= inv2;
    Ok(z.ln() - 0.5 / z - series - shift)
}

/// `ln(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(1 - e^x)` for `x <= 0`.
pub fn ln_1m_exp(x: f64) -> f64 {
    if x > -LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

fn check_lambda(what: &'static str, lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what, value: lambda })
    }
}

/// `ln Pr[X = k]` for `X ~ Poisson(lambda)`.
pub fn log_poisson_pmf(k: u64, lambda: f64) -> Result<LogProb> {
    check_lambda("log_poisson_pmf", lambda)?;
    let k = k as f64;
    Ok(LogProb::clamped(-lambda + k * lambda.ln() - log_gamma(k + 1.0)?))
}

/// Sum of a positive series given in ratio form, in log space.
///
/// `ln_first` is the log of the first term; `ratio(j)` returns
/// `term_{j+1} / term_j` for `j = 0, 1, ...`. The linear accumulator is
/// rescaled whenever it grows past 1e280, so series whose terms climb before
/// they fall (mean above the starting index) do not overflow. Summation stops
/// once the geometric bound on the remainder is below `tol` times the partial
/// sum.
fn ratio_series_log(
    what: &'static str,
    ln_first: f64,
    ratio: impl Fn(usize) -> f64,
    tol: f64,
    max_iter: Option<usize>,
) -> Result<f64> {
    let mut ln_scale = ln_first;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut j = 0usize;
    loop {
        let r = ratio(j);
        if r < 1.0 && term * r / (1.0 - r) <= tol * sum {
            break;
        }
        term *= r;
        sum += term;
        if sum > 1e280 {
            ln_scale += sum.ln();
            term /= sum;
            sum = 1.0;
        }
        j += 1;
        if let Some(cap) = max_iter {
            if j > cap {
                return Err(Error::IterationCap { what, iterations: cap });
            }
        }
    }
    Ok(ln_scale + sum.ln())
}

/// `ln Pr[X > k]`, summed directly from the tail series.
///
/// Starting at the `k+1` term the recursion `term_{i+1} = term_i λ/(i+1)` is
/// run in scaled linear arithmetic; the result never goes through `1 - cdf`,
/// so it stays accurate down to `ln Pr ≈ -1e5` and beyond.
pub fn poisson_sf_log(k: u64, lambda: f64) -> Result<LogProb> {
    check_lambda("poisson_sf_log", lambda)?;
    let first = k + 1;
    let ln_first = log_poisson_pmf(first, lambda)?.ln();
    let start = first as f64;
    let v =
        ratio_series_log("poisson_sf_log", ln_first, |j| lambda / (start + 1.0 + j as f64), f64::EPSILON / 4.0, None)?;
    Ok(LogProb::clamped(v))
}

/// `ln Pr[X <= k]` from the head sum `Σ_{i<=k} e^{-λ} λ^i / i!`, anchored at
/// its largest term.
fn poisson_head_log(k: u64, lambda: f64) -> Result<f64> {
    let peak = (lambda.floor() as u64).min(k);
    let ln_peak = log_poisson_pmf(peak, lambda)?.ln();
    let mut sum = 1.0;
    // downward: term_{i-1} / term_i = i / λ
    let mut term = 1.0;
    let mut i = peak;
    while i > 0 {
        term *= i as f64 / lambda;
        sum += term;
        if term < f64::EPSILON / 4.0 * sum {
            break;
        }
        i -= 1;
    }
    // upward: term_{i+1} / term_i = λ / (i+1)
    let mut term = 1.0;
    for i in peak..k {
        term *= lambda / (i + 1) as f64;
        sum += term;
    }
    Ok(ln_peak + sum.ln())
}

/// `ln Pr[X <= k] = ln Q(k+1, λ)`.
///
/// The head sum is a log-sum-exp over the pmf terms `0..=k`. When the result
/// is close to zero (cdf above one half) it is instead formed as
/// `ln(1 - Pr[X > k])` from the directly summed tail, which keeps full
/// relative accuracy of the log even when it is `-1e-50`.
pub fn poisson_cdf_log(k: u64, lambda: f64) -> Result<LogProb> {
    check_lambda("poisson_cdf_log", lambda)?;
    if (k + 1) as f64 > lambda {
        let sf = poisson_sf_log(k, lambda)?.ln();
        if sf < -LN_2 {
            return Ok(LogProb::clamped(ln_1m_exp(sf)));
        }
    }
    Ok(LogProb::clamped(poisson_head_log(k, lambda)?))
}

/// `ln(-ln Pr[X <= k])`.
///
/// This is the quantity `n`-th powers of the cdf need: `ln Pr[X<=k]^n =
/// -exp(ln n + ln(-ln Pr[X<=k]))`. When the tail `S = Pr[X > k]` is tiny it
/// is evaluated as `ln S + ln(-ln(1-S)/S)`, which is finite even when `S`
/// underflows a double.
pub fn poisson_cdf_log_neg_log(k: u64, lambda: f64) -> Result<f64> {
    check_lambda("poisson_cdf_log_neg_log", lambda)?;
    if (k + 1) as f64 > lambda {
        let sf = poisson_sf_log(k, lambda)?.ln();
        if sf < -30.0 {
            // -ln(1-S)/S = 1 + S/2 + S^2/3 + ...
            let s = sf.exp();
            return Ok(sf + (s / 2.0 + s * s / 3.0).ln_1p());
        }
        if sf < -LN_2 {
            return Ok((-ln_1m_exp(sf)).ln());
        }
    }
    Ok((-poisson_head_log(k, lambda)?).ln())
}

/// `(ln P(a,x), ln Q(a,x))` for the regularized incomplete gamma functions.
///
/// For `x < a + 1` the power series for `P` is summed and `Q` is its
/// complement; otherwise the Lentz continued fraction for `Q` is used and `P`
/// is the complement. The directly computed side keeps full relative accuracy
/// at any magnitude.
pub fn log_reg_gamma(a: f64, x: f64, acc: Accuracy) -> Result<(f64, f64)> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::Domain { what: "reg_gamma", value: a });
    }
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain { what: "reg_gamma", value: x });
    }
    if x < a + 1.0 {
        let ln_p = log_gamma_p_series(a, x, acc)?;
        Ok((ln_p, ln_1m_exp(ln_p)))
    } else {
        let ln_q = log_gamma_q_fraction(a, x, acc)?;
        Ok((ln_1m_exp(ln_q), ln_q))
    }
}

/// `ln P(a,x) = a ln x - x - ln Γ(a+1) + ln Σ_{m>=0} x^m / ((a+1)...(a+m))`.
fn log_gamma_p_series(a: f64, x: f64, acc: Accuracy) -> Result<f64> {
    let prefactor = a * x.ln() - x - log_gamma(a + 1.0)?;
    ratio_series_log("reg_gamma (series)", prefactor, |j| x / (a + 1.0 + j as f64), acc.rel_tol(), Some(acc.max_iter()))
}

/// Modified Lentz evaluation of the continued fraction
/// `Q(a,x) = e^{-x} x^a / Γ(a) · 1/(x+1-a- 1(1-a)/(x+3-a- 2(2-a)/(x+5-a- ...)))`.
fn log_gamma_q_fraction(a: f64, x: f64, acc: Accuracy) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    let mut converged = false;
    for i in 1..=acc.max_iter() {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() <= acc.rel_tol() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::IterationCap { what: "reg_gamma (continued fraction)", iterations: acc.max_iter() });
    }
    Ok(a * x.ln() - x - log_gamma(a)? + h.ln())
}

/// Upper regularized incomplete gamma `Q(a,x) = Γ(a,x)/Γ(a)`.
pub fn reg_gamma_q(a: f64, x: f64, acc: Accuracy) -> Result<f64> {
    Ok(log_reg_gamma(a, x, acc)?.1.exp())
}

/// Lower regularized incomplete gamma `P(a,x) = 1 - Q(a,x)`.
pub fn reg_gamma_p(a: f64, x: f64, acc: Accuracy) -> Result<f64> {
    Ok(log_reg_gamma(a, x, acc)?.0.exp())
}

/// `ln g_λ(x)` where `g_λ(x) = 1 - Γ(x+1,λ)/Γ(x+1)`, from the series
/// `g_λ(x) = e^{-λ} λ^x Σ_{i>=1} λ^i / Γ(x+i+1)`.
///
/// At integer `x = k` this is `ln Pr[X > k]`. Equivalently `ln P(x+1, λ)`,
/// so the series is valid for every `x > -1`; at `x = 0` it gives
/// `ln(1 - e^{-λ})`.
pub fn log_g(x: f64, lambda: f64, acc: Accuracy) -> Result<f64> {
    Ok(log_g_with_slope(x, lambda, acc)?.0)
}

/// `ln g_λ(x)` together with its derivative in `x`.
///
/// Differentiating the series term by term gives
/// `d/dx ln g = ln λ - Σ t_i ψ(x+i+1) / Σ t_i` with `t_i = λ^i / Γ(x+i+1)`;
/// the digamma values follow from `ψ(z+1) = ψ(z) + 1/z`.
pub fn log_g_with_slope(x: f64, lambda: f64, acc: Accuracy) -> Result<(f64, f64)> {
    if !(x.is_finite() && x > -1.0) {
        return Err(Error::Domain { what: "log_g", value: x });
    }
    check_lambda("log_g", lambda)?;
    let ln_lambda = lambda.ln();
    // t_1 = λ / Γ(x+2); t_{i+1}/t_i = λ / (x+i+1)
    let ln_first = ln_lambda - log_gamma(x + 2.0)?;
    let mut psi = digamma(x + 2.0)?;
    let mut ln_scale = ln_first;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut weighted = psi;
    let mut i = 1usize;
    loop {
        let z = x + i as f64 + 1.0;
        let r = lambda / z;
        if r < 1.0 && term * r / (1.0 - r) <= acc.rel_tol() * sum {
            break;
        }
        term *= r;
        psi += 1.0 / z;
        sum += term;
        weighted += term * psi;
        if sum > 1e280 {
            ln_scale += sum.ln();
            term /= sum;
            weighted /= sum;
            sum = 1.0;
        }
        i += 1;
        if i > acc.max_iter() {
            return Err(Error::IterationCap { what: "log_g", iterations: acc.max_iter() });
        }
    }
    let value = -lambda + x * ln_lambda + ln_scale + sum.ln();
    let slope = ln_lambda - weighted / sum;
    Ok((value.min(0.0), slope))
}

const INV_E: f64 = 1.0 / E;

/// Principal branch `W₀(z)` of the Lambert W function, `w e^w = z`, `w >= -1`.
///
/// Halley iteration from a branch-specific starting guess, capped at 100
/// steps.
pub fn lambert_w0(z: f64) -> Result<f64> {
    if z.is_nan() || z < -INV_E - 1e-15 || z.is_infinite() {
        return Err(Error::Domain { what: "lambert_w0", value: z });
    }
    if z <= -INV_E {
        return Ok(-1.0);
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let mut w = if z > E {
        let l = z.ln();
        l - l.ln()
    } else if z.abs() <= 0.25 {
        z
    } else if z < 0.0 {
        // series about the branch point
        let p = (2.0 * (E * z + 1.0)).sqrt();
        -1.0 + p - p * p / 3.0
    } else {
        z.ln_1p() * 0.75
    };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - z;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs().max(f64::MIN_POSITIVE) || f == 0.0 {
            return Ok(w);
        }
    }
    Err(Error::IterationCap { what: "lambert_w0", iterations: 100 })
}

/// `ln(2π) / 2`.
pub fn half_ln_two_pi() -> f64 {
    0.5 * (2.0 * PI).ln()
}
