//! Exact distribution of `M_n = max(X_1, ..., X_n)` for i.i.d. Poisson(λ).
//!
//! `Pr[M_n <= k] = Pr[X <= k]^n` is carried as `n ln Pr[X <= k]`, formed as
//! `-exp(ln n + ln(-ln Pr[X <= k]))` so that `n = 1e40` against
//! `ln Pr[X <= k] = -1e-50` neither overflows nor rounds to zero.

use crate::asymptotics;
use crate::error::{Error, Result};
use crate::instance::{LogProb, ProblemInstance};
use crate::specfun::{self, ln_1m_exp, log_add_exp};

/// Half-width of the default scan window around `x0`.
pub const SCAN_PAD: u64 = 40;
/// Required probability mass inside an accepted window.
pub const MASS_TOLERANCE: f64 = 1e-9;
/// Log-space band within which two probabilities count as tied.
pub const TIE_BAND: f64 = 1e-12;
/// Number of widen-and-retry rounds `mode` attempts before giving up.
const MAX_WIDENINGS: u32 = 6;

/// Inclusive range of `k` values examined for the mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanWindow {
    pub lo: u64,
    pub hi: u64,
}

impl ScanWindow {
    /// `[max(0, ⌊x0⌋ - pad), ⌈x0⌉ + pad]`, or `[0, ⌈10λ⌉ + 60]` for
    /// `ln n < 1` where `x0` is not informative.
    pub fn around_x0(inst: &ProblemInstance, pad: u64) -> Self {
        if inst.ln_n() < 1.0 {
            return Self { lo: 0, hi: (10.0 * inst.lambda()).ceil() as u64 + 60 };
        }
        match asymptotics::x0(inst) {
            Ok(x0) => {
                let lo = (x0.floor() as u64).saturating_sub(pad);
                let hi = x0.ceil() as u64 + pad;
                Self { lo, hi }
            }
            Err(_) => Self { lo: 0, hi: (10.0 * inst.lambda()).ceil() as u64 + 60 + pad },
        }
    }

    fn widened(self, pad: u64) -> Self {
        Self { lo: self.lo.saturating_sub(pad), hi: self.hi + pad }
    }
}

/// Result of a mode scan.
///
/// `i_n` is the modal value in Anderson's sense: the leading integer of the
/// adjacent pair `{I, I+1}` carrying the most probability, so that
/// `p_two_point` is the focussing probability `P_n`. The single most
/// probable value is reported separately as `pmf_argmax`; the two never
/// differ by more than one.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeReport {
    pub i_n: u64,
    /// `Pr[M_n = I_n]`.
    pub p_mode: f64,
    /// `P_n = Pr[M_n ∈ {I_n, I_n + 1}]`.
    pub p_two_point: f64,
    /// Argmax of the pmf, ties to the smaller `k`.
    pub pmf_argmax: u64,
    /// `Pr[M_n = pmf_argmax]`.
    pub p_max: f64,
    pub scan_lo: u64,
    pub scan_hi: u64,
    /// `(k, ln Pr[M_n = k])` for every `k` in the window.
    pub pmf_slice: Vec<(u64, LogProb)>,
}

impl ModeReport {
    /// Total probability inside the scanned window.
    pub fn window_mass(&self) -> f64 {
        self.pmf_slice.iter().map(|(_, p)| p.prob()).sum()
    }
}

/// `ln Pr[M_n <= k] = n ln Pr[X <= k]`.
pub fn max_cdf_log(inst: &ProblemInstance, k: u64) -> Result<LogProb> {
    if inst.ln_n() == 0.0 {
        return specfun::poisson_cdf_log(k, inst.lambda());
    }
    let ln_neg = specfun::poisson_cdf_log_neg_log(k, inst.lambda())?;
    Ok(LogProb::clamped(-(inst.ln_n() + ln_neg).exp()))
}

/// `ln(e^a - e^b)` for cdf logs `a = ln F(k)`, `b = ln F(k-1)`.
fn pmf_from_cdfs(a: f64, b: f64) -> LogProb {
    if b >= a {
        return LogProb::ZERO;
    }
    LogProb::clamped(a + ln_1m_exp(b - a))
}

/// `ln Pr[M_n = k] = ln(Q(k+1,λ)^n - Q(k,λ)^n)`.
pub fn max_pmf_log(inst: &ProblemInstance, k: u64) -> Result<LogProb> {
    if inst.ln_n() == 0.0 {
        return specfun::log_poisson_pmf(k, inst.lambda());
    }
    let a = max_cdf_log(inst, k)?.ln();
    if k == 0 {
        return Ok(LogProb::clamped(a));
    }
    let b = max_cdf_log(inst, k - 1)?.ln();
    Ok(pmf_from_cdfs(a, b))
}

/// `ln Pr[M_n = k]` for `k = lo..=hi`, sharing cdf evaluations between
/// neighbouring entries.
pub fn pmf_row(inst: &ProblemInstance, lo: u64, hi: u64) -> Result<Vec<(u64, LogProb)>> {
    if inst.ln_n() == 0.0 {
        return (lo..=hi).map(|k| Ok((k, specfun::log_poisson_pmf(k, inst.lambda())?))).collect();
    }
    let mut prev = if lo == 0 { f64::NEG_INFINITY } else { max_cdf_log(inst, lo - 1)?.ln() };
    let mut row = Vec::with_capacity((hi - lo + 1) as usize);
    for k in lo..=hi {
        let cur = max_cdf_log(inst, k)?.ln();
        let p = if k == 0 { LogProb::clamped(cur) } else { pmf_from_cdfs(cur, prev) };
        row.push((k, p));
        prev = cur;
    }
    Ok(row)
}

/// Scan a fixed window; fails with [`Error::WindowInsufficient`] if it holds
/// less than `1 - 1e-9` of the mass.
pub fn mode_in(inst: &ProblemInstance, window: ScanWindow) -> Result<ModeReport> {
    let slice = pmf_row(inst, window.lo, window.hi)?;
    let mass: f64 = slice.iter().map(|(_, p)| p.prob()).sum();
    if mass < 1.0 - MASS_TOLERANCE {
        return Err(Error::WindowInsufficient { lo: window.lo, hi: window.hi, mass });
    }
    let (mut argmax, mut best) = slice[0];
    for &(k, p) in &slice[1..] {
        if p.ln() > best.ln() + TIE_BAND {
            argmax = k;
            best = p;
        }
    }
    // Pairs straddling the upper edge use one value outside the window.
    let above = max_pmf_log(inst, window.hi + 1)?;
    let mut i_n = slice[0].0;
    let mut pair = f64::NEG_INFINITY;
    for (j, &(k, p)) in slice.iter().enumerate() {
        let next = slice.get(j + 1).map_or(above, |&(_, q)| q);
        let v = log_add_exp(p.ln(), next.ln());
        if v > pair + TIE_BAND {
            pair = v;
            i_n = k;
        }
    }
    let idx = (i_n - window.lo) as usize;
    Ok(ModeReport {
        i_n,
        p_mode: slice[idx].1.prob(),
        p_two_point: pair.exp(),
        pmf_argmax: argmax,
        p_max: best.prob(),
        scan_lo: window.lo,
        scan_hi: window.hi,
        pmf_slice: slice,
    })
}

/// Mode of `M_n` with the default window around `x0`, widened and retried
/// while the mass check fails.
pub fn mode(inst: &ProblemInstance) -> Result<ModeReport> {
    let mut window = ScanWindow::around_x0(inst, SCAN_PAD);
    let mut pad = SCAN_PAD;
    let mut last = None;
    for _ in 0..=MAX_WIDENINGS {
        match mode_in(inst, window) {
            Ok(report) => return Ok(report),
            Err(e @ Error::WindowInsufficient { .. }) => {
                last = Some(e);
                window = window.widened(pad);
                pad *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// The `I` maximizing `Pr[M_n ∈ {I, I+1}]`, ties to the smaller `I`,
/// together with that probability: the quantity whose oscillation in `n`
/// shows the focussing effect.
pub fn two_point_best(inst: &ProblemInstance) -> Result<(u64, f64)> {
    let report = mode(inst)?;
    Ok((report.i_n, report.p_two_point))
}
