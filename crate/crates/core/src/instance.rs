//! Problem instances and log-domain probabilities.

use std::f64::consts::LN_10;

use crate::error::{Error, Result};

/// One maximum-of-Poissons problem: `n` independent Poisson(`lambda`)
/// variables, with `n` carried as its natural log so that `n = 10^40` is
/// representable without big integers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemInstance {
    lambda: f64,
    ln_n: f64,
}

impl ProblemInstance {
    pub fn new(lambda: f64, ln_n: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite() && ln_n >= 0.0 && ln_n.is_finite()) {
            return Err(Error::InvalidInstance { lambda, ln_n });
        }
        Ok(Self { lambda, ln_n })
    }

    pub fn from_log10_n(lambda: f64, log10_n: f64) -> Result<Self> {
        Self::new(lambda, log10_n * LN_10)
    }

    /// Integer `n >= 1`. Exact for `n <= 2^53`.
    pub fn from_count(lambda: f64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance { lambda, ln_n: f64::NEG_INFINITY });
        }
        Self::new(lambda, (n as f64).ln())
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn ln_n(&self) -> f64 {
        self.ln_n
    }

    pub fn log10_n(&self) -> f64 {
        self.ln_n / LN_10
    }
}

/// A probability stored as its natural logarithm.
///
/// Values are clamped to `<= 0`; `-inf` is probability zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogProb(f64);

impl LogProb {
    pub const ZERO: LogProb = LogProb(f64::NEG_INFINITY);
    pub const ONE: LogProb = LogProb(0.0);

    /// Rounding slack tolerated above zero before a value is rejected.
    pub const SLACK: f64 = 1e-9;

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value > Self::SLACK {
            return Err(Error::Domain { what: "LogProb", value });
        }
        Ok(LogProb(value.min(0.0)))
    }

    /// For values produced internally; rounding excursions above zero are
    /// clamped.
    pub(crate) fn clamped(value: f64) -> Self {
        debug_assert!(!value.is_nan());
        LogProb(value.min(0.0))
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn prob(self) -> f64 {
        self.0.exp()
    }
}
