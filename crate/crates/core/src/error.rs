use thiserror::Error;

/// Failures raised by the numerical routines.
///
/// Every variant carries enough context to tell which input tripped it; the
/// CLI prints these on stderr and turns the affected cell into `null`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: argument {value} is outside the domain")]
    Domain { what: &'static str, value: f64 },

    #[error("{what}: no convergence after {iterations} iterations")]
    IterationCap { what: &'static str, iterations: usize },

    #[error("invalid accuracy settings: rel_tol={rel_tol}, max_iter={max_iter}")]
    InvalidAccuracy { rel_tol: f64, max_iter: usize },

    #[error("invalid problem instance: lambda={lambda}, ln_n={ln_n}")]
    InvalidInstance { lambda: f64, ln_n: f64 },

    #[error("scan window [{lo}, {hi}] holds probability mass {mass}, below the required 1 - 1e-9")]
    WindowInsufficient { lo: u64, hi: u64, mass: f64 },

    #[error("{what}: degenerate input (ln n = {ln_n})")]
    Degenerate { what: &'static str, ln_n: f64 },

    #[error("x1: singular denominator, ln x0 = {ln_x0} is too close to ln lambda = {ln_lambda}")]
    SingularDenominator { ln_x0: f64, ln_lambda: f64 },

    #[error("newton_refine: iterate {iterate} at step {step} left the interval (1, {limit})")]
    Divergence { step: usize, iterate: f64, limit: f64 },

    #[error("{what}: no sign change found in [{lo}, {hi}]")]
    BracketFailure { what: &'static str, lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
