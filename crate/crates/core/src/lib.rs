//! Distribution of the maximum of `n` independent Poisson(λ) variables.
//!
//! The exact pmf, cdf, modal value `I_n` and two-point probability
//! `Pr[M_n ∈ {I_n, I_n+1}]` are computed in log space, which keeps them
//! usable for `n` up to `10^40`. Alongside them sit the asymptotic estimates
//! of the mode: the Lambert-W closed form `x0`, its Newton refinement `x1`,
//! the `ln n / ln ln n` growth rate and Anderson's `β_n`.
//!
//! ```
//! use poisson_maxima::{maxdist, asymptotics, ProblemInstance};
//!
//! let inst = ProblemInstance::from_log10_n(1.0, 40.0).unwrap();
//! let mode = maxdist::mode(&inst).unwrap();
//! let x1 = asymptotics::x1(&inst).unwrap();
//! assert!((x1 - mode.i_n as f64).abs() < 1.0);
//! ```

pub mod asymptotics;
pub mod error;
pub mod instance;
pub mod maxdist;
pub mod oracle;
mod roots;
pub mod specfun;
pub mod sweep;

pub use error::{Error, Result};
pub use instance::{LogProb, ProblemInstance};
pub use specfun::Accuracy;
