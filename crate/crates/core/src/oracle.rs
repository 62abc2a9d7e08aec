//! Slow extended-precision reference values.
//!
//! Everything here runs at 768 bits (about 231 decimal digits) on
//! [`astro_float`], and deliberately shares no code with [`crate::specfun`]:
//! log-gamma is rebuilt from the Stirling series with exact rational Bernoulli
//! numbers, and every series is summed directly from its definition. Used by
//! the test suites and by the `oracle-goldens` generator; not meant for
//! production paths.
//!
//! Inputs given as `f64` are converted exactly (every double is a dyadic
//! rational), so `λ = 1/2` and friends are represented without error.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::sync::OnceLock;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Working precision in bits.
pub const PRECISION: usize = 768;
const RM: RoundingMode = RoundingMode::ToEven;
/// Series are truncated once a term drops below `2^-TRUNCATION_BITS` of the
/// partial sum (about 1e-210).
const TRUNCATION_BITS: i64 = 700;
/// Stirling's series is applied only at arguments at least this large.
const STIRLING_SHIFT: u64 = 250;
/// Number of Bernoulli terms available to the Stirling series.
const STIRLING_TERMS: usize = 110;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// An extended-precision real.
#[derive(Debug, Clone)]
pub struct BigReal(BigFloat);

impl BigReal {
    pub fn from_f64(v: f64) -> Self {
        BigReal(BigFloat::from_f64(v, PRECISION))
    }

    pub fn from_u64(v: u64) -> Self {
        BigReal(BigFloat::from_u64(v, PRECISION))
    }

    pub fn zero() -> Self {
        Self::from_u64(0)
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    /// Parse a decimal literal, e.g. `"0.1"` or `"123456789e-40"`.
    pub fn parse(s: &str) -> Self {
        BigReal(with_cc(|cc| BigFloat::parse(s, Radix::Dec, PRECISION, RM, cc)))
    }

    fn from_bigint(v: &BigInt) -> Self {
        Self::parse(&v.to_string())
    }

    fn from_rational(v: &BigRational) -> Self {
        Self::from_bigint(v.numer()).div(&Self::from_bigint(v.denom()))
    }

    pub fn pi() -> Self {
        BigReal(with_cc(|cc| cc.pi(PRECISION, RM)))
    }

    pub fn add(&self, o: &Self) -> Self {
        BigReal(self.0.add(&o.0, PRECISION, RM))
    }

    pub fn sub(&self, o: &Self) -> Self {
        BigReal(self.0.sub(&o.0, PRECISION, RM))
    }

    pub fn mul(&self, o: &Self) -> Self {
        BigReal(self.0.mul(&o.0, PRECISION, RM))
    }

    pub fn div(&self, o: &Self) -> Self {
        BigReal(self.0.div(&o.0, PRECISION, RM))
    }

    pub fn neg(&self) -> Self {
        BigReal(self.0.neg())
    }

    pub fn abs(&self) -> Self {
        BigReal(self.0.abs())
    }

    pub fn ln(&self) -> Self {
        BigReal(with_cc(|cc| self.0.ln(PRECISION, RM, cc)))
    }

    pub fn exp(&self) -> Self {
        BigReal(with_cc(|cc| self.0.exp(PRECISION, RM, cc)))
    }

    /// Integer power by binary exponentiation.
    pub fn powi(&self, n: u64) -> Self {
        BigReal(self.0.powi(n as usize, PRECISION, RM))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Binary exponent `e` with `2^(e-1) <= |self| < 2^e`; `None` for zero.
    fn exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            self.0.exponent().map(i64::from)
        }
    }

    /// `true` when `|self| < 2^-bits · |reference|`.
    fn negligible_against(&self, reference: &Self, bits: i64) -> bool {
        match (self.exponent(), reference.exponent()) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a < b - bits,
        }
    }

    /// Nearest double (via a decimal rendering with >200 digits).
    pub fn to_f64(&self) -> f64 {
        let s = with_cc(|cc| self.0.format(Radix::Dec, RM, cc)).expect("format big float");
        match s.as_str() {
            "Inf" => f64::INFINITY,
            "-Inf" => f64::NEG_INFINITY,
            _ => s.parse().expect("decimal rendering parses"),
        }
    }

    /// Decimal rendering at full working precision.
    pub fn to_decimal_string(&self) -> String {
        with_cc(|cc| self.0.format(Radix::Dec, RM, cc)).expect("format big float")
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

/// Exact Bernoulli numbers `B_0 ..= B_{2 STIRLING_TERMS}` from
/// `Σ_{j=0}^{m} C(m+1, j) B_j = 0`.
fn bernoulli() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let top = 2 * STIRLING_TERMS;
        let mut b: Vec<BigRational> = Vec::with_capacity(top + 1);
        b.push(BigRational::one());
        // binomial row C(m+1, j), updated in place
        let mut row: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
        for m in 1..=top {
            let mut next = vec![BigInt::one(); m + 2];
            for j in 1..=m {
                next[j] = &row[j - 1] + &row[j];
            }
            row = next;
            if m > 1 && m % 2 == 1 {
                b.push(BigRational::zero());
                continue;
            }
            let mut acc = BigRational::zero();
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    acc += bj * BigRational::from_integer(row[j].clone());
                }
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b
    })
}

/// Stirling coefficients `B_{2m} / (2m (2m-1))` as big reals.
fn stirling_coefficients() -> &'static [BigReal] {
    static TABLE: OnceLock<Vec<BigReal>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let b = bernoulli();
        (1..=STIRLING_TERMS)
            .map(|m| {
                let denom = BigRational::from_integer(BigInt::from(2 * m * (2 * m - 1)));
                BigReal::from_rational(&(&b[2 * m] / denom))
            })
            .collect()
    })
}

/// `ln Γ(x)` for `x > 0`: shift up to `x >= 250`, then Stirling's series.
pub fn oracle_log_gamma(x: &BigReal) -> BigReal {
    assert!(*x > BigReal::zero(), "oracle_log_gamma needs x > 0");
    let floor = BigReal::from_u64(STIRLING_SHIFT);
    let mut z = x.clone();
    let mut product = BigReal::one();
    let one = BigReal::one();
    while z < floor {
        product = product.mul(&z);
        z = z.add(&one);
    }
    let half = BigReal::parse("0.5");
    let two_pi = BigReal::pi().mul(&BigReal::from_u64(2));
    let mut value = z.sub(&half).mul(&z.ln()).sub(&z).add(&two_pi.ln().mul(&half));
    let inv = one.div(&z);
    let inv2 = inv.mul(&inv);
    let mut power = inv.clone();
    for c in stirling_coefficients() {
        let term = c.mul(&power);
        value = value.add(&term);
        if term.negligible_against(&value, TRUNCATION_BITS + 64) {
            break;
        }
        power = power.mul(&inv2);
    }
    value.sub(&product.ln())
}

/// `Pr[X <= k] = e^{-λ} Σ_{i=0}^{k} λ^i / i!`.
pub fn oracle_poisson_cdf(k: u64, lambda: f64) -> BigReal {
    let lam = BigReal::from_f64(lambda);
    let mut term = BigReal::one();
    let mut sum = BigReal::one();
    for i in 1..=k {
        term = term.mul(&lam).div(&BigReal::from_u64(i));
        sum = sum.add(&term);
    }
    sum.mul(&lam.neg().exp())
}

/// `Pr[X > k] = e^{-λ} Σ_{i>k} λ^i / i!`, summed from the tail.
pub fn oracle_poisson_sf(k: u64, lambda: f64) -> BigReal {
    let lam = BigReal::from_f64(lambda);
    // first tail term λ^{k+1}/(k+1)!, built by the same recursion
    let mut term = BigReal::one();
    for i in 1..=k + 1 {
        term = term.mul(&lam).div(&BigReal::from_u64(i));
    }
    let mut sum = term.clone();
    let mut i = k + 1;
    loop {
        i += 1;
        term = term.mul(&lam).div(&BigReal::from_u64(i));
        sum = sum.add(&term);
        if (i as f64) > 2.0 * lambda && term.negligible_against(&sum, TRUNCATION_BITS) {
            break;
        }
    }
    sum.mul(&lam.neg().exp())
}

/// `Pr[M_n = k] = Pr[X<=k]^n - Pr[X<=k-1]^n` for integer `1 <= n <= 1e12`.
pub fn oracle_max_pmf(k: u64, lambda: f64, n: u64) -> BigReal {
    let upper = oracle_poisson_cdf(k, lambda).powi(n);
    if k == 0 {
        return upper;
    }
    upper.sub(&oracle_poisson_cdf(k - 1, lambda).powi(n))
}

/// `Pr[M_n = k]` for `k = 0..=k_max`, sharing the cdf partial sums.
pub fn oracle_max_pmf_row(lambda: f64, n: u64, k_max: u64) -> Vec<BigReal> {
    let lam = BigReal::from_f64(lambda);
    let e = lam.neg().exp();
    let mut term = BigReal::one();
    let mut partial = BigReal::one();
    let mut prev_pow = BigReal::zero();
    let mut row = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        if k > 0 {
            term = term.mul(&lam).div(&BigReal::from_u64(k));
            partial = partial.add(&term);
        }
        let pow = partial.mul(&e).powi(n);
        row.push(pow.sub(&prev_pow));
        prev_pow = pow;
    }
    row
}

/// `ln Pr[M_n = k]` for `k = 0..=k_max`. Works in logs throughout, so rows
/// whose probability is below the big-float exponent range stay finite.
pub fn oracle_log_max_pmf_row(lambda: f64, n: u64, k_max: u64) -> Vec<BigReal> {
    let lam = BigReal::from_f64(lambda);
    let nb = BigReal::from_u64(n);
    let one = BigReal::one();
    let mut term = BigReal::one();
    let mut partial = BigReal::one();
    let mut prev_ln_cdf: Option<BigReal> = None;
    let mut row = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        if k > 0 {
            term = term.mul(&lam).div(&BigReal::from_u64(k));
            partial = partial.add(&term);
        }
        let ln_cdf = partial.ln().sub(&lam);
        let head = nb.mul(&ln_cdf);
        let value = match &prev_ln_cdf {
            None => head,
            // n ln F_k + ln(1 - (F_{k-1}/F_k)^n)
            Some(prev) => head.add(&one.sub(&nb.mul(&prev.sub(&ln_cdf)).exp()).ln()),
        };
        row.push(value);
        prev_ln_cdf = Some(ln_cdf);
    }
    row
}

/// Modal value, two-point probability and single-value mode from a full
/// extended-precision pmf row.
#[derive(Debug, Clone)]
pub struct OracleMode {
    /// Leading integer of the most probable adjacent pair.
    pub i_n: u64,
    pub p_two_point: BigReal,
    pub pmf_argmax: u64,
    pub total: BigReal,
}

/// Brute force over `k = 0..=k_max`; strict `>` keeps the smaller index on
/// exact ties.
pub fn oracle_mode(lambda: f64, n: u64, k_max: u64) -> OracleMode {
    let row = oracle_max_pmf_row(lambda, n, k_max);
    let mut pmf_argmax = 0;
    for (k, p) in row.iter().enumerate() {
        if *p > row[pmf_argmax] {
            pmf_argmax = k;
        }
    }
    let mut i_n = 0;
    let mut best = row[0].add(&row[1]);
    for k in 1..row.len() - 1 {
        let pair = row[k].add(&row[k + 1]);
        if pair > best {
            best = pair;
            i_n = k;
        }
    }
    let total = row.iter().fold(BigReal::zero(), |acc, p| acc.add(p));
    OracleMode { i_n: i_n as u64, p_two_point: best, pmf_argmax: pmf_argmax as u64, total }
}

/// `ln Σ_{i>=1} e^{-λ} λ^{x+i} / Γ(x+i+1)` for `x > -1`.
fn log_g_series(x: &BigReal, lam: &BigReal) -> BigReal {
    let one = BigReal::one();
    let two = BigReal::from_u64(2);
    // t_1 = λ^{x+1} e^{-λ} / Γ(x+2); t_{i+1} / t_i = λ / (x+i+1)
    let x1 = x.add(&one);
    let ln_first = x1.mul(&lam.ln()).sub(lam).sub(&oracle_log_gamma(&x.add(&two)));
    let mut term = BigReal::one();
    let mut sum = BigReal::one();
    let mut denom = x.add(&two);
    let lam_f = lam.to_f64();
    loop {
        term = term.mul(lam).div(&denom);
        sum = sum.add(&term);
        let past_peak = denom.to_f64() > 2.0 * lam_f;
        denom = denom.add(&one);
        if past_peak && term.negligible_against(&sum, TRUNCATION_BITS) {
            break;
        }
    }
    ln_first.add(&sum.ln())
}

/// `ln g_λ(x)` with `g_λ(x) = e^{-λ} λ^x Σ_{i>=1} λ^i / Γ(x+i+1)`, for
/// `x > -1` (at `x = 0` this is `ln(1 - e^{-λ})`).
pub fn oracle_log_g(x: &BigReal, lambda: f64) -> BigReal {
    assert!(*x > BigReal::one().neg(), "oracle_log_g needs x > -1");
    log_g_series(x, &BigReal::from_f64(lambda))
}

/// `ln P(a, x)`, the lower regularized incomplete gamma, through the same
/// series shifted by one (`P(a, λ) = g_λ(a - 1)`).
pub fn oracle_log_reg_gamma_p(a: &BigReal, x: f64) -> BigReal {
    assert!(*a > BigReal::zero(), "oracle_log_reg_gamma_p needs a > 0");
    log_g_series(&a.sub(&BigReal::one()), &BigReal::from_f64(x))
}
