//! Asymptotic estimates against oracle roots and the exact mode.

use std::f64::consts::LN_10;

use poisson_maxima::asymptotics::{anderson_beta, continuous_root, log_g_expansion, newton_refine, x0, x1};
use poisson_maxima::maxdist::mode;
use poisson_maxima::oracle::{oracle_log_g, oracle_log_reg_gamma_p, BigReal};
use poisson_maxima::specfun::{log_g, Accuracy};
use poisson_maxima::ProblemInstance;

const LAMBDAS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

fn inst(lambda: f64, log10_n: f64) -> ProblemInstance {
    ProblemInstance::from_log10_n(lambda, log10_n).unwrap()
}

/// Root of a decreasing function by plain bisection.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    assert!(f(lo) > 0.0 && f(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn continuous_root_lambda_1_n_1e20() {
    let ln_n = 20.0 * LN_10;
    let reference = bisect(1.0, 60.0, |x| oracle_log_g(&BigReal::from_f64(x), 1.0).to_f64() + ln_n);
    let r = continuous_root(&inst(1.0, 20.0), Accuracy::default()).unwrap();
    assert!((r - reference).abs() < 1e-9, "{r} vs {reference}");
}

#[test]
fn beta_lambda_1_n_1e10() {
    let ln_n = 10.0 * LN_10;
    let reference = bisect(1.0, 60.0, |b| oracle_log_reg_gamma_p(&BigReal::from_f64(b), 1.0).to_f64() + ln_n);
    let b = anderson_beta(&inst(1.0, 10.0), Accuracy::default()).unwrap();
    assert!((b - reference).abs() < 1e-9, "{b} vs {reference}");
}

#[test]
fn newton_lambda_2_n_1e10() {
    let i = inst(2.0, 10.0);
    let ln_n = i.ln_n();
    let root = bisect(2.0, 100.0, |x| log_g_expansion(x, 2.0) + ln_n);
    let it = newton_refine(&i, x0(&i).unwrap(), 3).unwrap();
    assert_eq!(it.len(), 3);
    assert!((it[2] - root).abs() < 1e-9, "{} vs {root}", it[2]);
}

#[test]
fn newton_converges_where_expansion_applies() {
    for lambda in LAMBDAS {
        for d in 1..=40 {
            let i = inst(lambda, d as f64);
            let start = x0(&i).unwrap();
            if start <= 3f64.max(2.0 * lambda) {
                continue;
            }
            let ln_n = i.ln_n();
            let root = bisect(1.5, 10.0 * start, |x| log_g_expansion(x, lambda) + ln_n);
            let it = newton_refine(&i, start, 5).unwrap();
            assert!((it[4] - root).abs() < 1e-8, "λ={lambda} d={d}");
        }
    }
}

#[test]
fn expansion_remainder_is_second_order() {
    let acc = Accuracy::default();
    let xs = [20.0, 40.0, 80.0];
    let err: Vec<f64> = xs.iter().map(|&x| (log_g(x, 2.0, acc).unwrap() - log_g_expansion(x, 2.0)).abs()).collect();
    for w in err.windows(2) {
        let ratio = w[0] / w[1];
        assert!((2.0..8.0).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn refinement_dominance_on_decade_grid() {
    let acc = Accuracy::default();
    for lambda in LAMBDAS {
        for d in 2..=40 {
            let i = inst(lambda, d as f64);
            let r = continuous_root(&i, acc).unwrap();
            let (a, b) = (x0(&i).unwrap(), x1(&i).unwrap());
            assert!((b - r).abs() <= (a - r).abs(), "λ={lambda} d={d}");
        }
    }
}

#[test]
fn x1_beats_x0_at_lambda_5_n_1e20() {
    let i = inst(5.0, 20.0);
    let r = continuous_root(&i, Accuracy::default()).unwrap();
    assert!((x1(&i).unwrap() - r).abs() < (x0(&i).unwrap() - r).abs());
}

#[test]
fn beta_tracks_continuous_root() {
    let acc = Accuracy::default();
    for lambda in LAMBDAS {
        for d in 1..=40 {
            let i = inst(lambda, d as f64);
            let b = anderson_beta(&i, acc).unwrap();
            let r = continuous_root(&i, acc).unwrap();
            assert!((b - r).abs() <= 2.0, "λ={lambda} d={d}");
        }
    }
}

#[test]
fn estimates_positive_where_expansion_applies() {
    for lambda in LAMBDAS {
        for q in 1..=160 {
            let i = inst(lambda, q as f64 * 0.25);
            let a = x0(&i).unwrap();
            if a <= 3f64.max(2.0 * lambda) {
                continue;
            }
            assert!(x1(&i).unwrap() > 0.0);
        }
    }
}

#[test]
fn x1_within_one_of_mode_at_largest_n() {
    for lambda in LAMBDAS {
        let i = inst(lambda, 40.0);
        let m = mode(&i).unwrap();
        let b = x1(&i).unwrap();
        assert!((b - m.i_n as f64).abs() < 1.0, "λ={lambda}");
        assert!((x0(&i).unwrap() - m.i_n as f64).abs() > (b - m.i_n as f64).abs());
    }
}
