//! Distribution of the maximum against the extended-precision oracle.

use poisson_maxima::maxdist::{max_cdf_log, max_pmf_log, mode, two_point_best};
use poisson_maxima::oracle::{oracle_log_max_pmf_row, oracle_max_pmf, oracle_mode, oracle_poisson_cdf, BigReal};
use poisson_maxima::ProblemInstance;

const LAMBDAS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn max_cdf_lambda_1_n_1e6_k_10() {
    let o = BigReal::from_u64(1_000_000).mul(&oracle_poisson_cdf(10, 1.0).ln()).to_f64();
    let inst = ProblemInstance::from_count(1.0, 1_000_000).unwrap();
    let v = max_cdf_log(&inst, 10).unwrap().ln();
    assert!(rel(v, o) < 1e-10, "{v} vs {o}");
}

#[test]
fn pmf_row_lambda_5_n_1e8() {
    let n = 100_000_000;
    let inst = ProblemInstance::from_count(5.0, n).unwrap();
    let row = oracle_log_max_pmf_row(5.0, n, 60);
    for (k, o) in row.iter().enumerate() {
        let o = o.to_f64();
        let v = max_pmf_log(&inst, k as u64).unwrap().ln();
        assert!((v - o).abs() <= 1e-10 * o.abs().max(1.0), "k={k}: {v} vs {o}");
    }
}

#[test]
fn log_row_agrees_with_difference_of_powers() {
    let row = oracle_log_max_pmf_row(2.0, 1000, 25);
    for (k, ln_p) in row.iter().enumerate() {
        let direct = oracle_max_pmf(k as u64, 2.0, 1000);
        if direct.is_zero() {
            continue;
        }
        let a = ln_p.to_f64();
        let b = direct.ln().to_f64();
        assert!((a - b).abs() <= 1e-13 * b.abs().max(1.0), "k={k}");
    }
}

#[test]
fn mode_lambda_1_n_1e4() {
    let o = oracle_mode(1.0, 10_000, 200);
    let r = mode(&ProblemInstance::from_count(1.0, 10_000).unwrap()).unwrap();
    assert_eq!(r.i_n, o.i_n);
    assert_eq!(r.pmf_argmax, o.pmf_argmax);
    assert!(rel(r.p_two_point, o.p_two_point.to_f64()) < 1e-10);
}

#[test]
fn two_point_lambda_5_n_1e10() {
    let o = oracle_mode(5.0, 10_000_000_000, 120);
    let (i, p) = two_point_best(&ProblemInstance::from_count(5.0, 10_000_000_000).unwrap()).unwrap();
    assert_eq!(i, o.i_n);
    assert!(rel(p, o.p_two_point.to_f64()) < 1e-10);
}

#[test]
fn oracle_equivalence_decades() {
    for lambda in LAMBDAS {
        for e in 0..=12u32 {
            let n = 10u64.pow(e);
            let inst = ProblemInstance::from_count(lambda, n).unwrap();
            let r = mode(&inst).unwrap();
            let o = oracle_mode(lambda, n, r.scan_hi + 1);
            assert_eq!(r.i_n, o.i_n, "λ={lambda} n=1e{e}");
            assert!(rel(r.p_two_point, o.p_two_point.to_f64()) < 1e-10, "λ={lambda} n=1e{e}");
            assert!(r.i_n.abs_diff(r.pmf_argmax) <= 1);
        }
    }
}

#[test]
fn oracle_rows_sum_to_one() {
    for lambda in LAMBDAS {
        let o = oracle_mode(lambda, 1_000_000, 300);
        let deficit = BigReal::one().sub(&o.total).abs();
        let tiny = BigReal::parse("1e-150");
        assert!(deficit < tiny, "λ={lambda}");
    }
}
