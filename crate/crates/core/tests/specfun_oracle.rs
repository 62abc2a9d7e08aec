//! Special functions against the extended-precision oracle.

use poisson_maxima::oracle::{
    oracle_log_g, oracle_log_gamma, oracle_log_reg_gamma_p, oracle_poisson_cdf, oracle_poisson_sf, BigReal,
};
use poisson_maxima::specfun::{
    log_g, log_gamma, log_poisson_pmf, log_reg_gamma, poisson_cdf_log, poisson_sf_log, reg_gamma_q, Accuracy,
};

const LAMBDAS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

#[test]
fn log_gamma_matches_factorial_sum() {
    // ln(100!) summed term by term in extended precision
    let mut sum = BigReal::zero();
    for k in 2..=100u64 {
        sum = sum.add(&BigReal::from_u64(k).ln());
    }
    let exact = sum.to_f64();
    assert!((exact - 363.739_375_555_563_5).abs() < 1e-9);
    assert!(rel(log_gamma(101.0).unwrap(), exact) < 1e-15);
    for x in [0.5, 1.5, 3.25, 9.9, 10.1, 27.5, 170.2, 1e4, 1e8] {
        let o = oracle_log_gamma(&BigReal::from_f64(x)).to_f64();
        let v = log_gamma(x).unwrap();
        assert!((v - o).abs() <= 1e-14 * o.abs().max(1.0), "x={x}: {v} vs {o}");
    }
}

#[test]
fn cdf_20_5() {
    let o = oracle_poisson_cdf(20, 5.0).ln().to_f64();
    let v = poisson_cdf_log(20, 5.0).unwrap().ln();
    assert!((v - o).abs() < 1e-15, "{v} vs {o}");
}

#[test]
fn sf_150_1() {
    let o = oracle_poisson_sf(150, 1.0).ln().to_f64();
    assert!(o < -100.0 && o > -1000.0);
    let v = poisson_sf_log(150, 1.0).unwrap().ln();
    assert!(rel(v, o) < 1e-13, "{v} vs {o}");
}

#[test]
fn cdf_and_sf_across_grid() {
    for lambda in LAMBDAS {
        for k in 0..=200u64 {
            let oc = oracle_poisson_cdf(k, lambda).to_f64();
            let c = poisson_cdf_log(k, lambda).unwrap().prob();
            assert!(rel(c, oc) < 1e-12, "cdf k={k} λ={lambda}");
            let os = oracle_poisson_sf(k, lambda).ln().to_f64();
            let s = poisson_sf_log(k, lambda).unwrap().ln();
            assert!((s - os).abs() <= 1e-12 * os.abs().max(1.0), "sf k={k} λ={lambda}: {s} vs {os}");
        }
    }
}

#[test]
fn pmf_against_oracle() {
    for lambda in LAMBDAS {
        for k in [0u64, 1, 3, 7, 30, 120] {
            let lam = BigReal::from_f64(lambda);
            let o = BigReal::from_u64(k)
                .mul(&lam.ln())
                .sub(&lam)
                .sub(&oracle_log_gamma(&BigReal::from_u64(k + 1)))
                .to_f64();
            let v = log_poisson_pmf(k, lambda).unwrap().ln();
            assert!((v - o).abs() <= 1e-14 * o.abs().max(1.0), "k={k} λ={lambda}");
        }
    }
}

#[test]
fn reg_gamma_q_2_5_1_3() {
    let ln_p = oracle_log_reg_gamma_p(&BigReal::from_f64(2.5), 1.3);
    let q = BigReal::one().sub(&ln_p.exp()).to_f64();
    let v = reg_gamma_q(2.5, 1.3, Accuracy::default()).unwrap();
    assert!(rel(v, q) < 1e-12, "{v} vs {q}");
}

#[test]
fn log_reg_gamma_on_both_sides_of_crossover() {
    let acc = Accuracy::default();
    for a in [0.5, 1.0, 3.7, 12.0, 40.5] {
        for x in [0.1, 1.0, 4.0, 13.0, 41.5, 90.0] {
            let o = oracle_log_reg_gamma_p(&BigReal::from_f64(a), x);
            let (lp, lq) = log_reg_gamma(a, x, acc).unwrap();
            let op = o.to_f64();
            assert!((lp - op).abs() <= 1e-12 * op.abs().max(1.0), "P a={a} x={x}: {lp} vs {op}");
            let oq = BigReal::one().sub(&o.exp());
            if !oq.is_zero() {
                let oq = oq.ln().to_f64();
                if oq > -600.0 {
                    assert!((lq - oq).abs() <= 1e-11 * oq.abs().max(1.0), "Q a={a} x={x}: {lq} vs {oq}");
                }
            }
        }
    }
}

#[test]
fn log_g_50_2() {
    let o = oracle_log_g(&BigReal::from_f64(50.0), 2.0).to_f64();
    let v = log_g(50.0, 2.0, Accuracy::default()).unwrap();
    assert!(rel(v, o) < 1e-13, "{v} vs {o}");
}

#[test]
fn log_g_fractional_arguments() {
    let acc = Accuracy::default();
    for lambda in LAMBDAS {
        for x in [1e-8, 0.3, 2.75, 11.5, 63.2, 240.9] {
            let o = oracle_log_g(&BigReal::from_f64(x), lambda).to_f64();
            let v = log_g(x, lambda, acc).unwrap();
            assert!((v - o).abs() <= 1e-12 * o.abs().max(1.0), "x={x} λ={lambda}: {v} vs {o}");
        }
    }
}

#[test]
fn oracle_log_g_interpolates_tail() {
    for lambda in LAMBDAS {
        for k in [0u64, 4, 17] {
            let a = oracle_log_g(&BigReal::from_u64(k), lambda).to_f64();
            let b = oracle_poisson_sf(k, lambda).ln().to_f64();
            assert!((a - b).abs() <= 1e-14 * b.abs().max(1.0));
        }
    }
}
