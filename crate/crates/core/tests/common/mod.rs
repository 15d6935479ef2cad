#![allow(dead_code)]

use betaquant::special::{beta_log_quantile_oracle, OracleConfig, QuantileQuery};

/// `-a log q(a)` from the oracle at default tolerances.
pub fn phi_oracle(a: f64, b: f64, p: f64) -> f64 {
    let cfg = OracleConfig::default();
    -a * beta_log_quantile_oracle(&QuantileQuery::new(a, b, p).unwrap(), &cfg).unwrap()
}

pub fn log_q_oracle(a: f64, b: f64, p: f64) -> f64 {
    let cfg = OracleConfig::default();
    beta_log_quantile_oracle(&QuantileQuery::new(a, b, p).unwrap(), &cfg).unwrap()
}

/// `E(step(a)) / E(a)` for each `a`.
pub fn ratios(err: impl Fn(f64) -> f64, step: impl Fn(f64) -> f64, points: &[f64]) -> Vec<f64> {
    points.iter().map(|&a| err(step(a)) / err(a)).collect()
}

/// Whether every ratio lies in `[2^{-(N+2)}, 2^{-N}]`.
pub fn in_dyadic_band(rs: &[f64], n: usize) -> bool {
    let lo = 2f64.powi(-(n as i32 + 2));
    let hi = 2f64.powi(-(n as i32));
    rs.iter().all(|r| (lo..=hi).contains(r))
}
