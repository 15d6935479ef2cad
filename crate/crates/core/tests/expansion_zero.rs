mod common;

use betaquant::expansion_zero::*;
use betaquant::exactmath::Rational;
use common::{in_dyadic_band, log_q_oracle, phi_oracle, ratios};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn exact(s: &SeriesAtZero) -> Vec<Rational> {
    s.coeffs()[1..]
        .iter()
        .map(|c| c.exact.clone().expect("exact path"))
        .collect()
}

#[test]
fn b_one_has_no_corrections() {
    for p in [0.1, 0.5, 0.9] {
        let s = coeffs_at_zero(1.0, p, 10).unwrap();
        assert!(exact(&s).iter().all(Rational::is_zero));
        for a in [0.01, 0.5, 3.0] {
            assert_eq!(phi_approx_zero(&s, a), -p.ln());
        }
    }
}

#[test]
fn integer_b_hand_values() {
    let s = coeffs_at_zero(2.0, 0.5, 4).unwrap();
    assert_eq!(exact(&s), vec![r(1, 1), r(-1, 1), r(2, 1), r(-6, 1)]);
    // b = 3: (-1)^{n+1} (n-1)! (1 + 2^{-n})
    let s = coeffs_at_zero(3.0, 0.5, 3).unwrap();
    assert_eq!(exact(&s), vec![r(3, 2), r(-5, 4), r(9, 4)]);
    assert_eq!(s.coeffs()[0].value, 0.5f64.ln());
}

#[test]
fn exact_and_polygamma_paths_agree() {
    for b in [2.0, 3.0, 5.0] {
        let e = coeffs_at_zero(b, 0.4, 8).unwrap();
        let f = coeffs_at_zero_float(b, 0.4, 8).unwrap();
        assert!(e.is_exact() && !f.is_exact());
        for (n, (x, y)) in e.values().iter().zip(f.values()).enumerate() {
            assert!((x - y).abs() <= 1e-11 * x.abs().max(1.0), "b = {b}, n = {n}: {x} vs {y}");
        }
    }
}

#[test]
fn signs_alternate_for_b_above_one() {
    for b in [2.0, 3.0, 5.5] {
        let s = coeffs_at_zero(b, 0.5, 10).unwrap();
        for (n, v) in s.values().iter().enumerate().skip(1) {
            let want = if n % 2 == 1 { 1.0 } else { -1.0 };
            assert_eq!(v.signum(), want, "b = {b}, n = {n}");
        }
    }
    // and flip below one
    let s = coeffs_at_zero(0.7, 0.5, 10).unwrap();
    for (n, v) in s.values().iter().enumerate().skip(1) {
        assert_eq!(v.signum(), if n % 2 == 1 { -1.0 } else { 1.0 });
    }
}

#[test]
fn tends_to_minus_log_p() {
    let s = coeffs_at_zero(2.5, 0.3, 8).unwrap();
    assert!((phi_approx_zero(&s, 1e-12) + 0.3f64.ln()).abs() < 1e-11);
}

/// For `b = 2` the quantile solves `q^a (1 + a - a q) = p` exactly, so
/// `φ = -log p + log(1 + a) + log(1 - a q / (1 + a))`. The last term is
/// beyond all orders in `a` but about `a q` in size, which at `a = 0.05`,
/// `p = 1/2` (`q ≈ 3.6e-7`) exceeds `a^7`. It is removed before checking
/// the order-6 truncation error against the first omitted term.
#[test]
fn b_two_against_oracle() {
    let (b, p, a) = (2.0, 0.5, 0.05);
    let s = coeffs_at_zero(b, p, 6).unwrap();
    let lq = log_q_oracle(a, b, p);
    let q = lq.exp();
    let phi = -a * lq;
    let residual = phi - phi_approx_zero(&s, a) - (-a * q / (1.0 + a)).ln_1p();
    // first omitted term d_7 a^7 / 7! = a^7 / 7
    let c = 2.0 / 7.0;
    assert!(residual.abs() <= c * a.powi(7), "residual {residual:e}");
    // the closed form itself agrees with the oracle
    let closed = -p.ln() + a.ln_1p() + (-a * q / (1.0 + a)).ln_1p();
    assert!((closed - phi).abs() <= 1e-13);
}

#[test]
fn ratio_expansion_b_two() {
    // q/p^{1/a} → (1+a)^{-1/a} = e^{-1} (1 + a/2 - 5a²/24 + ...)
    let rr = q_ratio_expansion_zero(2.0, 2).unwrap();
    let e1 = (-1f64).exp();
    assert!((rr[0] - e1).abs() <= 1e-16);
    assert!((rr[1] - e1 / 2.0).abs() <= 1e-16);
    assert!((rr[2] + 5.0 * e1 / 24.0).abs() <= 1e-16);
}

#[test]
fn ratio_expansion_leading_term() {
    for b in [0.5, 2.5, 4.0] {
        let rr = q_ratio_expansion_zero(b, 0).unwrap();
        let want = (-betaquant::special::EULER_GAMMA - betaquant::special::polygamma(0, b).unwrap()).exp();
        assert!((rr[0] - want).abs() <= 1e-14 * want);
    }
}

#[test]
fn ratio_expansion_error_order() {
    // p^{1/a} ≤ 1e-13 on this grid, so the beyond-all-orders part is negligible
    let (b, p) = (2.5, 0.3);
    for n in [2usize, 3] {
        let rr = q_ratio_expansion_zero(b, n).unwrap();
        let err = |a: f64| {
            let oracle = (log_q_oracle(a, b, p) - p.ln() / a).exp();
            let approx = rr.iter().rev().fold(0.0, |acc, c| acc * a + c);
            (oracle - approx).abs()
        };
        let rs = ratios(err, |a| a / 2.0, &[0.04, 0.02]);
        assert!(in_dyadic_band(&rs, n), "N = {n}: {rs:?}");
    }
}

#[test]
fn q_approx_at_b_one_is_exact() {
    let rr = q_ratio_expansion_zero(1.0, 6).unwrap();
    for a in [0.1, 1.0, 10.0] {
        let want = 0.37f64.powf(1.0 / a);
        assert!((q_approx_zero(&rr, 0.37, a) - want).abs() <= 1e-15);
    }
}

#[test]
fn small_a_error_shrinks_with_order() {
    // at a = 0.02 and p = 0.3, p^{1/a} ≈ 7e-27: only the truncation is visible
    let (b, p, a) = (2.5, 0.3, 0.02);
    let oracle = phi_oracle(a, b, p);
    let mut prev = f64::INFINITY;
    for n in 1..=6 {
        let e = (phi_approx_zero(&coeffs_at_zero(b, p, n).unwrap(), a) - oracle).abs();
        assert!(e < prev || e < 1e-13, "N = {n}");
        prev = e;
    }
}
