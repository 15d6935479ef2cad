mod common;

use betaquant::combinatorics::{norlund_polynomial, pochhammer};
use betaquant::exactmath::{factorial, BiPoly, Rational};
use betaquant::expansion_inf::*;
use betaquant::special::{gamma_quantile, gamma_ratio, OracleConfig};
use common::{in_dyadic_band, phi_oracle, ratios};
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn c(v: i64) -> BiPoly {
    BiPoly::constant(Rational::from_i64(v))
}

/// The printed four-term expansion, as `φ_n = n! (-1)ⁿ [a^{-n}]`.
fn printed_phi() -> Vec<BiPoly> {
    let g = BiPoly::gamma();
    let b = BiPoly::b();
    let bm1 = &b - &c(1);
    vec![
        g.clone(),
        (&g * &bm1).scale(&r(1, 2)),
        (&g * &bm1 * (b.scale(&r(7, 1)) + &g - c(5))).scale(&r(1, 12)),
        (&g * &bm1 * &bm1 * (b.scale(&r(3, 1)) + &g - c(1))).scale(&r(3, 8)),
    ]
}

#[test]
fn golden_first_four() {
    let got = phi_coefficients(3);
    for (n, want) in printed_phi().into_iter().enumerate() {
        assert_eq!(got[n].poly, want, "n = {n}");
        assert_eq!(phi_coefficient(n).poly, want);
    }
}

#[test]
fn b_one_annihilates_corrections() {
    for pc in phi_coefficients(8).into_iter().skip(1) {
        assert!(pc.poly.substitute_b(&Rational::one()).is_zero(), "n = {}", pc.n);
    }
}

#[test]
fn coefficients_are_polynomial_in_gamma() {
    // δ carries negative powers of γ, φ_n must not
    for pc in phi_coefficients(8) {
        assert!(pc.poly.min_gamma_degree().unwrap_or(0) >= 1, "n = {}", pc.n);
    }
}

#[test]
fn delta_initial_conditions() {
    let mut t = DeltaTable::new();
    for n in 0..=6 {
        let want = norlund_polynomial(n).at_one_minus_b() * BiPoly::gamma_pow(n as i32);
        assert_eq!(delta(0, 0, n, &mut t), want);
    }
    let want = c(-1) + (BiPoly::b() - c(1)) * BiPoly::gamma_pow(-1);
    assert_eq!(delta(1, 0, 0, &mut t), want);
    // k = 2, n = 0: 1 - 2 (b-1)/γ + (b-2)(b-1)/γ²
    let bb = BiPoly::b();
    let want = c(1) - (&bb - &c(1)).scale(&r(2, 1)) * BiPoly::gamma_pow(-1)
        + (&bb - &c(2)) * (&bb - &c(1)) * BiPoly::gamma_pow(-2);
    assert_eq!(delta(2, 0, 0, &mut t), want);
    assert_eq!(t.initial(2, 0), want);
}

#[test]
fn delta_recursion_step() {
    let mut t = DeltaTable::new();
    let phi1 = t.phi(1);
    let lhs = delta(0, 1, 0, &mut t);
    let rhs = delta(0, 0, 1, &mut t) + phi1 * delta(1, 0, 0, &mut t);
    assert_eq!(lhs, rhs);
    assert!(t.cached(0, 1, 0).is_some());
}

#[test]
fn series_examples() {
    let cfg = OracleConfig::default();
    let s = phi_series_inf(1.0, 0.5, 6, &cfg).unwrap();
    assert!((s.coeffs()[0] - 2f64.ln()).abs() <= 1e-15);
    assert!(s.coeffs()[1..].iter().all(|&v| v == 0.0));

    let s = phi_series_inf(2.0, 0.5, 3, &cfg).unwrap();
    let g2 = 1.6783469900166605;
    assert!((s.gamma_b() - g2).abs() <= 1e-14);
    assert_eq!(s.coeffs()[0], s.gamma_b());
    assert!((s.coeffs()[1] + s.gamma_b() / 2.0).abs() <= 1e-15);

    for (b, p) in [(0.5, 0.1), (3.5, 0.25), (7.0, 0.9)] {
        let s = phi_series_inf(b, p, 2, &cfg).unwrap();
        assert_eq!(s.coeffs()[0], gamma_quantile(b, p, &cfg).unwrap());
    }
}

#[test]
fn series_coefficients_match_float_evaluation() {
    let cfg = OracleConfig::default();
    let (b, p) = (3.5, 0.25);
    let s = phi_series_inf(b, p, 6, &cfg).unwrap();
    let phis = phi_coefficients(6);
    for (n, pc) in phis.iter().enumerate() {
        let fl = pc.poly.eval(b, s.gamma_b()).unwrap();
        let fact = factorial(n).to_f64();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        assert!((s.coeffs()[n] - sign * fl / fact).abs() <= 1e-10 * fl.abs().max(1.0), "n = {n}");
    }
}

#[test]
fn approx_examples() {
    let cfg = OracleConfig::default();
    let s = phi_series_inf(2.0, 0.5, 0, &cfg).unwrap();
    for a in [1.0, 30.0, 1e6] {
        assert_eq!(phi_approx_inf(&s, a), s.gamma_b());
    }
    let s = phi_series_inf(1.0, 0.2, 5, &cfg).unwrap();
    for a in [0.5, 3.0, 40.0] {
        assert!((phi_approx_inf(&s, a) + 0.2f64.ln()).abs() <= 1e-14);
    }
}

#[test]
fn b_two_at_fifty_within_next_term() {
    let cfg = OracleConfig::default();
    let (b, p, a) = (2.0, 0.5, 50.0);
    let s4 = phi_series_inf(b, p, 4, &cfg).unwrap();
    let s3 = phi_series_inf(b, p, 3, &cfg).unwrap();
    let err = (phi_approx_inf(&s3, a) - phi_oracle(a, b, p)).abs();
    let bound = 2.0 * s4.coeffs()[4].abs() / a.powi(4);
    assert!(err <= bound, "{err:e} > {bound:e}");
}

#[test]
fn error_order_extends_to_higher_n() {
    let cfg = OracleConfig::default();
    let (b, p) = (2.0, 0.5);
    let phis = phi_coefficients(5);
    let g = gamma_quantile(b, p, &cfg).unwrap();
    for n in [4usize, 5] {
        let s = SeriesAtInf::from_symbolic(b, p, g, &phis[..=n]).unwrap();
        let err = |a: f64| (phi_approx_inf(&s, a) - phi_oracle(a, b, p)).abs();
        let rs = ratios(err, |a| 2.0 * a, &[20.0, 40.0]);
        assert!(in_dyadic_band(&rs, n), "N = {n}: {rs:?}");
    }
}

#[test]
fn q_coefficient_examples() {
    let cfg = OracleConfig::default();
    let s = phi_series_inf(2.5, 0.3, 4, &cfg).unwrap();
    let qc = q_coefficients_inf(&s);
    assert_eq!(qc.len(), 5);
    assert_eq!(qc[0], 1.0);
    assert!((qc[1] + s.gamma_b()).abs() <= 1e-15);

    let s = phi_series_inf(1.0, 0.5, 3, &cfg).unwrap();
    let qc = q_coefficients_inf(&s);
    let l = 2f64.ln();
    assert!((qc[1] + l).abs() <= 1e-15);
    assert!((qc[2] - l * l / 2.0).abs() <= 1e-15);
    assert!((qc[3] + l * l * l / 6.0).abs() <= 1e-15);
}

#[test]
fn q_series_consistency() {
    let cfg = OracleConfig::default();
    for (b, p) in [(2.0, 0.5), (3.5, 0.25)] {
        for n in [2usize, 3] {
            let s = phi_series_inf(b, p, n, &cfg).unwrap();
            let qc = q_coefficients_inf(&s);
            let err = |a: f64| (q_approx_inf(&qc, a) - (-phi_approx_inf(&s, a) / a).exp()).abs();
            let rs = ratios(err, |a| 2.0 * a, &[25.0, 50.0, 100.0]);
            assert!(in_dyadic_band(&rs, n), "b = {b}, N = {n}: {rs:?}");
        }
    }
}

/// `exp` of `Σ_{k≥1} a_k yᵏ / k!` by multiplying truncated power series.
fn exp_by_products(a: &[f64]) -> Vec<f64> {
    let n = a.len() - 1;
    let mut f = vec![0.0; n + 1];
    let mut fact = 1.0;
    for k in 1..=n {
        fact *= k as f64;
        f[k] = a[k] / fact;
    }
    let mut out = vec![0.0; n + 1];
    let mut power = vec![0.0; n + 1];
    power[0] = 1.0;
    let mut m_fact = 1.0;
    for m in 0..=n {
        if m > 0 {
            m_fact *= m as f64;
            let mut next = vec![0.0; n + 1];
            for i in 0..=n {
                for j in 0..=n - i {
                    next[i + j] += power[i] * f[j];
                }
            }
            power = next;
        }
        for k in 0..=n {
            out[k] += power[k] / m_fact;
        }
    }
    out.into_iter().map(|v| v * a[0].exp()).collect()
}

proptest! {
    #[test]
    fn exp_of_series_matches_products(a in prop::collection::vec(-2.0f64..2.0, 5)) {
        let got = exp_of_series(&a);
        let want = exp_by_products(&a);
        for (x, y) in got.iter().zip(&want) {
            prop_assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0), "{got:?} vs {want:?}");
        }
    }
}

#[test]
fn gamma_ratio_series() {
    // Γ(a) a^b / Γ(a+b) ~ Σ (-1)ⁿ (b)_n B_n^{(1-b)} / (n! aⁿ)
    let b = r(5, 2);
    let n_max = 4;
    let coeffs: Vec<f64> = (0..=n_max)
        .map(|n| {
            let sign = Rational::from_i64(if n % 2 == 0 { 1 } else { -1 });
            let v = sign
                * pochhammer(&b, n)
                * norlund_polynomial(n).eval(&(Rational::one() - &b))
                * factorial(n).recip().unwrap();
            v.to_f64()
        })
        .collect();
    let err = |a: f64| {
        let s = coeffs.iter().rev().fold(0.0, |acc, c| acc / a + c);
        (gamma_ratio(a, 2.5).unwrap() - s).abs()
    };
    let rs = ratios(err, |a| 2.0 * a, &[25.0, 50.0, 100.0]);
    assert!(in_dyadic_band(&rs, n_max), "{rs:?}");
}
