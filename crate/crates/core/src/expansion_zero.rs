//! Expansion of `φ(a) = -a log q(a)` and of `q(a) / p^{1/a}` as `a → 0`.
//!
//! Coefficients are stored as derivative values at the origin:
//! entry 0 holds `log p`, entry `n ≥ 1` holds
//! `d_n = Ψ(n-1, b) - Ψ(n-1, 1)`, and the evaluated series is
//!
//! ```text
//! φ(a) ≈ -log p + Σ_{n=1}^{N} d_n aⁿ / n!
//! ```
//!
//! For integer `b` the same values are `(-1)^{n+1} (n-1)! Σ_{k<b} k^{-n}`,
//! computed in exact arithmetic. The series is asymptotic: truncate, do not
//! sum to convergence.

use crate::combinatorics::complete_bell_sequence;
use crate::error::{Error, Result};
use crate::exactmath::{factorial, Rational};
use crate::special::{polygamma, MAX_POLYGAMMA_ORDER};

/// Default truncation order at the origin.
pub const DEFAULT_ORDER_ZERO: usize = 16;

/// Largest integer `b` routed through the exact closed form; beyond it the
/// harmonic-type sums get unwieldy and the polygamma path is used instead.
pub const EXACT_B_LIMIT: u32 = 200;

/// One stored coefficient: its float value and, on the integer-`b` path,
/// the exact rational it was rounded from.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient {
    pub value: f64,
    pub exact: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesAtZero {
    b: f64,
    p: f64,
    order: usize,
    coeffs: Vec<Coefficient>,
    exact: bool,
}

impl SeriesAtZero {
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `c_0 = log p`, then `d_1, ..., d_N`.
    pub fn coeffs(&self) -> &[Coefficient] {
        &self.coeffs
    }

    pub fn values(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.value).collect()
    }

    /// True when `d_1..d_N` came from the exact integer-`b` formula.
    pub fn is_exact(&self) -> bool {
        self.exact
    }
}

fn check_b(func: &'static str, b: f64) -> Result<()> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::domain(func, format!("b must be positive and finite, got {b}")));
    }
    Ok(())
}

fn exact_integer_b(b: f64) -> Option<u32> {
    (b.fract() == 0.0 && b >= 1.0 && b <= EXACT_B_LIMIT as f64).then_some(b as u32)
}

/// `(-1)^{n+1} (n-1)! Σ_{k=1}^{b-1} k^{-n}` for `n = 1..=n_max`.
fn exact_derivatives(b: u32, n_max: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut s = Rational::zero();
        for k in 1..b {
            let kn = Rational::from_i64(k as i64)
                .powi(n as i32)
                .expect("nonnegative exponent");
            s = s + kn.recip().expect("k ≥ 1");
        }
        let v = factorial(n - 1) * s;
        out.push(if n % 2 == 1 { v } else { -v });
    }
    out
}

/// `Ψ(n-1, b) - Ψ(n-1, 1)` for `n = 1..=n_max`.
fn float_derivatives(b: f64, n_max: usize) -> Result<Vec<f64>> {
    if n_max > MAX_POLYGAMMA_ORDER + 1 {
        return Err(Error::domain(
            "coeffs_at_zero",
            format!("order {n_max} needs polygamma beyond order {MAX_POLYGAMMA_ORDER}"),
        ));
    }
    (1..=n_max)
        .map(|n| Ok(polygamma(n - 1, b)? - polygamma(n - 1, 1.0)?))
        .collect()
}

/// Derivatives `d_1..d_{n_max}` and whether they are exact.
fn derivatives(b: f64, n_max: usize) -> Result<(Vec<Coefficient>, bool)> {
    match exact_integer_b(b) {
        Some(bi) => Ok((
            exact_derivatives(bi, n_max)
                .into_iter()
                .map(|r| Coefficient {
                    value: r.to_f64(),
                    exact: Some(r),
                })
                .collect(),
            true,
        )),
        None => Ok((
            float_derivatives(b, n_max)?
                .into_iter()
                .map(|value| Coefficient { value, exact: None })
                .collect(),
            false,
        )),
    }
}

/// Stored coefficients of the expansion at 0 up to order `n`.
pub fn coeffs_at_zero(b: f64, p: f64, n: usize) -> Result<SeriesAtZero> {
    check_b("coeffs_at_zero", b)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("coeffs_at_zero", format!("p must lie in (0, 1), got {p}")));
    }
    let (ds, exact) = derivatives(b, n)?;
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(Coefficient {
        value: p.ln(),
        exact: None,
    });
    coeffs.extend(ds);
    Ok(SeriesAtZero {
        b,
        p,
        order: n,
        coeffs,
        exact,
    })
}

/// Always uses the polygamma path, even for integer `b`.
pub fn coeffs_at_zero_float(b: f64, p: f64, n: usize) -> Result<SeriesAtZero> {
    check_b("coeffs_at_zero_float", b)?;
    let mut s = coeffs_at_zero(b, p, 0)?;
    s.coeffs.extend(
        float_derivatives(b, n)?
            .into_iter()
            .map(|value| Coefficient { value, exact: None }),
    );
    s.order = n;
    s.exact = false;
    Ok(s)
}

/// `-c_0 + Σ d_n aⁿ / n!`; tends to `-log p` as `a → 0`.
pub fn phi_approx_zero(series: &SeriesAtZero, a: f64) -> f64 {
    // Horner on t_n = d_n / n!
    let mut acc = 0.0;
    let mut inv_fact = Vec::with_capacity(series.order + 1);
    let mut f = 1.0;
    for n in 0..=series.order {
        if n > 0 {
            f /= n as f64;
        }
        inv_fact.push(f);
    }
    for n in (1..=series.order).rev() {
        acc = (acc + series.coeffs[n].value * inv_fact[n]) * a;
    }
    acc - series.coeffs[0].value
}

/// Coefficients `r_0..r_N` of `q(a) / p^{1/a} ≈ Σ r_n aⁿ`.
///
/// `r_n = e^{-d_1} 𝓑_n(x_1..x_n) / n!` with `x_m = -d_{m+1} / (m+1)`, so the
/// order-`N` list needs derivatives up to `d_{N+1}`. The prefactor
/// `e^{-d_1} = e^{-γ - Ψ(0, b)}` is the limit of the ratio at 0.
pub fn q_ratio_expansion_zero(b: f64, n: usize) -> Result<Vec<f64>> {
    check_b("q_ratio_expansion_zero", b)?;
    let (ds, exact) = derivatives(b, n + 1)?;
    let lead = (-ds[0].value).exp();
    let bells: Vec<f64> = if exact {
        let x: Vec<Rational> = (1..=n)
            .map(|m| {
                let d = ds[m].exact.clone().expect("exact path");
                -(d * Rational::new(1, m as i64 + 1).expect("nonzero"))
            })
            .collect();
        complete_bell_sequence(&x)
            .iter()
            .enumerate()
            .map(|(k, bk)| (bk * factorial(k).recip().expect("nonzero")).to_f64())
            .collect()
    } else {
        let x: Vec<f64> = (1..=n).map(|m| -ds[m].value / (m as f64 + 1.0)).collect();
        let mut f = 1.0;
        complete_bell_sequence(&x)
            .into_iter()
            .enumerate()
            .map(|(k, bk)| {
                if k > 0 {
                    f *= k as f64;
                }
                bk / f
            })
            .collect()
    };
    Ok(bells.into_iter().map(|v| lead * v).collect())
}

/// `p^{1/a} Σ r_n aⁿ`, the quantile itself from the ratio expansion.
pub fn q_approx_zero(ratio: &[f64], p: f64, a: f64) -> f64 {
    let s = ratio.iter().rev().fold(0.0, |acc, r| acc * a + r);
    (p.ln() / a).exp() * s
}
