//! Expansion of `φ` and `q` as `a → ∞`.
//!
//! `φ(a) ~ Σ φ_n (-1)ⁿ / (n! aⁿ)` where each `φ_n` is an exact polynomial in
//! `b` and (Laurent) `γ_b`, generated by the coupled recursion
//!
//! ```text
//! φ_0 = γ
//! φ_n = - Σ_{j=1}^{n-1} C(n-1,j) φ_{n-j} δ(0,j,0)
//!       - Σ_{k=0}^{n-2} Σ_{j=0}^{k} C(k,j) φ_{k-j+1} δ(0,j,n-k-1)
//!       + B_n^{(1-b)} Σ_{k=0}^{n-1} (b+n-k)_k γ^{n-k}
//! δ(k,m,n) = δ(k,m-1,n+1) + Σ_{j=0}^{m-1} C(m-1,j) φ_{m-j} δ(k+1,j,n)
//! δ(k,0,n) = B_n^{(1-b)} Σ_{j=0}^{k} C(k,j) (-1)^{k-j} (b+n-j)_j γ^{n-j}
//! ```
//!
//! The recursion is run once, symbolically; numeric `(b, γ_b)` are
//! substituted afterwards.

use std::collections::HashMap;

use crate::combinatorics::{complete_bell_sequence, norlund_sequence, pochhammer};
use crate::error::{Error, Result};
use crate::exactmath::{binomial, factorial, BiPoly, Rational};
use crate::special::{gamma_quantile, OracleConfig};

/// Default truncation order at infinity.
pub const DEFAULT_ORDER_INF: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiCoefficient {
    pub n: usize,
    pub poly: BiPoly,
}

/// Memo for the mutually recursive `φ_n` / `δ(k, m, n)` tables, plus the
/// Nørlund factors `B_n^{(1-b)}` they share.
///
/// `φ_n` only asks for `δ(·, m, ·)` with `m ≤ n-1`, and `δ(·, m, ·)` only
/// asks for `φ_j` with `j ≤ m`, so plain memoized recursion terminates.
#[derive(Debug, Default, Clone)]
pub struct DeltaTable {
    delta: HashMap<(usize, usize, usize), BiPoly>,
    phi: Vec<BiPoly>,
    norlund: Vec<BiPoly>,
}

impl DeltaTable {
    pub fn new() -> Self {
        DeltaTable::default()
    }

    /// Number of memoized `δ` entries.
    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn cached(&self, k: usize, m: usize, n: usize) -> Option<&BiPoly> {
        self.delta.get(&(k, m, n))
    }

    fn norlund(&mut self, n: usize) -> BiPoly {
        if n >= self.norlund.len() {
            let target = n.max(2 * self.norlund.len());
            self.norlund = norlund_sequence(target)
                .iter()
                .map(|p| p.at_one_minus_b())
                .collect();
        }
        self.norlund[n].clone()
    }

    /// `(b + s)_j` as a polynomial in `b`, for a possibly negative shift.
    fn shifted_pochhammer(s: i64, j: usize) -> BiPoly {
        pochhammer(&(BiPoly::b() + BiPoly::constant(Rational::from_i64(s))), j)
    }

    /// Closed form of `δ(k, 0, n)`.
    pub fn initial(&mut self, k: usize, n: usize) -> BiPoly {
        let mut sum = BiPoly::zero();
        for j in 0..=k {
            let sign = if (k - j).is_multiple_of(2) { 1 } else { -1 };
            let c = binomial(k, j) * Rational::from_i64(sign);
            let term = DeltaTable::shifted_pochhammer(n as i64 - j as i64, j)
                * BiPoly::gamma_pow(n as i32 - j as i32);
            sum = sum + term.scale(&c);
        }
        self.norlund(n) * sum
    }

    pub fn delta(&mut self, k: usize, m: usize, n: usize) -> BiPoly {
        if let Some(v) = self.delta.get(&(k, m, n)) {
            return v.clone();
        }
        let v = if m == 0 {
            self.initial(k, n)
        } else {
            let mut acc = self.delta(k, m - 1, n + 1);
            for j in 0..m {
                let t = self.phi(m - j) * self.delta(k + 1, j, n);
                acc = acc + t.scale(&binomial(m - 1, j));
            }
            acc
        };
        self.delta.insert((k, m, n), v.clone());
        v
    }

    pub fn phi(&mut self, n: usize) -> BiPoly {
        if let Some(v) = self.phi.get(n) {
            return v.clone();
        }
        // fill in order so the Vec index is the coefficient index
        for i in self.phi.len()..=n {
            let v = self.compute_phi(i);
            self.phi.push(v);
        }
        self.phi[n].clone()
    }

    fn compute_phi(&mut self, n: usize) -> BiPoly {
        if n == 0 {
            return BiPoly::gamma();
        }
        // for n = 1 both sums below are empty and only the k = 0 Nørlund
        // term survives: φ_1 = B_1^{(1-b)} γ = (b-1)γ/2
        let mut acc = BiPoly::zero();
        for j in 1..n {
            let t = self.phi(n - j) * self.delta(0, j, 0);
            acc = acc - t.scale(&binomial(n - 1, j));
        }
        for k in 0..n.saturating_sub(1) {
            for j in 0..=k {
                let t = self.phi(k - j + 1) * self.delta(0, j, n - k - 1);
                acc = acc - t.scale(&binomial(k, j));
            }
        }
        let mut tail = BiPoly::zero();
        for k in 0..n {
            tail = tail
                + DeltaTable::shifted_pochhammer((n - k) as i64, k)
                    * BiPoly::gamma_pow((n - k) as i32);
        }
        acc + self.norlund(n) * tail
    }
}

/// `δ(k, m, n)` through a caller-owned memo table.
pub fn delta(k: usize, m: usize, n: usize, table: &mut DeltaTable) -> BiPoly {
    table.delta(k, m, n)
}

pub fn phi_coefficient(n: usize) -> PhiCoefficient {
    PhiCoefficient {
        n,
        poly: DeltaTable::new().phi(n),
    }
}

/// `φ_0, ..., φ_{n_max}` from one shared table.
pub fn phi_coefficients(n_max: usize) -> Vec<PhiCoefficient> {
    let mut table = DeltaTable::new();
    (0..=n_max)
        .map(|n| PhiCoefficient {
            n,
            poly: table.phi(n),
        })
        .collect()
}

/// Numeric expansion at infinity for fixed `(b, p)`: `coeffs[n]` is
/// `(-1)ⁿ φ_n(b, γ_b) / n!`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesAtInf {
    b: f64,
    p: f64,
    order: usize,
    gamma_b: f64,
    coeffs: Vec<f64>,
    phi_values: Vec<f64>,
}

impl SeriesAtInf {
    /// Substitutes `(b, γ_b)` into precomputed symbolic coefficients. The
    /// substitution is exact (binary64 inputs read as rationals); only the
    /// final value is rounded.
    pub fn from_symbolic(b: f64, p: f64, gamma_b: f64, phis: &[PhiCoefficient]) -> Result<Self> {
        if phis.is_empty() {
            return Err(Error::domain("SeriesAtInf::from_symbolic", "no coefficients"));
        }
        let bx = Rational::from_f64_exact(b)?;
        let gx = Rational::from_f64_exact(gamma_b)?;
        let mut phi_values = Vec::with_capacity(phis.len());
        let mut coeffs = Vec::with_capacity(phis.len());
        for (n, pc) in phis.iter().enumerate() {
            let v = pc.poly.eval_exact(&bx, &gx)?;
            phi_values.push(v.to_f64());
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let c = v * factorial(n).recip()? * Rational::from_i64(sign);
            coeffs.push(c.to_f64());
        }
        Ok(SeriesAtInf {
            b,
            p,
            order: phis.len() - 1,
            gamma_b,
            coeffs,
            phi_values,
        })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn gamma_b(&self) -> f64 {
        self.gamma_b
    }

    /// `(-1)ⁿ φ_n / n!`, `n = 0..=N`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `φ_n(b, γ_b)` without the sign and factorial.
    pub fn phi_values(&self) -> &[f64] {
        &self.phi_values
    }
}

pub fn phi_series_inf(b: f64, p: f64, n: usize, cfg: &OracleConfig) -> Result<SeriesAtInf> {
    let gamma_b = gamma_quantile(b, p, cfg)?;
    SeriesAtInf::from_symbolic(b, p, gamma_b, &phi_coefficients(n))
}

/// `Σ_{n=0}^{N} coeffs[n] / aⁿ`.
pub fn phi_approx_inf(series: &SeriesAtInf, a: f64) -> f64 {
    let x = 1.0 / a;
    series.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Given `a_0..a_N`, the coefficients of `exp(Σ a_k / (k! x^k))` in powers
/// of `1/x`: entry `k` is `e^{a_0} 𝓑_k(a_1..a_k) / k!`.
pub fn exp_of_series(coeffs: &[f64]) -> Vec<f64> {
    let Some((&a0, rest)) = coeffs.split_first() else {
        return Vec::new();
    };
    let lead = a0.exp();
    let mut f = 1.0;
    complete_bell_sequence(rest)
        .into_iter()
        .enumerate()
        .map(|(k, bk)| {
            if k > 0 {
                f *= k as f64;
            }
            lead * bk / f
        })
        .collect()
}

/// Coefficients of `q(a) ~ Σ_{n=0}^{N} q_n / aⁿ`, `q_0 = 1`.
///
/// `q = exp(-φ/a)`, so in the `1/a` basis with `n!` normalization the
/// exponent has entries `x_j = (-1)^j j φ_{j-1}`; the list uses
/// `φ_0..φ_{N-1}`.
pub fn q_coefficients_inf(series: &SeriesAtInf) -> Vec<f64> {
    let mut args = Vec::with_capacity(series.order + 1);
    args.push(0.0);
    for j in 1..=series.order {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        args.push(sign * j as f64 * series.phi_values[j - 1]);
    }
    exp_of_series(&args)
}

/// `Σ q_n / aⁿ`.
pub fn q_approx_inf(q_coeffs: &[f64], a: f64) -> f64 {
    let x = 1.0 / a;
    q_coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}
