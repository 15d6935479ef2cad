//! Binary64 special functions and the bracketed inversions that serve as
//! the brute-force oracle for `q(a; b, p)` and `γ_b`.

use std::sync::OnceLock;

use crate::combinatorics::bernoulli_number;
use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Below this argument `log_gamma` shifts up with the recurrence.
const STIRLING_MIN: f64 = 10.0;
/// Highest polygamma order accepted by the public entry point.
pub const MAX_POLYGAMMA_ORDER: usize = 32;
/// Power-series half-width around the zeros of `log Γ` at 1 and 2.
const ZETA_SERIES_RADIUS: f64 = 0.25;
const ZETA_SERIES_TERMS: usize = 30;
const MAX_CF_ITERATIONS: usize = 5000;

/// `B_{2k}` for `k = 0..`, as floats.
fn even_bernoulli() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| (0..=30).map(|k| bernoulli_number(2 * k).to_f64()).collect())
}

/// `ζ(k)` for `k = 0..=ZETA_SERIES_TERMS + 1` (entries 0 and 1 unused), taken
/// from `Ψ(k-1, 1) = (-1)^k (k-1)! ζ(k)`.
fn zeta_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![f64::NAN, f64::NAN];
        for k in 2..=ZETA_SERIES_TERMS + 1 {
            let n = k - 1;
            let v = polygamma_unchecked(n, 1.0).abs() / ln_factorial(n).exp();
            t.push(v);
        }
        t
    })
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

fn stirling(x: f64) -> f64 {
    let b = even_bernoulli();
    let mut sum = (x - 0.5) * x.ln() - x + LN_SQRT_2PI;
    let x2 = x * x;
    let mut xpow = x;
    for (k, &bk) in b.iter().enumerate().skip(1) {
        let term = bk / ((2 * k) * (2 * k - 1)) as f64 / xpow;
        sum += term;
        if term.abs() <= f64::EPSILON * 1e-3 * sum.abs().max(1.0) {
            break;
        }
        xpow *= x2;
    }
    sum
}

/// Stirling tail `log Γ(x) - [(x - 1/2) log x - x + log √(2π)]`.
fn stirling_tail(x: f64) -> f64 {
    let b = even_bernoulli();
    let mut sum = 0.0;
    let x2 = x * x;
    let mut xpow = x;
    for (k, &bk) in b.iter().enumerate().skip(1) {
        let term = bk / ((2 * k) * (2 * k - 1)) as f64 / xpow;
        sum += term;
        if term.abs() <= f64::EPSILON * 1e-6 {
            break;
        }
        xpow *= x2;
    }
    sum
}

/// `log Γ(1 + z) = -γ z + sum_{k>=2} (-1)^k ζ(k) z^k / k`, `|z| <= 1/4`.
fn log_gamma_1p_series(z: f64) -> f64 {
    let zeta = zeta_table();
    let mut sum = -EULER_GAMMA * z;
    // (-z)^k
    let mut zk = -z;
    for (k, zk_val) in zeta.iter().enumerate().skip(2) {
        zk *= -z;
        sum += zk_val * zk / k as f64;
    }
    sum
}

/// `log Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("log_gamma", format!("x = {x} must be positive and finite")));
    }
    Ok(log_gamma_unchecked(x))
}

fn log_gamma_unchecked(x: f64) -> f64 {
    if (x - 1.0).abs() <= ZETA_SERIES_RADIUS {
        return log_gamma_1p_series(x - 1.0);
    }
    if (x - 2.0).abs() <= ZETA_SERIES_RADIUS {
        let z = x - 2.0;
        return log_gamma_1p_series(z) + z.ln_1p();
    }
    if x >= STIRLING_MIN {
        return stirling(x);
    }
    // Γ(x) = Γ(x + m) / (x (x+1) ... (x+m-1))
    let mut prod = 1.0;
    let mut y = x;
    while y < STIRLING_MIN {
        prod *= y;
        y += 1.0;
    }
    stirling(y) - prod.ln()
}

/// `log Γ(x + h) - log Γ(x)`, accurate when `x` is large relative to `h`.
pub fn log_gamma_shift(x: f64, h: f64) -> Result<f64> {
    if !(x > 0.0) || !(x + h > 0.0) {
        return Err(Error::domain("log_gamma_shift", format!("x = {x}, h = {h}")));
    }
    if x >= STIRLING_MIN && x + h >= STIRLING_MIN {
        // (x+h-1/2) log(x+h) - (x-1/2) log x - h = (x-1/2) log1p(h/x) + h log(x+h) - h
        let main = (x - 0.5) * (h / x).ln_1p() + h * (x + h).ln() - h;
        return Ok(main + stirling_tail(x + h) - stirling_tail(x));
    }
    Ok(log_gamma_unchecked(x + h) - log_gamma_unchecked(x))
}

/// `log B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::domain("ln_beta", format!("a = {a}, b = {b}")));
    }
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    Ok(log_gamma_unchecked(small) - log_gamma_shift(big, small)?)
}

/// Polygamma `Ψ(n, x) = d^{n+1}/dx^{n+1} log Γ(x)`, `x > 0`, `n <= 32`.
pub fn polygamma(n: usize, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("polygamma", format!("x = {x} must be positive and finite")));
    }
    if n > MAX_POLYGAMMA_ORDER {
        return Err(Error::domain(
            "polygamma",
            format!("order {n} exceeds {MAX_POLYGAMMA_ORDER}"),
        ));
    }
    Ok(polygamma_unchecked(n, x))
}

fn polygamma_unchecked(n: usize, x: f64) -> f64 {
    let threshold = 15.0 + n as f64;
    let mut y = x;
    // Ψ(n, x) = Ψ(n, x + m) - (-1)^n n! sum_{i<m} (x + i)^{-(n+1)}
    let mut shift_sum = 0.0;
    while y < threshold {
        shift_sum += y.powi(-(n as i32 + 1));
        y += 1.0;
    }
    let b = even_bernoulli();
    if n == 0 {
        let y2 = y * y;
        let mut sum = y.ln() - 0.5 / y;
        let mut ypow = y2;
        for (k, &bk) in b.iter().enumerate().skip(1) {
            let term = bk / (2 * k) as f64 / ypow;
            sum -= term;
            if term.abs() <= f64::EPSILON * 1e-3 * sum.abs() {
                break;
            }
            ypow *= y2;
        }
        return sum - shift_sum;
    }
    let nf = n as f64;
    let ln_fact_nm1 = ln_factorial(n - 1);
    // A_k = (2k+n-1)! / y^{2k+n}
    let mut a_k = (ln_fact_nm1 - nf * y.ln()).exp();
    let mut sum = a_k + a_k * nf / (2.0 * y);
    let mut inv_fact_2k = 1.0;
    for (k, &bk) in b.iter().enumerate().skip(1) {
        let kk = (2 * k) as f64;
        a_k *= (kk + nf - 2.0) * (kk + nf - 1.0) / (y * y);
        inv_fact_2k /= (kk - 1.0) * kk;
        let term = bk * inv_fact_2k * a_k;
        sum += term;
        if term.abs() <= f64::EPSILON * 1e-3 * sum.abs() {
            break;
        }
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let n_fact = ln_factorial(n).exp();
    sign * (sum + n_fact * shift_sum)
}

/// The pair `(I_x(a, b), 1 - I_x(a, b))` from `log x` and `log(1 - x)`, both
/// parts computed without subtractive cancellation.
fn inc_beta_pair(ln_x: f64, ln_1mx: f64, a: f64, b: f64, lbeta: f64) -> Result<(f64, f64)> {
    let x = ln_x.exp();
    let front = (a * ln_x + b * ln_1mx - lbeta).exp();
    if front == 0.0 {
        return Ok(if x < 0.5 { (0.0, 1.0) } else { (1.0, 0.0) });
    }
    if x < (a + 1.0) / (a + b + 2.0) {
        let i = front * beta_cf(x, a, b)? / a;
        Ok((i, 1.0 - i))
    } else {
        let j = front * beta_cf(ln_1mx.exp(), b, a)? / b;
        Ok((1.0 - j, j))
    }
}

/// Continued fraction for the incomplete beta (modified Lentz).
fn beta_cf(x: f64, a: f64, b: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_CF_ITERATIONS {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= f64::EPSILON {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence {
        func: "reg_inc_beta",
        iterations: MAX_CF_ITERATIONS,
        lo: x,
        hi: x,
    })
}

fn check_shape(func: &'static str, a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
        return Err(Error::domain(func, format!("shape parameters a = {a}, b = {b} must be positive")));
    }
    Ok(())
}

/// Regularized incomplete beta `I_x(a, b)`, the Beta(a, b) distribution function.
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    check_shape("reg_inc_beta", a, b)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("reg_inc_beta", format!("x = {x} outside [0, 1]")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let lbeta = ln_beta(a, b)?;
    Ok(inc_beta_pair(x.ln(), (-x).ln_1p(), a, b, lbeta)?.0)
}

/// `(P(s, x), Q(s, x))`, the regularized lower and upper incomplete gamma.
pub fn reg_gamma_pair(s: f64, x: f64) -> Result<(f64, f64)> {
    if !(s > 0.0 && s.is_finite()) || !(x >= 0.0) {
        return Err(Error::domain("reg_gamma", format!("s = {s}, x = {x}")));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x.is_infinite() {
        return Ok((1.0, 0.0));
    }
    let front = (s * x.ln() - x - log_gamma_unchecked(s)).exp();
    if x < s + 1.0 {
        // P = e^{-x} x^s / Γ(s+1) sum_n x^n / ((s+1)...(s+n))
        let mut term = 1.0 / s;
        let mut sum = term;
        let mut ap = s;
        for _ in 0..MAX_CF_ITERATIONS {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * f64::EPSILON * 0.5 {
                let p = front * sum;
                return Ok((p, 1.0 - p));
            }
        }
    } else {
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - s;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=MAX_CF_ITERATIONS {
            let an = -(i as f64) * (i as f64 - s);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() <= f64::EPSILON {
                let q = front * h;
                return Ok((1.0 - q, q));
            }
        }
    }
    Err(Error::NoConvergence {
        func: "reg_gamma",
        iterations: MAX_CF_ITERATIONS,
        lo: x,
        hi: x,
    })
}

/// Regularized lower incomplete gamma `P(s, x)`.
pub fn reg_lower_gamma(s: f64, x: f64) -> Result<f64> {
    Ok(reg_gamma_pair(s, x)?.0)
}

/// `Γ(a) a^b / Γ(a + b)` through the log-gamma layer.
pub fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    check_shape("gamma_ratio", a, b)?;
    if a >= STIRLING_MIN {
        // b log a - [log Γ(a+b) - log Γ(a)] with the O(b) parts cancelled
        // analytically: only O(1/a) quantities are subtracted
        let l = (b / a).ln_1p();
        let log_ratio = b - (a + b - 0.5) * l - (stirling_tail(a + b) - stirling_tail(a));
        return Ok(log_ratio.exp());
    }
    Ok((log_gamma(a)? + b * a.ln() - log_gamma(a + b)?).exp())
}

/// `(a, b, p)` with `a, b > 0` and `0 < p < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileQuery {
    a: f64,
    b: f64,
    p: f64,
}

impl QuantileQuery {
    pub fn new(a: f64, b: f64, p: f64) -> Result<Self> {
        check_shape("QuantileQuery", a, b)?;
        check_level("QuantileQuery", p)?;
        Ok(QuantileQuery { a, b, p })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

fn check_level(func: &'static str, p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(func, format!("p = {p} outside (0, 1)")));
    }
    Ok(())
}

/// Stopping rules for the inversions.
///
/// `x_tolerance` bounds the relative width of the bracket on the log of the
/// root (i.e. it is a relative tolerance on the root itself); `f_tolerance`
/// bounds `|F(root) - target|`. Either criterion stops the iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub x_tolerance: f64,
    pub f_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            x_tolerance: 1e-13,
            f_tolerance: 1e-14,
            max_iterations: 200,
        }
    }
}

impl OracleConfig {
    pub fn new(x_tolerance: f64, f_tolerance: f64, max_iterations: usize) -> Result<Self> {
        let cfg = OracleConfig {
            x_tolerance,
            f_tolerance,
            max_iterations,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_tolerance > 0.0) || !(self.f_tolerance > 0.0) {
            return Err(Error::Config("tolerances must be strictly positive".into()));
        }
        if self.max_iterations < 1 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Finds a root of an increasing `f` on the real line given a starting point.
/// `f` returns `(residual, derivative)`.
fn solve_increasing<F>(func: &'static str, f: F, start: f64, cfg: &OracleConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    cfg.validate()?;
    let no_conv = |lo: f64, hi: f64| Error::NoConvergence {
        func,
        iterations: cfg.max_iterations,
        lo,
        hi,
    };

    // geometric bracket search: steps grow as 1, 2, 4, ...
    let (r0, _) = f(start)?;
    if r0 == 0.0 {
        return Ok(start);
    }
    let (mut lo, mut hi);
    let mut step = 1.0f64.max(start.abs() * 0.5);
    let mut prev = start;
    let mut found = false;
    if r0 < 0.0 {
        lo = start;
        hi = start;
        for _ in 0..cfg.max_iterations.max(64) {
            let cand = prev + step;
            if f(cand)?.0 > 0.0 {
                hi = cand;
                found = true;
                break;
            }
            lo = cand;
            prev = cand;
            step *= 2.0;
        }
    } else {
        lo = start;
        hi = start;
        for _ in 0..cfg.max_iterations.max(64) {
            let cand = prev - step;
            if f(cand)?.0 < 0.0 {
                lo = cand;
                found = true;
                break;
            }
            hi = cand;
            prev = cand;
            step *= 2.0;
        }
    }
    if !found {
        return Err(no_conv(lo, hi));
    }

    // safeguarded Newton inside [lo, hi]
    let mut u = 0.5 * (lo + hi);
    for _ in 0..cfg.max_iterations {
        let (r, dr) = f(u)?;
        if r.abs() <= cfg.f_tolerance {
            return Ok(u);
        }
        if r < 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        if hi - lo <= cfg.x_tolerance * scale {
            return Ok(0.5 * (lo + hi));
        }
        let newton = u - r / dr;
        u = if dr > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(no_conv(lo, hi))
}

/// Natural log of the Beta(a, b) p-quantile, solved directly in `log q`.
///
/// Working in `log q` keeps full relative precision both when `q` is
/// astronomically small (small `a`) and when `1 - q` is small (large `a`).
pub fn beta_log_quantile_oracle(query: &QuantileQuery, cfg: &OracleConfig) -> Result<f64> {
    let QuantileQuery { a, b, p } = *query;
    let lbeta = ln_beta(a, b)?;
    let residual = |u: f64| -> Result<(f64, f64)> {
        if u >= 0.0 {
            return Ok((1.0 - p, 0.0));
        }
        let ln_1mx = (-u.exp_m1()).ln();
        let (i, j) = inc_beta_pair(u, ln_1mx, a, b, lbeta)?;
        let r = if i < 0.5 { i - p } else { (1.0 - p) - j };
        let dr = (a * u + (b - 1.0) * ln_1mx - lbeta).exp();
        Ok((r, dr))
    };
    // small-a guess q^a ≈ p a B(a, b), capped below 0
    let guess = (p.ln() + a.ln() + lbeta) / a;
    let start = if guess.is_finite() && guess < 0.0 { guess } else { -1.0 / a };
    let cfg_inner = *cfg;
    let u = solve_increasing("beta_quantile_oracle", residual, start, &cfg_inner)?;
    Ok(u.min(0.0))
}

/// The Beta(a, b) p-quantile `q` with `I_q(a, b) = p`.
pub fn beta_quantile_oracle(query: &QuantileQuery, cfg: &OracleConfig) -> Result<f64> {
    Ok(beta_log_quantile_oracle(query, cfg)?.exp())
}

/// `φ(a) = -a log q(a)` from the oracle quantile.
pub fn phi_oracle(query: &QuantileQuery, cfg: &OracleConfig) -> Result<f64> {
    Ok(-query.a * beta_log_quantile_oracle(query, cfg)?)
}

/// `γ_b`: the (1-p)-quantile of the Gamma(b, 1) distribution, i.e.
/// `P(b, γ_b) = 1 - p`.
pub fn gamma_quantile(b: f64, p: f64, cfg: &OracleConfig) -> Result<f64> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::domain("gamma_quantile", format!("b = {b} must be positive")));
    }
    check_level("gamma_quantile", p)?;
    let lg = log_gamma_unchecked(b);
    let residual = |v: f64| -> Result<(f64, f64)> {
        let x = v.exp();
        let (pl, qu) = reg_gamma_pair(b, x)?;
        let r = if pl < 0.5 { pl - (1.0 - p) } else { p - qu };
        let dr = (b * v - x - lg).exp();
        Ok((r, dr))
    };
    let v = solve_increasing("gamma_quantile", residual, b.ln(), cfg)?;
    Ok(v.exp())
}
