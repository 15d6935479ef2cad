//! Bernoulli numbers and polynomials, complete Bell polynomials, Nørlund
//! polynomials and Pochhammer symbols, all in exact arithmetic.

use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exactmath::{binomial, factorial, Rational, Scalar, UniPoly};

/// Append-only memo of Bernoulli numbers `B_n` (with `B_1 = -1/2`), filled
/// through `sum_{k=0}^{n} C(n+1, k) B_k = 0`.
#[derive(Debug, Default)]
pub struct BernoulliCache {
    values: Mutex<Vec<Rational>>,
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache {
            values: Mutex::new(vec![Rational::one()]),
        }
    }

    pub fn get(&self, n: usize) -> Rational {
        let mut values = self.values.lock().unwrap_or_else(|e| e.into_inner());
        if values.is_empty() {
            values.push(Rational::one());
        }
        while values.len() <= n {
            let m = values.len();
            if m > 1 && m % 2 == 1 {
                values.push(Rational::zero());
                continue;
            }
            // B_m = -1/(m+1) * sum_{k<m} C(m+1, k) B_k
            let s = values
                .iter()
                .enumerate()
                .fold(Rational::zero(), |acc, (k, bk)| acc + binomial(m + 1, k) * bk);
            let bm = -(s * Rational::new(1, m as i64 + 1).expect("nonzero"));
            values.push(bm);
        }
        values[n].clone()
    }

    pub fn len(&self) -> usize {
        self.values.lock().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn global_bernoulli() -> &'static BernoulliCache {
    static CACHE: OnceLock<BernoulliCache> = OnceLock::new();
    CACHE.get_or_init(BernoulliCache::new)
}

/// Exact Bernoulli number `B_n`, memoized process-wide.
pub fn bernoulli_number(n: usize) -> Rational {
    global_bernoulli().get(n)
}

/// Bernoulli polynomial `B_n(t) = sum_k C(n, k) B_{n-k} t^k`.
pub fn bernoulli_polynomial(n: usize) -> UniPoly {
    UniPoly::from_coeffs(
        (0..=n)
            .map(|k| binomial(n, k) * bernoulli_number(n - k))
            .collect(),
    )
}

/// All complete Bell polynomials `𝓑_0, ..., 𝓑_n` of the argument prefix
/// `x[..n]`, via `𝓑_{m+1} = sum_{k=0}^{m} C(m, k) 𝓑_{m-k} x_{k+1}`.
pub fn complete_bell_sequence<T: Scalar>(x: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(x.len() + 1);
    out.push(T::one());
    for m in 0..x.len() {
        let mut acc = T::zero();
        for k in 0..=m {
            if x[k].is_zero() || out[m - k].is_zero() {
                continue;
            }
            let c = T::from_rational(&binomial(m, k));
            acc = acc + c * &out[m - k] * &x[k];
        }
        out.push(acc);
    }
    out
}

/// Complete Bell polynomial `𝓑_n(x_1, ..., x_n)`; `x` must have length `n`.
pub fn complete_bell<T: Scalar>(n: usize, x: &[T]) -> Result<T> {
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: x.len(),
        });
    }
    Ok(complete_bell_sequence(x).pop().expect("nonempty"))
}

/// Rising factorial `(m)_n = m (m+1) ... (m+n-1)`, `(m)_0 = 1`.
pub fn pochhammer<T: Scalar>(m: &T, n: usize) -> T {
    let mut acc = T::one();
    for i in 0..n {
        acc = acc * (m.clone() + T::from_i64(i as i64));
    }
    acc
}

/// Nørlund polynomial `B_n^{(c)}`, the coefficient of `x^n / n!` in
/// `(x / (e^x - 1))^c`, as an exact polynomial in `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NorlundPoly {
    pub n: usize,
    pub poly: UniPoly,
}

impl NorlundPoly {
    pub fn eval(&self, c: &Rational) -> Rational {
        self.poly.eval(c)
    }

    /// `B_n^{(1-b)}` as a bivariate polynomial in `b`.
    pub fn at_one_minus_b(&self) -> crate::exactmath::BiPoly {
        use crate::exactmath::BiPoly;
        self.poly.substitute(&(BiPoly::one() - BiPoly::b()))
    }
}

/// Bell arguments `(-1)^{j+1} c B_j / j`, `j = 1..=n`: the Taylor
/// coefficients (times `j!`) of `c log(x / (e^x - 1))`.
fn norlund_bell_arguments(n: usize) -> Vec<UniPoly> {
    (1..=n)
        .map(|j| {
            let sign = if j % 2 == 1 { 1 } else { -1 };
            let k = bernoulli_number(j) * Rational::new(sign, j as i64).expect("nonzero");
            UniPoly::x().scale(&k)
        })
        .collect()
}

/// `B_0^{(c)}, ..., B_{n_max}^{(c)}` from a single Bell recurrence pass.
pub fn norlund_sequence(n_max: usize) -> Vec<NorlundPoly> {
    complete_bell_sequence(&norlund_bell_arguments(n_max))
        .into_iter()
        .enumerate()
        .map(|(n, poly)| NorlundPoly { n, poly })
        .collect()
}

pub fn norlund_polynomial(n: usize) -> NorlundPoly {
    norlund_sequence(n).pop().expect("nonempty")
}

/// Per-`n` verdicts of the exact Bell/Nørlund identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityRow {
    pub n: usize,
    /// `B_n^{(c)} = 𝓑_n(c B_1, -c B_2 / 2, 0, -c B_4 / 4, ...)`.
    pub norlund_bell: bool,
    /// `(b)_n B_n^{(1-b)} = 𝓑_n(y_1, ..., y_n)` with
    /// `y_j = (j-1)!/(j+1) (B_{j+1}(b) - B_{j+1})`.
    pub gamma_ratio: bool,
    /// `(c-n)_n B_n^{(c)} = (-1)^n 𝓑_n(z_1, ..., z_n)` with
    /// `z_j = (j-1)!/(j+1) ((-1)^{j+1} B_{j+1}(c) - B_{j+1})`.
    pub reflected: bool,
}

impl IdentityRow {
    pub fn passed(&self) -> bool {
        self.norlund_bell && self.gamma_ratio && self.reflected
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub rows: Vec<IdentityRow>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(IdentityRow::passed)
    }
}

/// Weight `(j-1)!/(j+1)` on the `j`-th Bell argument of the gamma-ratio
/// identities: `𝓑_n` is applied to `lim D^j log(Γ(a) a^b / Γ(a+b))`, not to
/// the bare Bernoulli differences.
fn ratio_weight(j: usize) -> Rational {
    factorial(j - 1) * Rational::new(1, j as i64 + 1).expect("nonzero")
}

fn bernoulli_difference(j: usize) -> UniPoly {
    bernoulli_polynomial(j) - UniPoly::constant(bernoulli_number(j))
}

/// `1 - x` as a polynomial.
fn one_minus_x() -> UniPoly {
    UniPoly::constant(Rational::one()) - UniPoly::x()
}

/// Checks the three identities at a single `n` (including `n = 0`).
pub fn check_identities_at(n: usize) -> IdentityRow {
    let norlund = norlund_polynomial(n);

    let bell_args = norlund_bell_arguments(n);
    let norlund_bell = complete_bell(n, &bell_args).expect("length n") == norlund.poly;

    let x = UniPoly::x();
    let lhs_ratio = pochhammer(&x, n) * norlund.poly.compose(&one_minus_x());
    let ratio_args: Vec<UniPoly> = (1..=n)
        .map(|j| bernoulli_difference(j + 1).scale(&ratio_weight(j)))
        .collect();
    let gamma_ratio = complete_bell(n, &ratio_args).expect("length n") == lhs_ratio;

    let shifted = x.clone() - UniPoly::from_i64(n as i64);
    let lhs_reflected = pochhammer(&shifted, n) * &norlund.poly;
    let refl_args: Vec<UniPoly> = (1..=n)
        .map(|j| {
            let bp = bernoulli_polynomial(j + 1);
            let signed = if (j + 1) % 2 == 0 { bp } else { -bp };
            (signed - UniPoly::constant(bernoulli_number(j + 1))).scale(&ratio_weight(j))
        })
        .collect();
    let mut rhs_reflected = complete_bell(n, &refl_args).expect("length n");
    if n % 2 == 1 {
        rhs_reflected = -rhs_reflected;
    }
    let reflected = rhs_reflected == lhs_reflected;

    IdentityRow {
        n,
        norlund_bell,
        gamma_ratio,
        reflected,
    }
}

/// Exact identity checks for `n = 1..=n_max`.
pub fn check_norlund_bell_identity(n_max: usize) -> IdentityReport {
    IdentityReport {
        rows: (1..=n_max).map(check_identities_at).collect(),
    }
}

/// Verdicts for the two readings of the reflected identity's arguments:
/// `(-1)^{j+1} B_{j+1}(c) - B_{j+1}` (outer) versus
/// `(-1)^{j+1} (B_{j+1}(c) - B_{j+1})` (grouped), each with and without the
/// `(j-1)!/(j+1)` weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReflectedParses {
    pub outer_weighted: bool,
    pub grouped_weighted: bool,
    pub outer_unweighted: bool,
    pub grouped_unweighted: bool,
}

pub fn reflected_identity_parses(n: usize) -> ReflectedParses {
    let x = UniPoly::x();
    let shifted = x - UniPoly::from_i64(n as i64);
    let lhs = pochhammer(&shifted, n) * norlund_polynomial(n).poly;
    let check = |grouped: bool, weighted: bool| {
        let args: Vec<UniPoly> = (1..=n)
            .map(|j| {
                let bp = bernoulli_polynomial(j + 1);
                let bn = UniPoly::constant(bernoulli_number(j + 1));
                let odd = (j + 1) % 2 == 1;
                let arg = match (grouped, odd) {
                    (false, false) => bp - bn,
                    (false, true) => -bp - bn,
                    (true, false) => bp - bn,
                    (true, true) => -(bp - bn),
                };
                if weighted {
                    arg.scale(&ratio_weight(j))
                } else {
                    arg
                }
            })
            .collect();
        let mut rhs = complete_bell(n, &args).expect("length n");
        if n % 2 == 1 {
            rhs = -rhs;
        }
        rhs == lhs
    };
    ReflectedParses {
        outer_weighted: check(false, true),
        grouped_weighted: check(true, true),
        outer_unweighted: check(false, false),
        grouped_unweighted: check(true, false),
    }
}
