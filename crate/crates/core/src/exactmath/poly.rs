use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{BiPoly, Rational, Scalar};

/// Dense univariate polynomial with exact rational coefficients; index `i`
/// holds the coefficient of `x^i`. Trailing zeros are never stored, so the
/// zero polynomial has no coefficients and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    /// The indeterminate itself.
    pub fn x() -> Self {
        UniPoly::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    /// Substitutes a polynomial for the indeterminate (Horner).
    pub fn compose(&self, arg: &UniPoly) -> UniPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(UniPoly::zero(), |acc, c| acc * arg + UniPoly::constant(c.clone()))
    }

    /// Substitutes a bivariate polynomial for the indeterminate, e.g. `c = 1 - b`.
    pub fn substitute(&self, arg: &BiPoly) -> BiPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(BiPoly::zero(), |acc, c| acc * arg + BiPoly::constant(c.clone()))
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => c.to_string(),
                1 => format!("{c}*{var}"),
                _ => format!("{c}*{var}^{i}"),
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("x"))
    }
}

fn add_coeffs(a: &[Rational], b: &[Rational], negate_b: bool) -> UniPoly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
        let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
        out.push(if negate_b { x - y } else { x + y });
    }
    UniPoly::from_coeffs(out)
}

fn mul_coeffs(a: &[Rational], b: &[Rational]) -> UniPoly {
    if a.is_empty() || b.is_empty() {
        return UniPoly::zero();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    UniPoly::from_coeffs(out)
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&UniPoly> for &UniPoly {
            type Output = UniPoly;
            fn $method(self, rhs: &UniPoly) -> UniPoly {
                $body(&self.coeffs, &rhs.coeffs)
            }
        }
        impl $tr<UniPoly> for UniPoly {
            type Output = UniPoly;
            fn $method(self, rhs: UniPoly) -> UniPoly {
                $body(&self.coeffs, &rhs.coeffs)
            }
        }
        impl $tr<&UniPoly> for UniPoly {
            type Output = UniPoly;
            fn $method(self, rhs: &UniPoly) -> UniPoly {
                $body(&self.coeffs, &rhs.coeffs)
            }
        }
    };
}

poly_binop!(Add, add, |a, b| add_coeffs(a, b, false));
poly_binop!(Sub, sub, |a, b| add_coeffs(a, b, true));
poly_binop!(Mul, mul, mul_coeffs);

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Scalar for UniPoly {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::constant(Rational::one())
    }
    fn from_i64(n: i64) -> Self {
        UniPoly::constant(Rational::from_i64(n))
    }
    fn from_rational(r: &Rational) -> Self {
        UniPoly::constant(r.clone())
    }
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
}
