//! Exact arithmetic substrate.
//!
//! Every symbolic recursion in the crate runs on [`Rational`] coefficients;
//! floats only appear when a finished polynomial is evaluated at numeric
//! arguments.

mod bipoly;
mod poly;
mod rational;

use std::ops::{Add, Mul, Neg, Sub};

pub use bipoly::BiPoly;
pub use poly::UniPoly;
pub use rational::{rat_arith, RatOp, Rational};

/// Commutative ring elements the generic combinatorial routines
/// (Bell polynomials, Pochhammer symbols) are written against.
pub trait Scalar:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn is_zero(&self) -> bool;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

/// Binomial coefficient `C(n, k)` as an exact rational (zero for `k > n`).
pub fn binomial(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut acc = num_bigint::BigInt::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    Rational::from_bigint(acc)
}

/// `n!` as an exact rational.
pub fn factorial(n: usize) -> Rational {
    let mut acc = num_bigint::BigInt::from(1u32);
    for i in 2..=n {
        acc *= i;
    }
    Rational::from_bigint(acc)
}
