use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Rational, Scalar};
use crate::error::{Error, Result};

/// Sparse polynomial in `b`, Laurent polynomial in `γ` (written `g` in
/// debug output), with exact rational coefficients.
///
/// Keys are `(deg_b, deg_γ)`; `deg_γ` may be negative. Zero coefficients are
/// never stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, i32), Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        BiPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        BiPoly::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rational, deg_b: u32, deg_g: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((deg_b, deg_g), c);
        }
        BiPoly { terms }
    }

    /// The symbol `b`.
    pub fn b() -> Self {
        BiPoly::monomial(Rational::one(), 1, 0)
    }

    /// The symbol `γ_b`.
    pub fn gamma() -> Self {
        BiPoly::monomial(Rational::one(), 0, 1)
    }

    /// `γ_b^e` for any integer `e`.
    pub fn gamma_pow(e: i32) -> Self {
        BiPoly::monomial(Rational::one(), 0, e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in `(deg_b, deg_γ)` lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, i32, &Rational)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn coeff(&self, deg_b: u32, deg_g: i32) -> Rational {
        self.terms
            .get(&(deg_b, deg_g))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn min_gamma_degree(&self) -> Option<i32> {
        self.terms.keys().map(|&(_, j)| j).min()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(&key, c)| (key, c * k)).collect(),
        }
    }

    fn accumulate(terms: &mut BTreeMap<(u32, i32), Rational>, key: (u32, i32), c: Rational) {
        use std::collections::btree_map::Entry;
        match terms.entry(key) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn add_ref(&self, rhs: &BiPoly, sign: bool) -> BiPoly {
        let mut terms = self.terms.clone();
        for (&key, c) in &rhs.terms {
            BiPoly::accumulate(&mut terms, key, if sign { c.clone() } else { -c });
        }
        BiPoly { terms }
    }

    fn mul_ref(&self, rhs: &BiPoly) -> BiPoly {
        let mut terms = BTreeMap::new();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                BiPoly::accumulate(&mut terms, (i1 + i2, j1 + j2), c1 * c2);
            }
        }
        BiPoly { terms }
    }

    /// Float evaluation: Horner in `γ` within each `b`-degree group, then
    /// Horner in `b`. Coefficients are converted to binary64 here only.
    pub fn eval(&self, b: f64, gamma: f64) -> Result<f64> {
        if self.is_zero() {
            return Ok(0.0);
        }
        let min_j = self.min_gamma_degree().unwrap_or(0);
        if gamma == 0.0 && min_j < 0 {
            return Err(Error::ZeroGammaNegativeExponent);
        }
        // group by b-degree; each group is a Laurent polynomial in γ
        let mut by_b: BTreeMap<u32, Vec<(i32, f64)>> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            by_b.entry(i).or_default().push((j, c.to_f64()));
        }
        let max_i = *by_b.keys().next_back().unwrap_or(&0);
        let mut acc = horner_laurent(&by_b[&max_i], gamma);
        for i in (0..max_i).rev() {
            let g = by_b.get(&i).map_or(0.0, |group| horner_laurent(group, gamma));
            acc = acc * b + g;
        }
        Ok(acc)
    }

    /// Exact evaluation at rational `(b, γ)`.
    pub fn eval_exact(&self, b: &Rational, gamma: &Rational) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            if gamma.is_zero() && j < 0 {
                return Err(Error::ZeroGammaNegativeExponent);
            }
            acc = acc + c * &b.powi(i as i32)? * gamma.powi(j)?;
        }
        Ok(acc)
    }

    /// Substitutes a rational value for `b`, leaving a Laurent polynomial in `γ`.
    pub fn substitute_b(&self, b: &Rational) -> BiPoly {
        let mut terms = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            let v = c * &b.powi(i as i32).expect("nonnegative exponent");
            BiPoly::accumulate(&mut terms, (0, j), v);
        }
        BiPoly { terms }
    }

    /// Canonical monomial list `coeff * b^i * γ^j`, sorted by `(i, j)`.
    pub fn monomial_strings(&self) -> Vec<String> {
        self.terms
            .iter()
            .map(|(&(i, j), c)| format!("{c} * b^{i} * γ^{j}"))
            .collect()
    }
}

fn horner_laurent(group: &[(i32, f64)], gamma: f64) -> f64 {
    // group is sorted by ascending j because the BTreeMap iterates that way
    let min_j = group[0].0;
    let max_j = group[group.len() - 1].0;
    // start from the leading coefficient so an absent γ is never touched
    let mut idx = group.len() - 1;
    let mut acc = group[idx].1;
    for j in (min_j..max_j).rev() {
        let c = if idx > 0 && group[idx - 1].0 == j {
            idx -= 1;
            group[idx].1
        } else {
            0.0
        };
        acc = acc * gamma + c;
    }
    acc * gamma.powi(min_j)
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| format!("{c}*b^{i}*g^{j}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", self.monomial_strings().join(" + "))
    }
}

macro_rules! bipoly_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&BiPoly> for &BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: &BiPoly) -> BiPoly {
                $body(self, rhs)
            }
        }
        impl $tr<BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: BiPoly) -> BiPoly {
                $body(&self, &rhs)
            }
        }
        impl $tr<&BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: &BiPoly) -> BiPoly {
                $body(&self, rhs)
            }
        }
    };
}

bipoly_binop!(Add, add, |a: &BiPoly, b: &BiPoly| a.add_ref(b, true));
bipoly_binop!(Sub, sub, |a: &BiPoly, b: &BiPoly| a.add_ref(b, false));
bipoly_binop!(Mul, mul, |a: &BiPoly, b: &BiPoly| a.mul_ref(b));

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl Scalar for BiPoly {
    fn zero() -> Self {
        BiPoly::zero()
    }
    fn one() -> Self {
        BiPoly::one()
    }
    fn from_i64(n: i64) -> Self {
        BiPoly::constant(Rational::from_i64(n))
    }
    fn from_rational(r: &Rational) -> Self {
        BiPoly::constant(r.clone())
    }
    fn is_zero(&self) -> bool {
        BiPoly::is_zero(self)
    }
}
