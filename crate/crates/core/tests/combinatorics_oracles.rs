//! Combinatorial objects against independent constructions: power-series
//! inversion for Bernoulli numbers, k-fold convolutions for Nørlund
//! polynomials, partition enumeration for Bell polynomials.

use betaquant::combinatorics::*;
use betaquant::exactmath::{binomial, factorial, Rational, UniPoly};
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

/// `n! [xⁿ] x / (eˣ - 1)`, by inverting `Σ xᵏ / (k+1)!` term by term.
fn bernoulli_by_series_inversion(n_max: usize) -> Vec<Rational> {
    let a: Vec<Rational> = (0..=n_max)
        .map(|k| factorial(k + 1).recip().unwrap())
        .collect();
    let mut c = vec![Rational::one()];
    for n in 1..=n_max {
        let s = (1..=n).fold(Rational::zero(), |acc, k| acc + &a[k] * &c[n - k]);
        c.push(-s);
    }
    c.into_iter()
        .enumerate()
        .map(|(n, cn)| cn * factorial(n))
        .collect()
}

#[test]
fn bernoulli_numbers_match_series_inversion() {
    for (n, want) in bernoulli_by_series_inversion(20).into_iter().enumerate() {
        assert_eq!(bernoulli_number(n), want, "n = {n}");
    }
}

#[test]
fn bernoulli_polynomial_examples() {
    assert_eq!(bernoulli_polynomial(0), UniPoly::constant(Rational::one()));
    assert_eq!(
        bernoulli_polynomial(1),
        UniPoly::from_coeffs(vec![r(-1, 2), Rational::one()])
    );
    assert_eq!(
        bernoulli_polynomial(2),
        UniPoly::from_coeffs(vec![r(1, 6), r(-1, 1), Rational::one()])
    );
    for n in 0..12 {
        assert_eq!(bernoulli_polynomial(n).eval(&Rational::zero()), bernoulli_number(n));
    }
}

/// `B_n^{(k)}` for `k = 0..=k_max` by repeated exponential convolution with
/// the Bernoulli numbers.
fn norlund_by_convolution(n: usize, k_max: usize) -> Vec<Rational> {
    let mut cur: Vec<Rational> = (0..=n)
        .map(|m| if m == 0 { Rational::one() } else { Rational::zero() })
        .collect();
    let mut out = vec![cur[n].clone()];
    for _ in 0..k_max {
        cur = (0..=n)
            .map(|m| {
                (0..=m).fold(Rational::zero(), |acc, j| {
                    acc + binomial(m, j) * &cur[j] * bernoulli_number(m - j)
                })
            })
            .collect();
        out.push(cur[n].clone());
    }
    out
}

#[test]
fn norlund_matches_convolutions() {
    // a degree-n polynomial is pinned down by n+1 values, so this checks the
    // whole polynomial, not just the sample points
    for n in 0..=12 {
        let poly = norlund_polynomial(n);
        assert_eq!(poly.poly.degree(), Some(n));
        for (k, want) in norlund_by_convolution(n, n).into_iter().enumerate() {
            assert_eq!(poly.eval(&Rational::from_i64(k as i64)), want, "n = {n}, c = {k}");
        }
        // (x/(e^x-1))^{-1} = Σ xᵏ/(k+1)!  ⇒  B_n^{(-1)} = 1/(n+1)
        assert_eq!(poly.eval(&Rational::from_i64(-1)), r(1, n as i64 + 1));
    }
}

#[test]
fn norlund_examples() {
    assert_eq!(norlund_polynomial(0).poly, UniPoly::constant(Rational::one()));
    assert_eq!(norlund_polynomial(1).poly, UniPoly::x().scale(&r(-1, 2)));
    assert_eq!(norlund_polynomial(2).eval(&Rational::one()), r(1, 6));
    // leading coefficient (-1/2)^n: (x/(e^x-1))^c ≈ e^{-cx/2} for large c
    for n in 0..=10 {
        let lead = norlund_polynomial(n).poly.coeff(n);
        assert_eq!(lead, r(-1, 2).powi(n as i32).unwrap());
    }
}

/// `𝓑_n` by summing over all partitions of `n`.
fn bell_by_partitions(n: usize, x: &[Rational]) -> Rational {
    fn go(
        rest: usize,
        max_part: usize,
        counts: &mut Vec<usize>,
        n: usize,
        x: &[Rational],
        acc: &mut Rational,
    ) {
        if rest == 0 {
            let mut term = factorial(n);
            for (j, &k) in counts.iter().enumerate().skip(1) {
                if k == 0 {
                    continue;
                }
                let base = &x[j - 1] * factorial(j).recip().unwrap();
                term = term * base.powi(k as i32).unwrap() * factorial(k).recip().unwrap();
            }
            *acc = &*acc + &term;
            return;
        }
        for part in (1..=max_part.min(rest)).rev() {
            counts[part] += 1;
            go(rest - part, part, counts, n, x, acc);
            counts[part] -= 1;
        }
    }
    let mut acc = Rational::zero();
    let mut counts = vec![0; n + 1];
    go(n, n, &mut counts, n, x, &mut acc);
    if n == 0 {
        Rational::one()
    } else {
        acc
    }
}

fn small_rationals(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-9i64..=9, 1i64..=5), len)
        .prop_map(|v| v.into_iter().map(|(a, b)| r(a, b)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bell_matches_partition_enumeration(x in small_rationals(8)) {
        for n in 0..=8 {
            prop_assert_eq!(complete_bell(n, &x[..n]).unwrap(), bell_by_partitions(n, &x));
        }
    }

    #[test]
    fn bell_satisfies_recurrence(x in small_rationals(13)) {
        let seq = complete_bell_sequence(&x);
        for n in 0..12 {
            let rhs = (0..=n).fold(Rational::zero(), |acc, k| {
                acc + binomial(n, k) * &seq[n - k] * &x[k]
            });
            prop_assert_eq!(&seq[n + 1], &rhs);
        }
    }
}

#[test]
fn bell_examples() {
    let x = [r(2, 1), r(3, 1), r(5, 1)];
    assert_eq!(complete_bell(0, &x[..0]).unwrap(), Rational::one());
    assert_eq!(complete_bell(1, &x[..1]).unwrap(), r(2, 1));
    assert_eq!(complete_bell(2, &x[..2]).unwrap(), r(7, 1));
    assert_eq!(complete_bell(3, &x).unwrap(), r(31, 1));
    assert!(complete_bell(2, &x).is_err());
    let xf = [0.5, -1.25];
    assert_eq!(complete_bell(2, &xf).unwrap(), 0.25 - 1.25);
}

#[test]
fn pochhammer_examples() {
    assert_eq!(pochhammer(&r(7, 3), 0), Rational::one());
    assert_eq!(pochhammer(&r(3, 1), 2), r(12, 1));
    assert_eq!(pochhammer(&r(-2, 1), 3), Rational::zero());
    assert_eq!(pochhammer(&2.5f64, 2), 2.5 * 3.5);
}

#[test]
fn identities_hold_through_ten() {
    let report = check_norlund_bell_identity(10);
    assert_eq!(report.rows.len(), 10);
    for row in &report.rows {
        assert!(row.passed(), "{row:?}");
    }
    assert!(check_identities_at(0).passed());
}

#[test]
fn reflected_identity_parses() {
    use betaquant::combinatorics::reflected_identity_parses as parses;
    for n in 1..=8 {
        let v = parses(n);
        assert!(v.outer_weighted && v.grouped_weighted, "n = {n}: {v:?}");
    }
    // the printed, unweighted arguments do not give the identity
    let v = parses(2);
    assert!(!v.outer_unweighted && !v.grouped_unweighted);
}
