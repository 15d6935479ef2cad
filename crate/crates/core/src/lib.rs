//! Asymptotic expansions of the Beta-distribution p-quantile `q(a)` as a
//! function of the first shape parameter `a`, for `a -> 0` and `a -> inf`.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactmath`]: exact rationals, dense univariate polynomials and the
//!   sparse `(b, γ_b)` Laurent polynomials the symbolic recursions run on.
//! * [`combinatorics`]: Bernoulli numbers and polynomials, complete Bell
//!   polynomials, Nørlund polynomials, Pochhammer symbols and the exact
//!   Bell/Nørlund identity checks.
//! * [`special`]: binary64 log-gamma, polygamma, regularized incomplete
//!   beta/gamma and their bracketed inverses, which act as the numerical
//!   oracle for `q(a)` and `γ_b`.
//! * [`expansion_zero`] / [`expansion_inf`]: the two expansions of
//!   `φ(a) = -a log q(a)` and the derived expansions of `q(a)`.
//! * [`cli`]: the command-line front end.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod exactmath;
pub mod expansion_inf;
pub mod expansion_zero;
pub mod special;

pub use error::{Error, Result};
