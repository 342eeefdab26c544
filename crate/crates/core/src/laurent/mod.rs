//! Exact Laurent polynomials and rational functions in `p, q, h, x` over
//! unbounded rationals. This is the coefficient ring for everything else in
//! the crate.

mod monomial;
mod polynomial;
mod ratfunc;

use std::collections::BTreeMap;

pub use monomial::{Monomial, Var};
pub use polynomial::{rational_pow, Polynomial, TermRecord};
pub use ratfunc::{rf_equal, RationalFunction};

pub type Rational = num_rational::BigRational;

/// Assignment of rational values to variables.
pub type Point = BTreeMap<Var, Rational>;

/// Convenience constructor: `point(&[(Var::P, 2, 1), (Var::Q, 1, 3)])` is
/// `{p: 2, q: 1/3}`.
pub fn point(values: &[(Var, i64, i64)]) -> Point {
    values
        .iter()
        .map(|&(v, n, d)| (v, ratio(n, d)))
        .collect()
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
