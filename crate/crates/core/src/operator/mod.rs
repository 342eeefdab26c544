//! Normal ordering by rewriting. This is the independent oracle for every
//! Stirling-type coefficient computed elsewhere by recurrence.

mod engine;
mod expr;

pub use engine::{
    abstract_power_vu, apply_to_poly, binomial_pair, extract_stirling, nc_binomial_expand,
    touchard_generator, Algebra,
};
pub use expr::{NormalTerm, OperatorExpr};
