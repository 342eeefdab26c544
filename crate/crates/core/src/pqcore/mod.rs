//! (p,q)-special functions: twin-basic numbers, factorials, Gaussian and
//! (q,h)-binomials, deformed exponentials as truncated series, and the
//! real-argument kernels.

mod brackets;
pub mod real;
mod series;

pub use brackets::{
    binomial_base, bracket_in, factorial_in, gauss_binomial_in, h_param, pq_factorial,
    pq_gauss_binomial, pq_number, pq_number_base_power, qh_binomial, scaled_qh_binomial,
    t_gauss_binomial, t_number, HParam,
};
pub use real::{pq_number_real, Precision};
pub use series::{exp_series, exp_series_scaled, negated, ExpKind, TruncatedSeries};

/// `C(k, 2)` as an exponent.
pub fn choose2(k: i64) -> i64 {
    k * (k - 1) / 2
}
