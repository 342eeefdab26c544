use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{Monomial, Polynomial, Rational, Var};
use crate::operator::{apply_to_poly, OperatorExpr};
use crate::pqcore::{choose2, exp_series, exp_series_scaled, negated, ExpKind, TruncatedSeries};
use crate::stirling::{StirlingKind, StirlingTable, StirlingVariant};

/// `T^{(m)}_n(x)` with coefficients in `p, q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TouchardPoly {
    pub n: u32,
    pub m: i64,
    pub value: Polynomial,
}

pub(crate) fn p_pow(e: i64) -> Polynomial {
    Polynomial::var_pow(Var::P, e as i32)
}

pub(crate) fn tilde_table(m: i64, max_n: usize) -> Result<StirlingTable> {
    StirlingTable::new(StirlingVariant::tilde(StirlingKind::Touchard { m }), max_n)
}

/// `x^{n(m-1)} sum_k p^{C(k,2)} S^{(m)}(n, k) x^k`, or `p^{C(n,2)}` when
/// `m = 0`.
pub fn touchard_symbolic(n: u32, m: i64) -> TouchardPoly {
    let value = if m == 0 {
        p_pow(choose2(n as i64))
    } else {
        let mut table = tilde_table(m, n as usize).expect("m is nonzero");
        table
            .bell(n as usize, &Polynomial::var(Var::X))
            .mul_monomial(&Monomial::var_pow(Var::X, (n as i64 * (m - 1)) as i32))
    };
    TouchardPoly { n, m, value }
}

/// `X^m D_{p,q}` applied to a power series. Needs `m >= 0`; the known
/// order changes from `N` to `N - 1 + m`.
fn apply_xmd(series: &TruncatedSeries, m: i64) -> Result<TruncatedSeries> {
    if m < 0 {
        return Err(Error::Unsupported("negative X-powers in series arithmetic".into()));
    }
    Ok(series.derivative()?.shift(m as usize))
}

/// `E_{p,q}(-p^n x) (X^m D)^n e_{p,q}(x)` in truncated series arithmetic,
/// starting from `e_{p,q}` known through `x^order`.
pub fn touchard_by_series(n: u32, m: i64, order: usize) -> Result<TruncatedSeries> {
    if order < n as usize {
        return Err(Error::InvalidArgument("series order must be at least n".into()));
    }
    let mut s = exp_series(ExpKind::LowerE, order);
    for _ in 0..n {
        s = apply_xmd(&s, m)?;
    }
    let e = exp_series_scaled(ExpKind::UpperE, s.order(), &negated(p_pow(n as i64)));
    Ok(e.mul(&s))
}

/// Which coefficient multiplies `N_p` in the Touchard recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecurrenceForm {
    /// `x^m (p^n N_p + E(-p^{n+1}x) e(p^n q x) D) T_n`, from the Leibniz
    /// rule with `D e(p^n x) = p^n e(p^{n+1} x)`.
    Derived,
    /// `x^m (N_p + E(-p^{n+1}x) e(p^n q x) D) T_n`, as usually displayed.
    Display,
}

/// Series coefficients of `T_{n+1} - x^m (c N_p + E(-p^{n+1}x) e(p^n q x) D) T_n`
/// through `x^order`, with `c` chosen by `form`. Needs `m >= 0`.
pub fn touchard_recurrence_residual(
    n: u32,
    m: i64,
    order: usize,
    form: RecurrenceForm,
) -> Result<TruncatedSeries> {
    if m < 0 {
        return Err(Error::Unsupported("recurrence residual needs m >= 0".into()));
    }
    let t_n = touchard_symbolic(n, m).value;
    let t_next = touchard_symbolic(n + 1, m).value;
    let c = match form {
        RecurrenceForm::Derived => p_pow(n as i64),
        RecurrenceForm::Display => Polynomial::one(),
    };
    let dilated = apply_to_poly(&OperatorExpr::n_pow(1), &t_n);
    let derived = apply_to_poly(&OperatorExpr::d_pow(1), &t_n);
    let big_e = exp_series_scaled(ExpKind::UpperE, order, &negated(p_pow(n as i64 + 1)));
    let small_e = exp_series_scaled(
        ExpKind::LowerE,
        order,
        &Polynomial::monomial(1, &[(Var::P, n as i32), (Var::Q, 1)]),
    );
    let inner = big_e
        .mul(&small_e)
        .mul_polynomial(&derived)?
        .add(&TruncatedSeries::from_polynomial(&(&c * &dilated), order)?);
    let rhs = inner.shift(m as usize).truncate(order);
    Ok(TruncatedSeries::from_polynomial(&t_next, order)?.sub(&rhs))
}

/// Leading coefficient law: the `x^{nm}` coefficient is `(p q^m)^{C(n,2)}`.
pub fn top_coefficient(n: u32, m: i64) -> Polynomial {
    let e = choose2(n as i64) as i32;
    Polynomial::term(
        Rational::from_integer(1.into()),
        Monomial::new([e, e * m as i32, 0, 0]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(touchard_symbolic(4, 0).value, p_pow(6));
        let two = &Polynomial::var(Var::X) + &Polynomial::monomial(1, &[(Var::P, 1), (Var::Q, 1), (Var::X, 2)]);
        assert_eq!(touchard_symbolic(2, 1).value, two);
        for m in [-2, -1, 1, 2, 3] {
            assert_eq!(touchard_symbolic(1, m).value, Polynomial::var_pow(Var::X, m as i32));
            assert_eq!(touchard_symbolic(0, m).value, Polynomial::one());
        }
    }

    #[test]
    fn top_coefficients() {
        for m in 1..=3 {
            for n in 0..=5u32 {
                let t = touchard_symbolic(n, m).value;
                let top = Monomial::var_pow(Var::X, (n as i64 * m) as i32);
                let got: Polynomial = t
                    .terms()
                    .filter(|(mono, _)| mono.exp(Var::X) == top.exp(Var::X))
                    .map(|(mono, c)| Polynomial::term(c.clone(), mono.with_exp(Var::X, 0)))
                    .sum();
                assert_eq!(got, top_coefficient(n, m), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn series_definition_agrees() {
        for m in 1..=2 {
            for n in 0..=3u32 {
                let t = touchard_symbolic(n, m).value;
                let s = touchard_by_series(n, m, 8).unwrap();
                assert!(s.agrees_with(&t).unwrap(), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn recurrence_residual_vanishes() {
        for (n, m) in [(0, 1), (2, 1), (1, 2)] {
            let r = touchard_recurrence_residual(n, m, 8, RecurrenceForm::Derived).unwrap();
            assert!(r.is_zero(), "n={n} m={m}");
        }
    }

    #[test]
    fn displayed_recurrence_misses_factor() {
        assert!(touchard_recurrence_residual(0, 1, 6, RecurrenceForm::Display).unwrap().is_zero());
        assert!(!touchard_recurrence_residual(1, 1, 6, RecurrenceForm::Display).unwrap().is_zero());
    }
}
