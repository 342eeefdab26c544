use num_traits::One;
use serde::{Deserialize, Serialize};

use super::brackets::pq_number;
use crate::error::{Error, Result};
use crate::laurent::{Monomial, Polynomial, Rational, RationalFunction, Var};

/// Power series in `x` known through `x^order`, with rational-function
/// coefficients in `p, q, h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    order: usize,
    coeffs: Vec<RationalFunction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpKind {
    /// `e_{p,q}(x) = sum p^{C(n,2)} x^n / [n]!`
    LowerE,
    /// `E_{p,q}(x) = sum q^{C(n,2)} x^n / [n]!`
    UpperE,
}

fn choose2(k: usize) -> i32 {
    (k * k.saturating_sub(1) / 2) as i32
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            order,
            coeffs: vec![RationalFunction::zero(); order + 1],
        }
    }

    pub fn new(order: usize, mut coeffs: Vec<RationalFunction>) -> Self {
        coeffs.resize(order + 1, RationalFunction::zero());
        TruncatedSeries { order, coeffs }
    }

    /// A polynomial in `x` (nonnegative powers), truncated at `order`.
    pub fn from_polynomial(f: &Polynomial, order: usize) -> Result<Self> {
        let mut coeffs = vec![Polynomial::zero(); order + 1];
        for (m, c) in f.terms() {
            let e = m.exp(Var::X);
            if e < 0 {
                return Err(Error::InvalidArgument(
                    "series conversion needs nonnegative powers of x".into(),
                ));
            }
            if let Some(slot) = coeffs.get_mut(e as usize) {
                slot.add_term(m.with_exp(Var::X, 0), c.clone());
            }
        }
        Ok(TruncatedSeries {
            order,
            coeffs: coeffs.into_iter().map(Into::into).collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &RationalFunction {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RationalFunction::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        TruncatedSeries {
            order,
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let coeffs = (0..=order).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect();
        TruncatedSeries { order, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let coeffs = (0..=order).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect();
        TruncatedSeries { order, coeffs }
    }

    /// Cauchy product truncated at the smaller order. Summation starts at
    /// `i = 0` so the first term's denominator usually absorbs the rest.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let coeffs = (0..=order)
            .map(|n| {
                (0..=n)
                    .filter(|&i| !self.coeffs[i].is_zero() && !other.coeffs[n - i].is_zero())
                    .map(|i| &self.coeffs[i] * &other.coeffs[n - i])
                    .sum()
            })
            .collect();
        TruncatedSeries { order, coeffs }
    }

    /// Multiplies by a polynomial in `x` with nonnegative powers.
    pub fn mul_polynomial(&self, f: &Polynomial) -> Result<Self> {
        self.mul_known(&TruncatedSeries::from_polynomial(f, self.order)?)
    }

    fn mul_known(&self, exact: &Self) -> Result<Self> {
        let mut out = self.mul(exact);
        out.order = self.order;
        Ok(out)
    }

    /// Multiplication by `x^m`, `m >= 0`; raises the known order by `m`.
    pub fn shift(&self, m: usize) -> Self {
        let mut coeffs = vec![RationalFunction::zero(); m];
        coeffs.extend(self.coeffs.iter().cloned());
        TruncatedSeries {
            order: self.order + m,
            coeffs,
        }
    }

    /// Applies `D_{p,q}`: `x^k -> [k] x^{k-1}`. The known order drops by one.
    pub fn derivative(&self) -> Result<Self> {
        if self.order == 0 {
            return Err(Error::InvalidArgument("cannot differentiate an order-0 series".into()));
        }
        let coeffs = (1..=self.order)
            .map(|k| self.coeffs[k].mul_poly(&pq_number(k as i64)))
            .collect();
        Ok(TruncatedSeries {
            order: self.order - 1,
            coeffs,
        })
    }

    /// Substitutes `x -> c x` for a monomial scale `c` (e.g. `N_p` is `c = p`).
    pub fn dilate(&self, c: &Polynomial) -> Self {
        let mut pw = Polynomial::one();
        let mut coeffs = Vec::with_capacity(self.order + 1);
        for a in &self.coeffs {
            coeffs.push(a.mul_poly(&pw));
            pw = &pw * c;
        }
        TruncatedSeries {
            order: self.order,
            coeffs,
        }
    }

    /// Whether the series agrees with the polynomial `f` (in `x`) through
    /// the known order.
    pub fn agrees_with(&self, f: &Polynomial) -> Result<bool> {
        let g = TruncatedSeries::from_polynomial(f, self.order)?;
        Ok(self.sub(&g).is_zero())
    }
}

/// `e_{p,q}(c x)` or `E_{p,q}(c x)` through `x^order`, for a monomial
/// scale `c` such as `-p^n`.
pub fn exp_series_scaled(kind: ExpKind, order: usize, scale: &Polynomial) -> TruncatedSeries {
    let base = match kind {
        ExpKind::LowerE => Var::P,
        ExpKind::UpperE => Var::Q,
    };
    let mut pw = Polynomial::one();
    let mut fact = Polynomial::one();
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order {
        if k > 0 {
            fact = &fact * &pq_number(k as i64);
        }
        let num = pw.mul_monomial(&Monomial::var_pow(base, choose2(k)));
        coeffs.push(RationalFunction::new(num, fact.clone()).expect("[k]! is nonzero"));
        pw = &pw * scale;
    }
    TruncatedSeries { order, coeffs }
}

pub fn exp_series(kind: ExpKind, order: usize) -> TruncatedSeries {
    exp_series_scaled(kind, order, &Polynomial::one())
}

/// `-c` as a polynomial scale, for arguments like `E(-p^n x)`.
pub fn negated(c: Polynomial) -> Polynomial {
    c.scale(&-Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp() -> Polynomial {
        Polynomial::var(Var::P)
    }

    #[test]
    fn lower_e_order_two() {
        let e = exp_series(ExpKind::LowerE, 2);
        assert_eq!(e.coeff(0), &RationalFunction::one());
        assert_eq!(e.coeff(1), &RationalFunction::one());
        let expected = RationalFunction::new(pp(), &pp() + &Polynomial::var(Var::Q)).unwrap();
        assert_eq!(e.coeff(2), &expected);
    }

    #[test]
    fn upper_e_order_one() {
        let e = exp_series(ExpKind::UpperE, 1);
        assert_eq!(e.coeffs(), &[RationalFunction::one(), RationalFunction::one()]);
    }

    #[test]
    fn exponential_inverse_pair() {
        let e = exp_series(ExpKind::LowerE, 6);
        let minus_e = exp_series_scaled(ExpKind::UpperE, 6, &Polynomial::from_int(-1));
        let prod = e.mul(&minus_e);
        assert_eq!(prod.coeff(0), &RationalFunction::one());
        assert!((1..=6).all(|k| prod.coeff(k).is_zero()));
    }

    #[test]
    fn derivative_lowers_order() {
        let e = exp_series(ExpKind::LowerE, 4);
        let d = e.derivative().unwrap();
        assert_eq!(d.order(), 3);
        assert!(TruncatedSeries::zero(0).derivative().is_err());
    }

    #[test]
    fn polynomial_round_trip() {
        let f = &Polynomial::monomial(3, &[(Var::X, 2), (Var::P, 1)]) + &Polynomial::one();
        let s = TruncatedSeries::from_polynomial(&f, 4).unwrap();
        assert!(s.agrees_with(&f).unwrap());
        assert!(TruncatedSeries::from_polynomial(&Polynomial::var_pow(Var::X, -1), 2).is_err());
    }
}
