use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Point, Polynomial, Rational};
use crate::error::{Error, Result};

/// Quotient of two Laurent polynomials. Not reduced by a GCD; equality is
/// decided by cross-multiplication.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    /// Single-term denominators are folded into the numerator, since
    /// monomials are units in the Laurent ring.
    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some((m, c)) = den.as_term() {
            let num = num.mul_term(&c.recip(), &m.inv());
            return RationalFunction {
                num,
                den: Polynomial::one(),
            };
        }
        RationalFunction { num, den }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Polynomial::one().into()
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Result<Self> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    /// The polynomial this quotient equals, if the division is exact.
    pub fn to_polynomial(&self) -> Option<Polynomial> {
        self.num.div_exact(&self.den).ok()
    }

    /// Tries to cancel the denominator completely.
    pub fn simplify(self) -> Self {
        match self.to_polynomial() {
            Some(p) => p.into(),
            None => self,
        }
    }

    pub fn evaluate(&self, point: &Point) -> Result<Rational> {
        let d = self.den.evaluate(point)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.evaluate(point)? / d)
    }

    pub fn eval_f64(&self, values: [f64; 4]) -> f64 {
        self.num.eval_f64(values) / self.den.eval_f64(values)
    }

    pub fn pow(&self, k: u32) -> Self {
        RationalFunction::normalized(self.num.pow(k), self.den.pow(k))
    }

    /// Cancels `p` against the denominator when it divides it exactly.
    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        if !self.den.is_one() && p.as_term().is_none() {
            if let Ok(den) = self.den.div_exact(p) {
                return RationalFunction::normalized(self.num.clone(), den);
            }
        }
        RationalFunction::normalized(&self.num * p, self.den.clone())
    }

    /// Substitutes into numerator and denominator independently.
    pub fn map_both<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&Polynomial) -> Result<Polynomial>,
    {
        RationalFunction::new(f(&self.num)?, f(&self.den)?)
    }
}

/// Cross-multiplication equality: `a/b == c/d` iff `a*d == c*b`.
pub fn rf_equal(a: &RationalFunction, b: &RationalFunction) -> bool {
    if a.den == b.den {
        return a.num == b.num;
    }
    &a.num * &b.den == &b.num * &a.den
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        rf_equal(self, other)
    }
}

impl Eq for RationalFunction {}

impl From<Polynomial> for RationalFunction {
    fn from(num: Polynomial) -> Self {
        RationalFunction {
            num,
            den: Polynomial::one(),
        }
    }
}

impl From<Rational> for RationalFunction {
    fn from(c: Rational) -> Self {
        Polynomial::constant(c).into()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;

    /// Reuses a denominator when one divides the other, which keeps sums of
    /// factorial-denominated terms from compounding.
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num + &rhs.num, self.den.clone());
        }
        if let Ok(f) = self.den.div_exact(&rhs.den) {
            return RationalFunction::normalized(&self.num + &(&rhs.num * &f), self.den.clone());
        }
        if let Ok(f) = rhs.den.div_exact(&self.den) {
            return RationalFunction::normalized(&(&self.num * &f) + &rhs.num, rhs.den.clone());
        }
        RationalFunction::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div<&RationalFunction> for &RationalFunction {
    type Output = Result<RationalFunction>;
    fn div(self, rhs: &RationalFunction) -> Result<RationalFunction> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunction::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }
}

impl std::iter::Sum for RationalFunction {
    fn sum<I: Iterator<Item = RationalFunction>>(iter: I) -> Self {
        iter.fold(RationalFunction::zero(), |acc, x| &acc + &x)
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl Add for RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: RationalFunction) -> RationalFunction {
        &self + &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{point, Var};

    fn p() -> Polynomial {
        Polynomial::var(Var::P)
    }
    fn q() -> Polynomial {
        Polynomial::var(Var::Q)
    }

    #[test]
    fn cross_multiplication_equality() {
        let a = RationalFunction::new(p().pow(2) - q().pow(2), &p() - &q()).unwrap();
        let b: RationalFunction = (&p() + &q()).into();
        assert!(rf_equal(&a, &b));

        let c = RationalFunction::new(Polynomial::one(), &p() - &q()).unwrap();
        let d = RationalFunction::new(Polynomial::one(), &q() - &p()).unwrap();
        assert!(!rf_equal(&c, &d));
    }

    #[test]
    fn identity_quotient_evaluates_to_one() {
        let a = RationalFunction::new(&p() - &q(), &p() - &q()).unwrap();
        let v = a.evaluate(&point(&[(Var::P, 3, 1), (Var::Q, 2, 1)])).unwrap();
        assert_eq!(v, Rational::from_integer(1.into()));
        assert_eq!(
            a.evaluate(&point(&[(Var::P, 2, 1), (Var::Q, 2, 1)])),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            RationalFunction::new(p(), Polynomial::zero()).unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn monomial_denominator_folds() {
        let a = RationalFunction::new(q(), Polynomial::monomial(2, &[(Var::P, 1)])).unwrap();
        assert!(a.den().is_one());
        assert_eq!(a.num(), &Polynomial::term(Rational::new(1.into(), 2.into()), crate::laurent::Monomial::new([-1, 1, 0, 0])));
    }

    #[test]
    fn sum_reuses_divisible_denominator() {
        let s = &p() + &q();
        let big = &s * &(&p() - &q());
        let a = RationalFunction::new(Polynomial::one(), big.clone()).unwrap();
        let b = RationalFunction::new(Polynomial::one(), s.clone()).unwrap();
        let sum = &a + &b;
        assert_eq!(sum.den(), &big);
        let expected = RationalFunction::new(&Polynomial::one() + &(&p() - &q()), big).unwrap();
        assert_eq!(sum, expected);
    }
}
