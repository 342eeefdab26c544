use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Deserializer;
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use super::{Monomial, Point, Rational, Var};
use crate::error::{Error, Result};

/// Exact Laurent polynomial in `p, q, h, x` over the rationals.
///
/// Canonical form: no stored zero coefficients, so structural equality is
/// mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        Self::term(Rational::one(), Monomial::var_pow(v, e))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    /// Builds `c * prod(v^e)`.
    pub fn monomial(c: i64, factors: &[(Var, i32)]) -> Self {
        let mut m = Monomial::ONE;
        for &(v, e) in factors {
            m = m.mul(&Monomial::var_pow(v, e));
        }
        Self::term(Rational::from_integer(c.into()), m)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut out = Polynomial::zero();
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial has no non-trivial monomials.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    /// The single term, if there is exactly one.
    pub fn as_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_term(&self, c: &Rational, mono: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.mul(mono), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Polynomial {
        self.mul_term(&Rational::one(), mono)
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Minimum and maximum exponent of `v` over all terms.
    pub fn exponent_range(&self, v: Var) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|m| m.exp(v));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) != 0)
    }

    /// Sum over variables of (max exponent - min exponent); bounds the number
    /// of sample points needed to separate two such polynomials.
    pub fn degree_span(&self) -> u32 {
        Var::ALL
            .iter()
            .filter_map(|&v| self.exponent_range(v))
            .map(|(lo, hi)| (hi - lo) as u32)
            .sum()
    }

    /// Replaces `v` by `v^m`: every exponent of `v` is multiplied by `m`.
    pub fn substitute_power(&self, v: Var, m: i32) -> Result<Polynomial> {
        if m == 0 {
            return Err(Error::InvalidArgument(
                "substitute_power requires a nonzero power".into(),
            ));
        }
        Ok(Polynomial::from_terms(self.terms.iter().map(|(mono, c)| {
            (mono.with_exp(v, mono.exp(v) * m), c.clone())
        })))
    }

    /// Replaces `v` by the constant `value`.
    pub fn specialize(&self, v: Var, value: &Rational) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (mono, c) in &self.terms {
            let e = mono.exp(v);
            let factor = rational_pow(value, e)?;
            out.add_term(mono.with_exp(v, 0), c * factor);
        }
        Ok(out)
    }

    /// Replaces `v` by `coef * mono * v`, e.g. `x -> p^n x`.
    pub fn scale_var(&self, v: Var, coef: &Rational, mono: &Monomial) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let factor = rational_pow(coef, e)?;
            out.add_term(m.mul(&mono.pow(e)), c * factor);
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &Point) -> Result<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut value = c.clone();
            for v in Var::ALL {
                let e = m.exp(v);
                if e == 0 {
                    continue;
                }
                let x = point.get(&v).ok_or(Error::UnassignedVariable(v))?;
                value *= rational_pow(x, e)?;
            }
            total += value;
        }
        Ok(total)
    }

    /// Floating-point evaluation at `[p, q, h, x]`.
    pub fn eval_f64(&self, values: [f64; 4]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.to_f64().unwrap_or(f64::NAN);
                for (e, x) in m.exponents().iter().zip(values) {
                    if *e != 0 {
                        v *= x.powi(*e);
                    }
                }
                v
            })
            .sum()
    }

    /// Exact quotient `self / divisor` in the Laurent ring.
    ///
    /// Every quotient monomial must lie in the exponent box
    /// `[min(a) - min(b), max(a) - max(b)]` per variable, which bounds the
    /// division loop; leaving the box means the division is not exact.
    pub fn div_exact(&self, divisor: &Polynomial) -> Result<Polynomial> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Polynomial::zero());
        }
        if let Some((m, c)) = divisor.as_term() {
            return Ok(self.mul_term(&c.recip(), &m.inv()));
        }
        let mut bounds = [(0i32, 0i32); 4];
        for v in Var::ALL {
            let (alo, ahi) = self.exponent_range(v).unwrap_or((0, 0));
            let (blo, bhi) = divisor.exponent_range(v).unwrap_or((0, 0));
            let (lo, hi) = (alo - blo, ahi - bhi);
            if lo > hi {
                return Err(Error::NotDivisible);
            }
            bounds[v.index()] = (lo, hi);
        }
        let (lead_m, lead_c) = divisor.leading().map(|(m, c)| (*m, c.clone())).unwrap();
        let mut remainder = self.clone();
        let mut quotient = Polynomial::zero();
        while let Some((m, c)) = remainder.leading() {
            let qm = m.div(&lead_m);
            let in_box = Var::ALL.iter().all(|&v| {
                let (lo, hi) = bounds[v.index()];
                (lo..=hi).contains(&qm.exp(v))
            });
            if !in_box {
                return Err(Error::NotDivisible);
            }
            let qc = c / &lead_c;
            remainder -= divisor.mul_term(&qc, &qm);
            quotient.add_term(qm, qc);
        }
        Ok(quotient)
    }

    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let mono = monomial_latex(m);
            if m.is_one() {
                out.push_str(&rational_latex(&a));
            } else {
                if !a.is_one() {
                    out.push_str(&rational_latex(&a));
                }
                out.push_str(&mono);
            }
        }
        out
    }
}

fn rational_latex(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

fn monomial_latex(m: &Monomial) -> String {
    let mut s = String::new();
    for v in Var::ALL {
        let e = m.exp(v);
        match e {
            0 => {}
            1 => s.push_str(v.name()),
            _ => s.push_str(&format!("{}^{{{}}}", v.name(), e)),
        }
    }
    s
}

/// `x^e` for any integer `e`; `0^e` with `e < 0` is a division by zero.
pub fn rational_pow(x: &Rational, e: i32) -> Result<Rational> {
    if e == 0 {
        return Ok(Rational::one());
    }
    if x.is_zero() {
        return if e > 0 { Ok(Rational::zero()) } else { Err(Error::DivisionByZero) };
    }
    let base = if e < 0 { x.recip() } else { x.clone() };
    Ok(num_traits::pow(base, e.unsigned_abs() as usize))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl From<Rational> for Polynomial {
    fn from(c: Rational) -> Self {
        Polynomial::constant(c)
    }
}

impl From<i64> for Polynomial {
    fn from(c: i64) -> Self {
        Polynomial::from_int(c)
    }
}

impl From<Var> for Polynomial {
    fn from(v: Var) -> Self {
        Polynomial::var(v)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl AddAssign<Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: Polynomial) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c);
        }
    }
}

impl SubAssign<Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: Polynomial) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Self {
        iter.fold(Polynomial::zero(), |mut acc, p| {
            acc += p;
            acc
        })
    }
}

impl std::iter::Product for Polynomial {
    fn product<I: Iterator<Item = Polynomial>>(iter: I) -> Self {
        iter.fold(Polynomial::one(), |acc, p| &acc * &p)
    }
}

/// One serialized term: exponents plus the coefficient as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub p: i32,
    pub q: i32,
    pub h: i32,
    pub x: i32,
    pub num: String,
    pub den: String,
}

impl Polynomial {
    /// Terms as records, leading term first.
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let [p, q, h, x] = m.exponents();
                TermRecord {
                    p,
                    q,
                    h,
                    x,
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                }
            })
            .collect()
    }

    pub fn from_records(records: &[TermRecord]) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for r in records {
            let num: BigInt = r
                .num
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad numerator `{}`", r.num)))?;
            let den: BigInt = r
                .den
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad denominator `{}`", r.den)))?;
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            out.add_term(Monomial::new([r.p, r.q, r.h, r.x]), Rational::new(num, den));
        }
        Ok(out)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let records = self.to_records();
        let mut seq = serializer.serialize_seq(Some(records.len()))?;
        for r in &records {
            seq.serialize_element(r)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(deserializer)?;
        Polynomial::from_records(&records).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::point;

    fn p() -> Polynomial {
        Polynomial::var(Var::P)
    }
    fn q() -> Polynomial {
        Polynomial::var(Var::Q)
    }

    #[test]
    fn binomial_square() {
        let s = &p() + &q();
        let expected = p().pow(2) + Polynomial::monomial(2, &[(Var::P, 1), (Var::Q, 1)]) + q().pow(2);
        assert_eq!(&s * &s, expected);
    }

    #[test]
    fn additive_inverse_is_empty() {
        let a = &p() - &q();
        let b = &q() - &p();
        let sum = &a + &b;
        assert!(sum.is_zero());
        assert_eq!(sum.len(), 0);
    }

    #[test]
    fn monomial_power() {
        let pq = &p() * &q();
        assert_eq!(pq.pow(3), Polynomial::monomial(1, &[(Var::P, 3), (Var::Q, 3)]));
    }

    #[test]
    fn substitute_power_examples() {
        assert_eq!(
            Polynomial::var_pow(Var::Q, 3).substitute_power(Var::Q, 2).unwrap(),
            Polynomial::var_pow(Var::Q, 6)
        );
        assert_eq!(
            (&p() + &q()).substitute_power(Var::Q, 3).unwrap(),
            &p() + &Polynomial::var_pow(Var::Q, 3)
        );
        assert!(matches!(
            p().substitute_power(Var::Q, 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn evaluate_examples() {
        let f = p().pow(3) + &p().pow(2) * &q() + &p() * &q().pow(2) + q().pow(3);
        let v = f.evaluate(&point(&[(Var::P, 2, 1), (Var::Q, 1, 1)])).unwrap();
        assert_eq!(v, Rational::from_integer(15.into()));
        assert_eq!(Polynomial::one().evaluate(&point(&[])).unwrap(), Rational::one());
        assert_eq!(
            p().evaluate(&point(&[])),
            Err(Error::UnassignedVariable(Var::P))
        );
        assert_eq!(
            Polynomial::var_pow(Var::P, -1).evaluate(&point(&[(Var::P, 0, 1)])),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn div_exact_examples() {
        let a = p().pow(2) - q().pow(2);
        assert_eq!(a.div_exact(&(&p() - &q())).unwrap(), &p() + &q());
        assert_eq!(
            (&p() + &q()).div_exact(&(&p() - &q())),
            Err(Error::NotDivisible)
        );
        assert_eq!(p().div_exact(&Polynomial::zero()), Err(Error::DivisionByZero));
        // Laurent divisor.
        let b = &Polynomial::var_pow(Var::P, -2) + &q();
        let prod = &b * &(&p() - &Polynomial::var_pow(Var::Q, -1));
        assert_eq!(prod.div_exact(&b).unwrap(), &p() - &Polynomial::var_pow(Var::Q, -1));
    }

    #[test]
    fn serde_round_trip() {
        let f = &p().pow(2) - &Polynomial::term(Rational::new(1.into(), 3.into()), Monomial::new([0, -1, 2, 1]));
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.starts_with("[{\"p\":2,\"q\":0,\"h\":0,\"x\":0,\"num\":\"1\",\"den\":\"1\"}"));
        let back: Polynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn display_and_latex() {
        let f = p().pow(2) - Polynomial::monomial(3, &[(Var::Q, -1)]);
        assert_eq!(f.to_string(), "p^2 - 3*q^-1");
        assert_eq!(f.to_latex(), "p^{2} - 3q^{-1}");
    }
}
