//! Floating-point kernels: real-argument brackets and the adaptive series
//! summation used by the numeric Touchard and Dobiński evaluators.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::DBig;

use crate::error::{Error, Result};

/// Arithmetic context for real-valued kernels. Lets the same code run in
/// IEEE double or in a fixed-precision decimal type.
pub trait RealContext {
    type Value: Clone
        + Debug
        + PartialOrd
        + Add<Output = Self::Value>
        + Sub<Output = Self::Value>
        + Mul<Output = Self::Value>
        + Div<Output = Self::Value>
        + Neg<Output = Self::Value>;

    fn num(&self, v: f64) -> Self::Value;
    fn powf(&self, base: &Self::Value, exp: &Self::Value) -> Self::Value;
    fn abs(&self, v: &Self::Value) -> Self::Value;
    fn to_f64(&self, v: &Self::Value) -> f64;

    fn zero(&self) -> Self::Value {
        self.num(0.0)
    }

    fn one(&self) -> Self::Value {
        self.num(1.0)
    }

    fn powi(&self, base: &Self::Value, e: i64) -> Self::Value {
        let mut acc = self.one();
        for _ in 0..e.unsigned_abs() {
            acc = acc * base.clone();
        }
        if e < 0 {
            self.one() / acc
        } else {
            acc
        }
    }

    fn is_finite(&self, v: &Self::Value) -> bool {
        self.to_f64(v).is_finite() || self.abs(v) < self.num(f64::MAX)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Double;

impl RealContext for Double {
    type Value = f64;

    fn num(&self, v: f64) -> f64 {
        v
    }
    fn powf(&self, base: &f64, exp: &f64) -> f64 {
        base.powf(*exp)
    }
    fn abs(&self, v: &f64) -> f64 {
        v.abs()
    }
    fn to_f64(&self, v: &f64) -> f64 {
        *v
    }
    fn powi(&self, base: &f64, e: i64) -> f64 {
        base.powi(e as i32)
    }
    fn is_finite(&self, v: &f64) -> bool {
        v.is_finite()
    }
}

/// Decimal floating point carrying `digits` significant digits.
#[derive(Debug, Clone, Copy)]
pub struct Decimal {
    pub digits: usize,
}

impl RealContext for Decimal {
    type Value = DBig;

    fn num(&self, v: f64) -> DBig {
        // Shortest round-trip representation, so 0.1 means one tenth.
        let s = format!("{v:e}");
        s.parse::<DBig>()
            .expect("formatted float parses")
            .with_precision(self.digits)
            .value()
    }
    fn powf(&self, base: &DBig, exp: &DBig) -> DBig {
        if *exp == DBig::ZERO {
            return self.one();
        }
        base.powf(exp)
    }
    fn abs(&self, v: &DBig) -> DBig {
        if *v < DBig::ZERO {
            -v.clone()
        } else {
            v.clone()
        }
    }
    fn to_f64(&self, v: &DBig) -> f64 {
        v.to_f64().value()
    }
    fn is_finite(&self, _v: &DBig) -> bool {
        true
    }
}

/// Which arithmetic the numeric kernels run in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    Decimal(usize),
}

impl std::str::FromStr for Precision {
    type Err = Error;

    /// `double` or `decimal:<digits>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "double" {
            return Ok(Precision::Double);
        }
        if let Some(d) = s.strip_prefix("decimal:") {
            let digits: usize = d
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad digit count `{d}`")))?;
            if digits < 16 {
                return Err(Error::InvalidArgument("decimal precision needs at least 16 digits".into()));
            }
            return Ok(Precision::Decimal(digits));
        }
        Err(Error::InvalidArgument(format!("unknown precision `{s}`")))
    }
}

/// Positive-base parameters shared by the real kernels.
pub fn check_bases(p: f64, q: f64) -> Result<()> {
    if !(p > 0.0 && q > 0.0) {
        return Err(Error::InvalidArgument("p and q must be positive".into()));
    }
    if p == q {
        return Err(Error::InvalidArgument("p and q must differ".into()));
    }
    Ok(())
}

/// `[a]_{p,q} = (p^a - q^a) / (p - q)` in the given context.
pub fn bracket_real<C: RealContext>(
    ctx: &C,
    a: &C::Value,
    p: &C::Value,
    q: &C::Value,
) -> C::Value {
    (ctx.powf(p, a) - ctx.powf(q, a)) / (p.clone() - q.clone())
}

/// Real-argument twin-basic number in double precision.
pub fn pq_number_real(a: f64, p: f64, q: f64) -> Result<f64> {
    check_bases(p, q)?;
    Ok(bracket_real(&Double, &a, &p, &q))
}

/// Tuning for [`sum_series`].
#[derive(Debug, Clone, Copy)]
pub struct SumPolicy {
    /// Stop once this many consecutive terms are below `tol * |sum|`.
    pub guard: usize,
    pub tol: f64,
    pub max_terms: usize,
    /// Index after which non-decreasing terms count as divergence.
    pub divergence_start: usize,
}

impl Default for SumPolicy {
    fn default() -> Self {
        SumPolicy {
            guard: 5,
            tol: 1e-17,
            max_terms: 20_000,
            divergence_start: 64,
        }
    }
}

impl SumPolicy {
    pub fn with_tol(tol: f64) -> Self {
        SumPolicy { tol, ..Self::default() }
    }
}

/// Sums `term(0) + term(1) + ...` adaptively.
pub fn sum_series<C, F>(ctx: &C, policy: &SumPolicy, mut term: F) -> Result<C::Value>
where
    C: RealContext,
    F: FnMut(usize) -> C::Value,
{
    let tol = ctx.num(policy.tol);
    let mut sum = ctx.zero();
    let mut small_run = 0usize;
    let mut history: Vec<C::Value> = Vec::new();
    for k in 0..policy.max_terms {
        let t = term(k);
        let at = ctx.abs(&t);
        if !ctx.is_finite(&at) {
            return Err(Error::NonConvergence { terms: k });
        }
        sum = sum + t;
        let bound = ctx.abs(&sum) * tol.clone();
        if at <= bound && bound > ctx.zero() {
            small_run += 1;
            if small_run >= policy.guard {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
        if k >= policy.divergence_start && k >= policy.guard {
            let back = &history[k - policy.guard];
            if at > *back && at > bound {
                return Err(Error::NonConvergence { terms: k + 1 });
            }
        }
        history.push(at);
    }
    Err(Error::NonConvergence { terms: policy.max_terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_real_examples() {
        assert!((pq_number_real(2.0, 2.0, 1.0).unwrap() - 3.0).abs() < 1e-15);
        assert!((pq_number_real(1.5, 1.0, 0.25).unwrap() - 7.0 / 6.0).abs() < 1e-15);
        assert_eq!(pq_number_real(0.0, 3.0, 0.5).unwrap(), 0.0);
        assert!(pq_number_real(1.0, 1.0, 1.0).is_err());
        assert!(pq_number_real(1.0, -1.0, 2.0).is_err());
    }

    #[test]
    fn decimal_bracket_agrees() {
        let ctx = Decimal { digits: 50 };
        let v = bracket_real(&ctx, &ctx.num(1.5), &ctx.num(1.0), &ctx.num(0.25));
        let exact_7_6 = ctx.num(7.0) / ctx.num(6.0);
        let diff = ctx.abs(&(v - exact_7_6));
        assert!(diff < ctx.num(1e-45));
    }

    #[test]
    fn geometric_series() {
        let v = sum_series(&Double, &SumPolicy::with_tol(1e-16), |k| 0.5f64.powi(k as i32)).unwrap();
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn divergence_detected() {
        let r = sum_series(&Double, &SumPolicy::default(), |k| 1.1f64.powi(k as i32));
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn precision_parse() {
        assert_eq!("double".parse::<Precision>().unwrap(), Precision::Double);
        assert_eq!("decimal:60".parse::<Precision>().unwrap(), Precision::Decimal(60));
        assert!("decimal:3".parse::<Precision>().is_err());
        assert!("quad".parse::<Precision>().is_err());
    }
}
