use num_traits::One;

use crate::error::{Error, Result};
use crate::laurent::{Monomial, Polynomial, Rational, RationalFunction, Var};

/// `[n]_{a,b}` for monomial bases, always via the finite sum
/// `sum_{k=1..n} a^{n-k} b^{k-1}` so that equal bases are harmless.
/// Negative arguments use `[-n] = -(ab)^{-n} [n]`.
pub fn bracket_in(n: i64, a: &Monomial, b: &Monomial) -> Polynomial {
    match n {
        0 => Polynomial::zero(),
        n if n > 0 => {
            let n = n as i32;
            Polynomial::from_terms(
                (1..=n).map(|k| (a.pow(n - k).mul(&b.pow(k - 1)), Rational::one())),
            )
        }
        n => {
            let pos = bracket_in(-n, a, b);
            -pos.mul_monomial(&a.mul(b).pow(n as i32))
        }
    }
}

fn p() -> Monomial {
    Monomial::var(Var::P)
}

fn q() -> Monomial {
    Monomial::var(Var::Q)
}

/// The twin-basic number `[n]_{p,q}`.
pub fn pq_number(n: i64) -> Polynomial {
    bracket_in(n, &p(), &q())
}

/// `[n]_{p^m, q^m}`.
pub fn pq_number_base_power(n: i64, m: i32) -> Polynomial {
    bracket_in(n, &p().pow(m), &q().pow(m))
}

/// Single-base number `[n]_t = 1 + t + ... + t^{n-1}` for a monomial base.
pub fn t_number(n: i64, t: &Monomial) -> Polynomial {
    bracket_in(n, &Monomial::ONE, t)
}

pub fn pq_factorial(n: u32) -> Polynomial {
    factorial_in(n, &p(), &q())
}

pub fn factorial_in(n: u32, a: &Monomial, b: &Monomial) -> Polynomial {
    (1..=n as i64).map(|k| bracket_in(k, a, b)).product()
}

/// `[n; k]_{p,q}`, zero outside `0 <= k <= n`.
pub fn pq_gauss_binomial(n: u32, k: i64) -> Result<Polynomial> {
    gauss_binomial_in(n, k, &p(), &q())
}

pub fn gauss_binomial_in(n: u32, k: i64, a: &Monomial, b: &Monomial) -> Result<Polynomial> {
    if k < 0 || k > n as i64 {
        return Ok(Polynomial::zero());
    }
    let k = k as u32;
    // Numerator [n][n-1]...[n-k+1] over [k]!.
    let num: Polynomial = ((n - k + 1)..=n).map(|i| bracket_in(i as i64, a, b)).product();
    num.div_exact(&factorial_in(k, a, b)).map_err(|_| {
        Error::InternalInconsistency(format!("Gaussian binomial [{n}; {k}] is not a polynomial"))
    })
}

/// Single-base Gaussian binomial `[n; k]_t` for a monomial base `t`.
pub fn t_gauss_binomial(n: u32, k: i64, t: &Monomial) -> Result<Polynomial> {
    gauss_binomial_in(n, k, &Monomial::ONE, t)
}

fn rf_t_number(i: u32, t: &RationalFunction) -> RationalFunction {
    let mut acc = RationalFunction::zero();
    let mut pw = RationalFunction::one();
    for _ in 0..i {
        acc = &acc + &pw;
        pw = &pw * t;
    }
    acc
}

/// (q,h)-binomial coefficient for generators with `R S = qhat S R + hhat S^2`:
/// the coefficient of `S^k R^{n-k}` in `(R + S)^n`, equal to
/// `[n; k]_qhat * prod_{i=0..k-1} (1 + hhat [i]_qhat)`.
pub fn qh_binomial(
    n: u32,
    k: u32,
    qhat: &RationalFunction,
    hhat: &RationalFunction,
) -> Result<RationalFunction> {
    if k > n {
        return Err(Error::InvalidArgument(format!("qh_binomial needs k <= n, got k={k}, n={n}")));
    }
    let undefined = |_| Error::UndefinedParameter(format!("[{n}; {k}] in base {qhat}"));
    let gauss = match qhat.to_polynomial().as_ref().and_then(Polynomial::as_term) {
        Some((m, c)) if c.is_one() => t_gauss_binomial(n, k as i64, m)?.into(),
        _ => {
            let mut num = RationalFunction::one();
            let mut den = RationalFunction::one();
            for i in 0..k {
                num = &num * &rf_t_number(n - i, qhat);
                den = &den * &rf_t_number(i + 1, qhat);
            }
            (&num / &den).map_err(undefined)?
        }
    };
    let mut out = gauss;
    for i in 1..k {
        let factor = &RationalFunction::one() + &(hhat * &rf_t_number(i, qhat));
        out = &out * &factor;
    }
    Ok(out)
}

/// The structure constant `h_{m,s}` of the commutation
/// `R S = h_{m,s} S^2 + (q/p)^{m-1} S R`.
#[derive(Debug, Clone, PartialEq)]
pub struct HParam {
    pub m: i64,
    pub s: i64,
    pub value: RationalFunction,
}

pub fn h_param(m: i64, s: i64) -> Result<HParam> {
    if m == 1 {
        return Ok(HParam { m, s, value: RationalFunction::zero() });
    }
    if s == 0 {
        return Err(Error::UndefinedParameter(format!("h_{{{m},{s}}}")));
    }
    let num = pq_number(m - 1).mul_monomial(&q().pow(s as i32));
    let den = pq_number(s).mul_monomial(&p().pow((m - 1) as i32));
    Ok(HParam { m, s, value: RationalFunction::new(num, den)? })
}

/// The base `(q/p)^{m-1}` shared by the (p^{m-1}, q^{m-1}, h)-binomials.
pub fn binomial_base(m: i64) -> Monomial {
    q().div(&p()).pow((m - 1) as i32)
}

/// `[s]^k` times the (p^{m-1}, q^{m-1}, h_{m,s})-binomial coefficient of
/// `S^k R^{n-k}`, written as the Laurent polynomial
/// `[n; k]_t * prod_{i=0..k-1} ([s] + q^s [m-1] p^{1-m} [i]_t)`.
///
/// This stays defined at `s = 0`, where it collapses to `delta_{k,0}`.
pub fn scaled_qh_binomial(n: u32, k: u32, m: i64, s: i64) -> Result<Polynomial> {
    let t = binomial_base(m);
    let bs = pq_number(s);
    let shift = pq_number(m - 1).mul_monomial(&q().pow(s as i32).mul(&p().pow((1 - m) as i32)));
    let mut out = t_gauss_binomial(n, k as i64, &t)?;
    for i in 0..k {
        out = &out * &(&bs + &(&shift * &t_number(i as i64, &t)));
    }
    Ok(out)
}
