//! Real-argument Touchard and Dobiński kernels.
//!
//! With `t = q/p` one has `[k]_{p,q}! = p^{C(k,2)} [k]_t!`, so the series
//! terms are evaluated in base `t`:
//!
//! ```text
//! p^{C(k,2)} x^k / [k]_{p,q}!  =  x^k / [k]_t!
//! q^{C(k,2)} y^k / [k]_{p,q}!  =  t^{C(k,2)} y^k / [k]_t!
//! ```

use crate::error::Result;
use crate::pqcore::real::{bracket_real, check_bases, sum_series, Decimal, Double, RealContext, SumPolicy};
use crate::pqcore::Precision;

struct Params<C: RealContext> {
    n: u32,
    m: C::Value,
    p: C::Value,
    q: C::Value,
    x: C::Value,
}

impl<C: RealContext> Params<C> {
    fn new(ctx: &C, n: u32, m: f64, p: f64, q: f64, x: f64) -> Self {
        Params {
            n,
            m: ctx.num(m),
            p: ctx.num(p),
            q: ctx.num(q),
            x: ctx.num(x),
        }
    }

    fn t(&self) -> C::Value {
        self.q.clone() / self.p.clone()
    }
}

/// `[a]_t` for real `a`, as `[a]_{1,t}`.
fn t_bracket<C: RealContext>(ctx: &C, k: usize, t: &C::Value) -> C::Value {
    bracket_real(ctx, &ctx.num(k as f64), &ctx.one(), t)
}

/// `sum_k prod_{j<n} [k + j(m-1)]_{p,q} x^k / [k]_t!`.
fn weighted_sum<C: RealContext>(ctx: &C, a: &Params<C>, policy: &SumPolicy) -> Result<C::Value> {
    let t = a.t();
    let mut inv_fact = ctx.one();
    let m1 = a.m.clone() - ctx.one();
    sum_series(ctx, policy, |k| {
        if k > 0 {
            inv_fact = inv_fact.clone() * a.x.clone() / t_bracket(ctx, k, &t);
        }
        let mut prod = ctx.one();
        for j in 0..a.n {
            let arg = ctx.num(k as f64) + ctx.num(j as f64) * m1.clone();
            prod = prod * bracket_real(ctx, &arg, &a.p, &a.q);
        }
        prod * inv_fact.clone()
    })
}

/// `E_{p,q}(-y) = sum_k t^{C(k,2)} (-y)^k / [k]_t!`.
fn upper_e_neg<C: RealContext>(ctx: &C, y: &C::Value, t: &C::Value, policy: &SumPolicy) -> Result<C::Value> {
    let mut term = ctx.one();
    sum_series(ctx, policy, |k| {
        if k > 0 {
            term = term.clone() * (-y.clone()) * ctx.powi(t, k as i64 - 1) / t_bracket(ctx, k, t);
        }
        term.clone()
    })
}

/// `e_{p,q}(y) = sum_k y^k / [k]_t!`.
fn lower_e<C: RealContext>(ctx: &C, y: &C::Value, t: &C::Value, policy: &SumPolicy) -> Result<C::Value> {
    let mut term = ctx.one();
    sum_series(ctx, policy, |k| {
        if k > 0 {
            term = term.clone() * y.clone() / t_bracket(ctx, k, t);
        }
        term.clone()
    })
}

fn touchard_in<C: RealContext>(ctx: &C, a: &Params<C>, policy: &SumPolicy) -> Result<C::Value> {
    if a.n == 0 {
        return Ok(ctx.one());
    }
    let y = ctx.powi(&a.p, a.n as i64) * a.x.clone();
    let e = upper_e_neg(ctx, &y, &a.t(), policy)?;
    let shift = ctx.num(a.n as f64) * (a.m.clone() - ctx.one());
    Ok(ctx.powf(&a.x, &shift) * e * weighted_sum(ctx, a, policy)?)
}

fn dobinski_in<C: RealContext>(ctx: &C, a: &Params<C>, policy: &SumPolicy) -> Result<C::Value> {
    if a.n == 0 {
        return Ok(ctx.one());
    }
    let y = ctx.powi(&a.p, a.n as i64) * a.x.clone();
    let e = lower_e(ctx, &y, &a.t(), policy)?;
    Ok(weighted_sum(ctx, a, policy)? / e)
}

/// `T^{(m)}_n(x) = E(-p^n x) (X^m D)^n e(x)` evaluated termwise for real
/// `m`, `p, q > 0`, `p != q`.
pub fn touchard_numeric(
    n: u32,
    m: f64,
    p: f64,
    q: f64,
    x: f64,
    precision: Precision,
    policy: &SumPolicy,
) -> Result<f64> {
    check_bases(p, q)?;
    match precision {
        Precision::Double => touchard_in(&Double, &Params::new(&Double, n, m, p, q, x), policy),
        Precision::Decimal(digits) => {
            let ctx = Decimal { digits };
            let v = touchard_in(&ctx, &Params::new(&ctx, n, m, p, q, x), policy)?;
            Ok(ctx.to_f64(&v))
        }
    }
}

/// The Dobiński quotient `sum_k prod_j [k + j(m-1)] p^{C(k,2)} x^k / [k]! / e(p^n x)`,
/// equal to the tilde Bell polynomial of order `m`.
pub fn dobinski(
    n: u32,
    m: f64,
    p: f64,
    q: f64,
    x: f64,
    precision: Precision,
    policy: &SumPolicy,
) -> Result<f64> {
    check_bases(p, q)?;
    match precision {
        Precision::Double => dobinski_in(&Double, &Params::new(&Double, n, m, p, q, x), policy),
        Precision::Decimal(digits) => {
            let ctx = Decimal { digits };
            let v = dobinski_in(&ctx, &Params::new(&ctx, n, m, p, q, x), policy)?;
            Ok(ctx.to_f64(&v))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn policy() -> SumPolicy {
        SumPolicy::with_tol(1e-17)
    }

    #[test]
    fn trivial_order() {
        assert_eq!(touchard_numeric(0, 1.5, 0.5, 0.25, 0.7, Precision::Double, &policy()).unwrap(), 1.0);
        assert_eq!(dobinski(0, 2.0, 0.5, 0.25, 0.7, Precision::Double, &policy()).unwrap(), 1.0);
    }

    #[test]
    fn m1_n2() {
        let t = touchard_numeric(2, 1.0, 1.0, 0.5, 1.0, Precision::Double, &policy()).unwrap();
        assert!((t - 1.5).abs() < 1e-12, "{t}");
        let d = dobinski(2, 1.0, 1.0, 0.5, 1.0, Precision::Double, &policy()).unwrap();
        assert!((d - 1.5).abs() < 1e-10, "{d}");
    }

    #[test]
    fn near_classical_bell() {
        let d = dobinski(3, 1.0, 1.0, 1.0 - 1e-6, 1.0, Precision::Double, &policy()).unwrap();
        assert!((d - 5.0).abs() < 1e-3, "{d}");
    }

    #[test]
    fn decimal_mode_agrees() {
        let a = dobinski(3, 2.0, 0.5, 0.25, 1.0, Precision::Double, &policy()).unwrap();
        let b = dobinski(3, 2.0, 0.5, 0.25, 1.0, Precision::Decimal(50), &SumPolicy::with_tol(1e-40)).unwrap();
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }

    #[test]
    fn bad_bases() {
        assert!(matches!(
            dobinski(1, 1.0, 0.5, 0.5, 1.0, Precision::Double, &policy()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn divergent_lower_exponential() {
        // t = 1/2 gives radius 2 for e(p^n x).
        let r = dobinski(1, 1.0, 1.0, 0.5, 5.0, Precision::Double, &policy());
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }
}
