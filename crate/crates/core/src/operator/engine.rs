use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::{NormalTerm, OperatorExpr};
use crate::error::{Error, Result};
use crate::laurent::{Monomial, Polynomial, Rational, Var};
use crate::pqcore::pq_number;

/// The algebra generated by `U, V, W_p` with
///
/// ```text
/// U V - q V U = h V^s W_p,   W_p V = p V W_p,   U W_p = p W_p U.
/// ```
///
/// With `s = 0, h = 1` this is the concrete algebra of `D_{p,q}, X, N_p`.
/// Products are normal-ordered as `V^a W^b U^c` by rewriting; only the
/// one-step rule above is built in, and `U V^k` for every integer `k` is
/// derived from it by induction (downwards through Laurent inverses of
/// `p` and `q` for negative `k`).
#[derive(Debug)]
pub struct Algebra {
    s: i64,
    h: Polynomial,
    commutators: Mutex<HashMap<i64, Arc<(Polynomial, Polynomial)>>>,
}

impl Clone for Algebra {
    fn clone(&self) -> Self {
        Algebra::generalized(self.s, self.h.clone())
    }
}

impl Algebra {
    /// `D_{p,q}, X, N_p` acting on functions of `x`.
    pub fn concrete() -> Self {
        Algebra::generalized(0, Polynomial::one())
    }

    pub fn generalized(s: i64, h: Polynomial) -> Self {
        Algebra {
            s,
            h,
            commutators: Mutex::new(HashMap::new()),
        }
    }

    /// Abstract algebra with the structure constant `h` kept as the ring
    /// variable `h`.
    pub fn symbolic(s: i64) -> Self {
        Algebra::generalized(s, Polynomial::var(Var::H))
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn h(&self) -> &Polynomial {
        &self.h
    }

    /// Coefficients `(A, B)` with `U V^k = A V^k U + B V^{k+s-1} W`.
    pub fn commute_u_v(&self, k: i64) -> Arc<(Polynomial, Polynomial)> {
        if let Some(hit) = self.commutators.lock().unwrap().get(&k) {
            return hit.clone();
        }
        let p = Polynomial::var(Var::P);
        let q = Polynomial::var(Var::Q);
        let value = if k == 0 {
            (Polynomial::one(), Polynomial::zero())
        } else if k > 0 {
            let prev = self.commute_u_v(k - 1);
            (&prev.0 * &q, &(&self.h * &prev.0) + &(&p * &prev.1))
        } else {
            let next = self.commute_u_v(k + 1);
            let a = next.0.mul_monomial(&Monomial::var_pow(Var::Q, -1));
            let b = (&next.1 - &(&self.h * &a)).mul_monomial(&Monomial::var_pow(Var::P, -1));
            (a, b)
        };
        let value = Arc::new(value);
        self.commutators.lock().unwrap().insert(k, value.clone());
        value
    }

    /// `U * e`.
    fn lmul_u(&self, e: &OperatorExpr) -> OperatorExpr {
        let mut out = OperatorExpr::zero();
        for (t, c) in e.terms() {
            let ab = self.commute_u_v(t.x);
            // U V^x W^n U^d = A V^x (U W^n) U^d + B V^{x+s-1} W^{n+1} U^d
            let a = ab.0.mul_monomial(&Monomial::var_pow(Var::P, t.n as i32));
            out.add_term(NormalTerm::new(t.x, t.n, t.d + 1), c * &a);
            out.add_term(NormalTerm::new(t.x + self.s - 1, t.n + 1, t.d), c * &ab.1);
        }
        out
    }

    /// `W * e`.
    fn lmul_w(&self, e: &OperatorExpr) -> OperatorExpr {
        let mut out = OperatorExpr::zero();
        for (t, c) in e.terms() {
            let scale = Monomial::var_pow(Var::P, t.x as i32);
            out.add_term(NormalTerm::new(t.x, t.n + 1, t.d), c.mul_monomial(&scale));
        }
        out
    }

    fn lmul_v(e: &OperatorExpr, k: i64) -> OperatorExpr {
        let mut out = OperatorExpr::zero();
        for (t, c) in e.terms() {
            out.add_term(NormalTerm::new(t.x + k, t.n, t.d), c.clone());
        }
        out
    }

    /// Normal-ordered product `a * b`.
    pub fn mul(&self, a: &OperatorExpr, b: &OperatorExpr) -> OperatorExpr {
        let mut out = OperatorExpr::zero();
        for (t, c) in a.terms() {
            let mut e = b.clone();
            for _ in 0..t.d {
                e = self.lmul_u(&e);
            }
            for _ in 0..t.n {
                e = self.lmul_w(&e);
            }
            let e = Self::lmul_v(&e, t.x).scale(c);
            out = out.add(&e);
        }
        out
    }

    pub fn pow(&self, a: &OperatorExpr, n: u32) -> OperatorExpr {
        let mut out = OperatorExpr::identity();
        for _ in 0..n {
            out = self.mul(a, &out);
        }
        out
    }

    pub fn product<'a, I>(&self, factors: I) -> OperatorExpr
    where
        I: IntoIterator<Item = &'a OperatorExpr>,
    {
        factors
            .into_iter()
            .fold(OperatorExpr::identity(), |acc, f| self.mul(&acc, f))
    }
}

/// Applies a concrete operator to a Laurent polynomial in `x`:
/// `X` multiplies by `x`, `N_p` sends `x^k` to `p^k x^k`, and `D_{p,q}`
/// sends `x^k` to `[k] x^{k-1}`.
pub fn apply_to_poly(op: &OperatorExpr, f: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for (t, c) in op.terms() {
        for (m, a) in f.terms() {
            let k = m.exp(Var::X) as i64;
            let mut coeff: Polynomial = (0..t.d as i64).map(|i| pq_number(k - i)).product();
            if coeff.is_zero() {
                continue;
            }
            let after_d = k - t.d as i64;
            coeff = coeff.mul_term(a, &m.with_exp(Var::X, 0));
            let scale = Monomial::var_pow(Var::P, (t.n as i64 * after_d) as i32)
                .mul(&Monomial::var_pow(Var::X, (after_d + t.x) as i32));
            out += &(&coeff * c).mul_monomial(&scale);
        }
    }
    out
}

/// `X^m D_{p,q}`.
pub fn touchard_generator(m: i64) -> OperatorExpr {
    OperatorExpr::term(Polynomial::one(), NormalTerm::new(m, 0, 1))
}

/// Normal-ordering coefficients of `(V U)^n` in the abstract algebra with
/// symbolic `h`: entry `k` is the coefficient of `V^{s(n-k)+k} W^{n-k} U^k`.
pub fn abstract_power_vu(n: u32, s: &Rational) -> Result<Vec<Polynomial>> {
    if !s.is_integer() {
        return Err(Error::Unsupported(format!("non-integer s = {s}")));
    }
    let s: i64 = s.to_integer().try_into().map_err(|_| Error::InvalidArgument("s out of range".into()))?;
    let algebra = Algebra::symbolic(s);
    let vu = OperatorExpr::term(Polynomial::one(), NormalTerm::new(1, 0, 1));
    let expr = algebra.pow(&vu, n);
    read_support(&expr, n, |k| NormalTerm::new(s * (n - k) as i64 + k as i64, n - k, k))
}

/// Order-`m` Stirling numbers read off the normal ordering of `(X^m D)^n`:
/// entry `k` is the coefficient of `X^{n(m-1)+k} N^{n-k} D^k`.
pub fn extract_stirling(n: u32, m: i64) -> Result<Vec<Polynomial>> {
    if m == 0 {
        return Err(Error::InvalidArgument("Touchard order m must be nonzero".into()));
    }
    let expr = Algebra::concrete().pow(&touchard_generator(m), n);
    read_support(&expr, n, |k| NormalTerm::new(n as i64 * (m - 1) + k as i64, n - k, k))
}

fn read_support<F>(expr: &OperatorExpr, n: u32, term_of: F) -> Result<Vec<Polynomial>>
where
    F: Fn(u32) -> NormalTerm,
{
    let expected: Vec<NormalTerm> = (0..=n).map(&term_of).collect();
    if let Some((stray, _)) = expr.terms().find(|(t, _)| !expected.contains(t)) {
        return Err(Error::InternalInconsistency(format!(
            "normal term {stray} lies outside the predicted support"
        )));
    }
    Ok(expected.iter().map(|t| expr.coeff(t)).collect())
}

/// `(R + S)^n`, normal-ordered in the concrete algebra.
pub fn nc_binomial_expand(r: &OperatorExpr, s: &OperatorExpr, n: u32) -> OperatorExpr {
    Algebra::concrete().pow(&r.add(s), n)
}

/// `R = q^s X^m D` and `S = [s] X^{m-1} N_p`, the pair with
/// `R S = h_{m,s} S^2 + (q/p)^{m-1} S R`.
pub fn binomial_pair(m: i64, s: i64) -> (OperatorExpr, OperatorExpr) {
    let r = OperatorExpr::term(Polynomial::var_pow(Var::Q, s as i32), NormalTerm::new(m, 0, 1));
    let sop = OperatorExpr::term(pq_number(s), NormalTerm::new(m - 1, 1, 0));
    (r, sop)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::int;

    fn poly(v: Var) -> Polynomial {
        Polynomial::var(v)
    }

    #[test]
    fn d_times_x() {
        let alg = Algebra::concrete();
        let got = alg.mul(&OperatorExpr::d_pow(1), &OperatorExpr::x_pow(1));
        let mut expected = OperatorExpr::term(poly(Var::Q), NormalTerm::new(1, 0, 1));
        expected.add_term(NormalTerm::new(0, 1, 0), Polynomial::one());
        assert_eq!(got, expected);
    }

    #[test]
    fn xd_squared() {
        let alg = Algebra::concrete();
        let xd = touchard_generator(1);
        let got = alg.mul(&xd, &xd);
        let mut expected = OperatorExpr::term(poly(Var::Q), NormalTerm::new(2, 0, 2));
        expected.add_term(NormalTerm::new(1, 1, 1), Polynomial::one());
        assert_eq!(got, expected);
    }

    #[test]
    fn n_past_x_cubed() {
        let alg = Algebra::concrete();
        let got = alg.mul(&OperatorExpr::n_pow(1), &OperatorExpr::x_pow(3));
        assert_eq!(got, OperatorExpr::term(poly(Var::P).pow(3), NormalTerm::new(3, 1, 0)));
    }

    #[test]
    fn x2d_squared() {
        let alg = Algebra::concrete();
        let got = alg.pow(&touchard_generator(2), 2);
        let mut expected = OperatorExpr::term(poly(Var::Q).pow(2), NormalTerm::new(4, 0, 2));
        expected.add_term(NormalTerm::new(3, 1, 1), pq_number(2));
        assert_eq!(got, expected);
        assert_eq!(alg.pow(&got, 0), OperatorExpr::identity());
    }

    #[test]
    fn commutator_matches_bracket_for_all_integers() {
        let alg = Algebra::concrete();
        for k in -6..=6 {
            let ab = alg.commute_u_v(k);
            assert_eq!(ab.0, Polynomial::var_pow(Var::Q, k as i32), "k={k}");
            assert_eq!(ab.1, pq_number(k), "k={k}");
        }
    }

    #[test]
    fn apply_examples() {
        let x3 = Polynomial::var_pow(Var::X, 3);
        assert_eq!(
            apply_to_poly(&OperatorExpr::d_pow(1), &x3),
            &pq_number(3) * &Polynomial::var_pow(Var::X, 2)
        );
        assert_eq!(
            apply_to_poly(&OperatorExpr::n_pow(1), &x3),
            &poly(Var::P).pow(3) * &x3
        );
        let xd = touchard_generator(1);
        let x2 = Polynomial::var_pow(Var::X, 2);
        let sq = Algebra::concrete().pow(&xd, 2);
        let once = apply_to_poly(&xd, &apply_to_poly(&xd, &x2));
        // q [2][1] x^2 + p [2] x^2 = [2]^2 x^2
        let two = pq_number(2);
        let expected = &(&(&poly(Var::Q) * &two) + &(&poly(Var::P) * &two)) * &x2;
        assert_eq!(expected, &two.pow(2) * &x2);
        assert_eq!(apply_to_poly(&sq, &x2), expected);
        assert_eq!(once, expected);
    }

    #[test]
    fn abstract_examples() {
        let s = int(1);
        let two = abstract_power_vu(2, &s).unwrap();
        assert_eq!(two[1], poly(Var::H));
        assert_eq!(two[2], poly(Var::Q));
        for s in 0..3 {
            let three = abstract_power_vu(3, &int(s)).unwrap();
            let h = poly(Var::H);
            assert_eq!(three[1], &h.pow(2) * &pq_number(s + 1));
            let inner = &pq_number(2) + &Polynomial::monomial(1, &[(Var::P, 1), (Var::Q, s as i32)]);
            assert_eq!(three[2], &(&h * &poly(Var::Q)) * &inner);
            assert_eq!(three[3], poly(Var::Q).pow(3));
        }
        assert!(matches!(
            abstract_power_vu(2, &crate::laurent::ratio(1, 2)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn extract_examples() {
        let m1 = extract_stirling(2, 1).unwrap();
        assert_eq!(m1[1], Polynomial::one());
        assert_eq!(m1[2], poly(Var::Q));
        let m2 = extract_stirling(3, 2).unwrap();
        let expected = &(&poly(Var::Q).pow(2) * &pq_number(4))
            + &Polynomial::monomial(1, &[(Var::P, 1), (Var::Q, 3)]).mul_monomial(&Monomial::ONE) * &pq_number(2);
        assert_eq!(m2[2], expected);
        assert_eq!(m2[3], poly(Var::Q).pow(6));
        assert!(extract_stirling(2, 0).is_err());
    }

    #[test]
    fn binomial_expand_first_power() {
        let (r, s) = binomial_pair(2, 1);
        assert_eq!(nc_binomial_expand(&r, &s, 1), r.add(&s));
    }
}
