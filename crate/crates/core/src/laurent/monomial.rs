use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The four ring variables. Their declaration order fixes the lexicographic
/// tie-break of the monomial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    P,
    Q,
    H,
    X,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::P, Var::Q, Var::H, Var::X];

    pub fn index(self) -> usize {
        match self {
            Var::P => 0,
            Var::Q => 1,
            Var::H => 2,
            Var::X => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::P => "p",
            Var::Q => "q",
            Var::H => "h",
            Var::X => "x",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "p" => Ok(Var::P),
            "q" => Ok(Var::Q),
            "h" => Ok(Var::H),
            "x" => Ok(Var::X),
            other => Err(Error::InvalidArgument(format!("unknown variable `{other}`"))),
        }
    }
}

/// A Laurent monomial `p^a q^b h^c x^d` with integer exponents.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// tuple in `(p, q, h, x)` order. The order is compatible with
/// multiplication, so leading terms multiply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([i32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn new(exps: [i32; 4]) -> Self {
        Monomial(exps)
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        let mut exps = [0; 4];
        exps[v.index()] = e;
        Monomial(exps)
    }

    pub fn exponents(&self) -> [i32; 4] {
        self.0
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.0[v.index()]
    }

    pub fn with_exp(mut self, v: Var, e: i32) -> Self {
        self.0[v.index()] = e;
        self
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0;
        for (o, e) in out.iter_mut().zip(other.0) {
            *o += e;
        }
        Monomial(out)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.map(|e| -e))
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        Monomial(self.0.map(|e| e * k))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_order() {
        let p = Monomial::var(Var::P);
        let q = Monomial::var(Var::Q);
        let q2 = Monomial::var_pow(Var::Q, 2);
        assert!(q2 > p);
        assert!(p > q);
        assert!(Monomial::ONE < q);
        assert!(Monomial::var_pow(Var::P, -1) < Monomial::ONE);
    }

    #[test]
    fn order_is_multiplicative() {
        let a = Monomial::new([1, -2, 0, 3]);
        let b = Monomial::new([0, 1, 1, -1]);
        let c = Monomial::new([-3, 2, 0, 0]);
        assert_eq!(a < b, a.mul(&c) < b.mul(&c));
    }

    #[test]
    fn display() {
        assert_eq!(Monomial::new([2, 0, 0, -1]).to_string(), "p^2*x^-1");
        assert_eq!(Monomial::ONE.to_string(), "1");
    }
}
