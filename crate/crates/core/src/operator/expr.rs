use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::laurent::{Polynomial, Var};

/// `X^x N_p^n D_{p,q}^d`, the normal-ordered operator monomial.
///
/// The same shape serves the abstract algebra, reading `x, n, d` as the
/// exponents of `V, W_p, U`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalTerm {
    pub x: i64,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "D")]
    pub d: u32,
}

impl NormalTerm {
    pub const IDENTITY: NormalTerm = NormalTerm { x: 0, n: 0, d: 0 };

    pub fn new(x: i64, n: u32, d: u32) -> Self {
        NormalTerm { x, n, d }
    }
}

impl fmt::Display for NormalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.x {
            0 => {}
            1 => parts.push("X".to_string()),
            e => parts.push(format!("X^{e}")),
        }
        match self.n {
            0 => {}
            1 => parts.push("N".to_string()),
            e => parts.push(format!("N^{e}")),
        }
        match self.d {
            0 => {}
            1 => parts.push("D".to_string()),
            e => parts.push(format!("D^{e}")),
        }
        if parts.is_empty() {
            f.write_str("I")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Finite linear combination of normal-ordered terms with Laurent
/// polynomial coefficients. No zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OperatorExpr {
    terms: BTreeMap<NormalTerm, Polynomial>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::term(Polynomial::one(), NormalTerm::IDENTITY)
    }

    pub fn term(coeff: Polynomial, t: NormalTerm) -> Self {
        let mut out = Self::zero();
        out.add_term(t, coeff);
        out
    }

    /// `X^k` (or `V^k`).
    pub fn x_pow(k: i64) -> Self {
        Self::term(Polynomial::one(), NormalTerm::new(k, 0, 0))
    }

    /// `N_p^k` (or `W_p^k`).
    pub fn n_pow(k: u32) -> Self {
        Self::term(Polynomial::one(), NormalTerm::new(0, k, 0))
    }

    /// `D_{p,q}^k` (or `U^k`).
    pub fn d_pow(k: u32) -> Self {
        Self::term(Polynomial::one(), NormalTerm::new(0, 0, k))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NormalTerm, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &NormalTerm) -> Polynomial {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, t: NormalTerm, c: Polynomial) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(t).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn add(&self, other: &OperatorExpr) -> OperatorExpr {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(*t, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &OperatorExpr) -> OperatorExpr {
        self.add(&other.scale(&Polynomial::from_int(-1)))
    }

    pub fn scale(&self, c: &Polynomial) -> OperatorExpr {
        let mut out = OperatorExpr::zero();
        for (t, a) in &self.terms {
            out.add_term(*t, a * c);
        }
        out
    }

    /// Applies `f` to every coefficient, e.g. to specialize a variable.
    pub fn map_coeffs<F, E>(&self, f: F) -> Result<OperatorExpr, E>
    where
        F: Fn(&Polynomial) -> Result<Polynomial, E>,
    {
        let mut out = OperatorExpr::zero();
        for (t, a) in &self.terms {
            out.add_term(*t, f(a)?);
        }
        Ok(out)
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.values().any(|c| c.contains_var(v))
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(t, c)| format!("({c}) {t}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Serialize)]
struct TermJson<'a> {
    x: i64,
    #[serde(rename = "N")]
    n: u32,
    #[serde(rename = "D")]
    d: u32,
    coeff: &'a Polynomial,
}

impl Serialize for OperatorExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermJson<'_>> = self
            .terms
            .iter()
            .map(|(t, c)| TermJson { x: t.x, n: t.n, d: t.d, coeff: c })
            .collect();
        let mut st = serializer.serialize_struct("OperatorExpr", 1)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}
