//! Stirling numbers of the second kind and their Bell sums, computed by
//! two-term recurrences. Every variant is a specialization of one row step
//!
//! ```text
//! S(n+1, k) = a(n, k) S(n, k-1) + b(n, k) S(n, k)
//! ```
//!
//! with `S(0, 0) = 1`.

mod store;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{Monomial, Polynomial, Rational, Var};
use crate::pqcore::{choose2, pq_number};

pub use store::StirlingStore;

/// The structure constant `h`: kept as the ring variable or fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HValue {
    Symbolic,
    Value(Rational),
}

impl HValue {
    pub fn one() -> Self {
        HValue::Value(Rational::from_integer(1.into()))
    }

    pub fn as_polynomial(&self) -> Polynomial {
        match self {
            HValue::Symbolic => Polynomial::var(Var::H),
            HValue::Value(v) => Polynomial::constant(v.clone()),
        }
    }
}

impl fmt::Display for HValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HValue::Symbolic => f.write_str("h"),
            HValue::Value(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StirlingKind {
    /// Normal-ordering coefficients of `(VU)^n` with `UV - qVU = h V^s W_p`.
    General { s: i64, h: HValue },
    /// Order-`m` numbers from `(X^m D)^n`.
    Touchard { m: i64 },
    /// `S_{p,q}`, the general kind at `s = 0, h = 1`.
    Pq,
    /// `S_q`: `S_{p,q}` at `p = 1`.
    Q,
    /// `S(n, k)`: `S_{p,q}` at `p = q = 1`.
    Classical,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StirlingVariant {
    #[serde(flatten)]
    pub kind: StirlingKind,
    /// Multiply entry `(n, k)` by `p^{C(k,2)}`.
    #[serde(default)]
    pub tilde: bool,
}

impl StirlingVariant {
    pub fn new(kind: StirlingKind) -> Self {
        StirlingVariant { kind, tilde: false }
    }

    pub fn tilde(kind: StirlingKind) -> Self {
        StirlingVariant { kind, tilde: true }
    }

    fn validate(&self) -> Result<()> {
        if let StirlingKind::Touchard { m: 0 } = self.kind {
            return Err(Error::InvalidArgument(
                "Touchard order m = 0 has no Stirling table".into(),
            ));
        }
        Ok(())
    }

    /// Coefficients `(a, b)` of the row step producing `S(n+1, k)`.
    fn step(&self, n: i64, k: i64) -> (Polynomial, Polynomial) {
        let pq = |pe: i64, qe: i64| {
            Polynomial::term(
                Rational::from_integer(1.into()),
                Monomial::new([pe as i32, qe as i32, 0, 0]),
            )
        };
        match &self.kind {
            StirlingKind::General { s, h } => (
                pq(n - k + 1, s * (n - k + 1) + k - 1),
                &h.as_polynomial() * &pq_number(s * (n - k) + k),
            ),
            StirlingKind::Touchard { m } => (
                pq(n - k + 1, (m - 1) * (n - k + 1) + m * (k - 1)),
                pq_number((m - 1) * (n - k) + m * k),
            ),
            StirlingKind::Pq | StirlingKind::Q | StirlingKind::Classical => {
                (pq(n - k + 1, k - 1), pq_number(k))
            }
        }
    }

    /// Applies the tilde weight and the variable specializations of the
    /// kind to a raw recurrence value.
    fn finish(&self, k: usize, raw: &Polynomial) -> Polynomial {
        let mut v = if self.tilde {
            raw.mul_monomial(&Monomial::var_pow(Var::P, choose2(k as i64) as i32))
        } else {
            raw.clone()
        };
        let one = Rational::from_integer(1.into());
        if matches!(self.kind, StirlingKind::Q | StirlingKind::Classical) {
            v = v.specialize(Var::P, &one).expect("p = 1 is always valid");
        }
        if matches!(self.kind, StirlingKind::Classical) {
            v = v.specialize(Var::Q, &one).expect("q = 1 is always valid");
        }
        v
    }
}

impl fmt::Display for StirlingVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tilde {
            f.write_str("tilde ")?;
        }
        match &self.kind {
            StirlingKind::General { s, h } => write!(f, "general(s={s}, h={h})"),
            StirlingKind::Touchard { m } => write!(f, "touchard(m={m})"),
            StirlingKind::Pq => f.write_str("pq"),
            StirlingKind::Q => f.write_str("q"),
            StirlingKind::Classical => f.write_str("classical"),
        }
    }
}

/// Rows `0..=max_n` of a Stirling triangle; row `n` has `n + 1` entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StirlingTable {
    variant: StirlingVariant,
    rows: Vec<Vec<Polynomial>>,
    #[serde(skip)]
    raw: Vec<Vec<Polynomial>>,
}

impl StirlingTable {
    pub fn new(variant: StirlingVariant, max_n: usize) -> Result<Self> {
        variant.validate()?;
        let mut table = StirlingTable {
            variant,
            rows: Vec::new(),
            raw: Vec::new(),
        };
        table.extend_to(max_n);
        Ok(table)
    }

    pub fn variant(&self) -> &StirlingVariant {
        &self.variant
    }

    pub fn max_n(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn rows(&self) -> &[Vec<Polynomial>] {
        &self.rows
    }

    /// Computes rows up to `max_n`. Existing rows are never touched.
    pub fn extend_to(&mut self, max_n: usize) {
        if self.raw.len() < self.rows.len() {
            // Loaded from disk without raw rows: rebuild them.
            self.raw.clear();
            let keep = self.rows.len();
            self.rows.clear();
            return self.extend_to(max_n.max(keep.saturating_sub(1)));
        }
        while self.raw.len() <= max_n {
            let row = match self.raw.last() {
                None => vec![Polynomial::one()],
                Some(prev) => {
                    let n = prev.len() - 1;
                    (0..=n + 1)
                        .map(|k| {
                            if k == 0 {
                                return Polynomial::zero();
                            }
                            let (a, b) = self.variant.step(n as i64, k as i64);
                            let mut v = &a * &prev[k - 1];
                            if k <= n {
                                v += &b * &prev[k];
                            }
                            v
                        })
                        .collect()
                }
            };
            let finished = row
                .iter()
                .enumerate()
                .map(|(k, v)| self.variant.finish(k, v))
                .collect();
            self.raw.push(row);
            self.rows.push(finished);
        }
    }

    /// Entry `(n, k)`; zero for `k > n`. Rows are extended on demand.
    pub fn entry(&mut self, n: usize, k: usize) -> Polynomial {
        self.extend_to(n);
        self.get(n, k).cloned().unwrap_or_default()
    }

    pub fn get(&self, n: usize, k: usize) -> Option<&Polynomial> {
        self.rows.get(n).and_then(|row| row.get(k))
    }

    /// `sum_k entry(n, k) x^k`.
    pub fn bell(&mut self, n: usize, x: &Polynomial) -> Polynomial {
        self.extend_to(n);
        let mut acc = Polynomial::zero();
        for v in self.rows[n].iter().rev() {
            acc = &(&acc * x) + v;
        }
        acc
    }
}

/// `S_{s;h}(n, k | p, q)`.
pub fn stirling_general(n: usize, k: usize, s: i64, h: &HValue) -> Polynomial {
    StirlingTable::new(
        StirlingVariant::new(StirlingKind::General { s, h: h.clone() }),
        n,
    )
    .expect("general variant is always valid")
    .entry(n, k)
}

/// Order-`m` Stirling number, the coefficient of `X^{n(m-1)+k} N^{n-k} D^k`
/// in `(X^m D)^n`.
pub fn stirling_touchard(n: usize, k: usize, m: i64) -> Result<Polynomial> {
    Ok(StirlingTable::new(StirlingVariant::new(StirlingKind::Touchard { m }), n)?.entry(n, k))
}

/// Bell polynomial `sum_k entry(n, k) x^k` of a variant.
pub fn bell(n: usize, variant: &StirlingVariant, x: &Polynomial) -> Result<Polynomial> {
    Ok(StirlingTable::new(variant.clone(), n)?.bell(n, x))
}

/// `S(n, k)` for `k = 0..=n`, by enumerating restricted growth strings
/// (one per set partition).
pub fn classical_oracle(n: usize) -> Result<Vec<u64>> {
    if n > 12 {
        return Err(Error::ResourceLimit(format!(
            "set-partition enumeration is limited to n <= 12, got {n}"
        )));
    }
    let mut counts = vec![0u64; n + 1];
    if n == 0 {
        counts[0] = 1;
        return Ok(counts);
    }
    // a[i] is the block of element i; a[0] = 0 and a[i] <= 1 + max(a[..i]).
    let mut a = vec![0usize; n];
    let mut max = vec![0usize; n];
    loop {
        counts[max[n - 1] + 1] += 1;
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Ok(counts);
            }
            if a[i] <= max[i - 1] {
                a[i] += 1;
                max[i] = max[i - 1].max(a[i]);
                for j in i + 1..n {
                    a[j] = 0;
                    max[j] = max[i];
                }
                break;
            }
            i -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::int;

    fn qq() -> Polynomial {
        Polynomial::var(Var::Q)
    }

    #[test]
    fn general_examples() {
        let h = HValue::Symbolic;
        for s in 0..3 {
            assert_eq!(stirling_general(2, 1, s, &h), Polynomial::var(Var::H));
            assert_eq!(stirling_general(2, 2, s, &h), qq());
            assert_eq!(stirling_general(3, 3, s, &h), qq().pow(3));
            let inner = &pq_number(2) + &Polynomial::monomial(1, &[(Var::P, 1), (Var::Q, s as i32)]);
            assert_eq!(
                stirling_general(3, 2, s, &h),
                &(&Polynomial::var(Var::H) * &qq()) * &inner
            );
        }
    }

    #[test]
    fn touchard_examples() {
        assert_eq!(stirling_touchard(2, 2, 1).unwrap(), qq());
        assert_eq!(stirling_touchard(2, 1, 1).unwrap(), Polynomial::one());
        let expected = &(&qq().pow(2) * &pq_number(4))
            + &(&Polynomial::monomial(1, &[(Var::P, 1), (Var::Q, 3)]) * &pq_number(2));
        assert_eq!(stirling_touchard(3, 2, 2).unwrap(), expected);
        assert_eq!(stirling_touchard(3, 1, 2).unwrap(), &pq_number(2) * &pq_number(3));
        assert!(stirling_touchard(2, 1, 0).is_err());
    }

    #[test]
    fn bell_examples() {
        let general = StirlingVariant::new(StirlingKind::General { s: 1, h: HValue::Symbolic });
        let one = Polynomial::one();
        assert_eq!(bell(2, &general, &one).unwrap(), &Polynomial::var(Var::H) + &qq());
        let classical = StirlingVariant::new(StirlingKind::Classical);
        assert_eq!(bell(4, &classical, &one).unwrap(), Polynomial::from_int(15));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(classical_oracle(4).unwrap(), vec![0, 1, 7, 6, 1]);
        assert_eq!(classical_oracle(0).unwrap(), vec![1]);
        assert_eq!(classical_oracle(3).unwrap().iter().sum::<u64>(), 5);
        assert_eq!(classical_oracle(1).unwrap(), vec![0, 1]);
        assert!(matches!(classical_oracle(13), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn classical_matches_oracle() {
        let mut t = StirlingTable::new(StirlingVariant::new(StirlingKind::Classical), 8).unwrap();
        for n in 0..=8 {
            let oracle = classical_oracle(n).unwrap();
            for (k, &c) in oracle.iter().enumerate() {
                assert_eq!(t.entry(n, k), Polynomial::constant(int(c as i64)));
            }
        }
    }

    #[test]
    fn numeric_h_matches_substitution() {
        let h = crate::laurent::ratio(3, 2);
        let mut sym = StirlingTable::new(
            StirlingVariant::new(StirlingKind::General { s: 2, h: HValue::Symbolic }),
            5,
        )
        .unwrap();
        let mut num = StirlingTable::new(
            StirlingVariant::new(StirlingKind::General { s: 2, h: HValue::Value(h.clone()) }),
            5,
        )
        .unwrap();
        for k in 0..=5 {
            assert_eq!(sym.entry(5, k).specialize(Var::H, &h).unwrap(), num.entry(5, k));
        }
    }

    #[test]
    fn table_serde_round_trip() {
        let t = StirlingTable::new(StirlingVariant::tilde(StirlingKind::Touchard { m: -1 }), 3).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        let mut back: StirlingTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back.rows(), t.rows());
        assert_eq!(back.variant(), t.variant());
        let mut fresh = t.clone();
        assert_eq!(back.entry(5, 2), fresh.entry(5, 2));
    }
}
