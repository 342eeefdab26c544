//! Surface syntax for operator words.
//!
//! ```text
//! word   := factor+
//! factor := atom ['^' signed-int]
//! atom   := 'X' | 'D' | 'N' | '(' word ')'
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::operator::{Algebra, OperatorExpr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    X,
    D,
    N,
    Group(OperatorWord),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub atom: Atom,
    pub exp: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorWord {
    pub factors: Vec<Factor>,
}

impl OperatorWord {
    /// The normal-ordered product of the factors.
    pub fn to_expr(&self, alg: &Algebra) -> OperatorExpr {
        let parts: Vec<OperatorExpr> = self
            .factors
            .iter()
            .map(|f| match &f.atom {
                Atom::X => OperatorExpr::x_pow(f.exp),
                Atom::D => OperatorExpr::d_pow(f.exp as u32),
                Atom::N => OperatorExpr::n_pow(f.exp as u32),
                Atom::Group(w) => alg.pow(&w.to_expr(alg), f.exp as u32),
            })
            .collect();
        alg.product(parts.iter())
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match &factor.atom {
                Atom::X => f.write_str("X")?,
                Atom::D => f.write_str("D")?,
                Atom::N => f.write_str("N")?,
                Atom::Group(w) => write!(f, "({w})")?,
            }
            if factor.exp != 1 {
                write!(f, "^{}", factor.exp)?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Parse {
            offset: self.pos,
            expected: expected.into(),
        })
    }

    fn word(&mut self) -> Result<OperatorWord> {
        let mut factors = Vec::new();
        while matches!(self.peek(), Some(b'X' | b'D' | b'N' | b'(')) {
            factors.push(self.factor()?);
        }
        if factors.is_empty() {
            return self.fail("one of X, D, N, (");
        }
        Ok(OperatorWord { factors })
    }

    fn factor(&mut self) -> Result<Factor> {
        let atom = match self.peek() {
            Some(b'X') => Atom::X,
            Some(b'D') => Atom::D,
            Some(b'N') => Atom::N,
            Some(b'(') => {
                self.pos += 1;
                let inner = self.word()?;
                if self.peek() != Some(b')') {
                    return self.fail("one of X, D, N, (, )");
                }
                Atom::Group(inner)
            }
            _ => return self.fail("one of X, D, N, ("),
        };
        self.pos += 1;
        let mut exp = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let exp_at = self.pos;
            exp = self.signed_int()?;
            if exp < 0 && atom != Atom::X {
                return Err(Error::Parse {
                    offset: exp_at,
                    expected: "a nonnegative exponent (only X takes negative powers)".into(),
                });
            }
        }
        Ok(Factor { atom, exp })
    }

    fn signed_int(&mut self) -> Result<i64> {
        let begin = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.pos == digits {
            return self.fail("an integer exponent");
        }
        let text = std::str::from_utf8(&self.src[begin..self.pos]).expect("ascii");
        text.parse().map_err(|_| Error::Parse {
            offset: begin,
            expected: "an exponent that fits in 64 bits".into(),
        })
    }
}

pub fn parse_word(text: &str) -> Result<OperatorWord> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let word = p.word()?;
    if p.peek().is_some() {
        return p.fail("one of X, D, N, ( or end of input");
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grouped_power() {
        let w = parse_word("(X^2 D)^3").unwrap();
        assert_eq!(w.factors.len(), 1);
        assert_eq!(w.factors[0].exp, 3);
        let Atom::Group(inner) = &w.factors[0].atom else { panic!() };
        assert_eq!(inner.factors, vec![Factor { atom: Atom::X, exp: 2 }, Factor { atom: Atom::D, exp: 1 }]);
    }

    #[test]
    fn two_factors() {
        let w = parse_word("D X").unwrap();
        assert_eq!(w.factors.len(), 2);
        assert_eq!(parse_word("DX").unwrap(), w);
        assert_eq!(w.to_string(), "D X");
    }

    #[test]
    fn errors_carry_offsets() {
        assert!(matches!(parse_word("D^-1"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse_word("(X D)^-2"), Err(Error::Parse { offset: 6, .. })));
        assert!(parse_word("X^-3").is_ok());
        assert!(matches!(parse_word("X Y"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse_word("(X"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse_word(""), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(parse_word("X^"), Err(Error::Parse { offset: 2, .. })));
    }
}
