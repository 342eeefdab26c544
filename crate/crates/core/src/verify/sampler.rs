use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::laurent::{ratio, Point, Polynomial, Rational, Var};

/// Deterministic source of small-height positive rationals.
///
/// Numerators and denominators lie in `1..=13`; points never have `p = q`,
/// so no twin-basic bracket `[k]_{p,q}` with `k != 0` vanishes.
#[derive(Debug, Clone)]
pub struct PointSampler {
    rng: ChaCha8Rng,
}

impl PointSampler {
    pub fn new(seed: u64) -> Self {
        PointSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rational(&mut self) -> Rational {
        ratio(self.rng.gen_range(1..=13), self.rng.gen_range(1..=13))
    }

    /// Values for `vars`, redrawn until `p != q` and the point is new.
    pub fn point(&mut self, vars: &[Var], seen: &[Point]) -> Point {
        loop {
            let pt: Point = vars.iter().map(|&v| (v, self.rational())).collect();
            let distinct = match (pt.get(&Var::P), pt.get(&Var::Q)) {
                (Some(p), Some(q)) => p != q,
                _ => true,
            };
            if distinct && !seen.contains(&pt) {
                return pt;
            }
        }
    }

    pub fn points(&mut self, vars: &[Var], count: usize) -> Vec<Point> {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let pt = self.point(vars, &out);
            out.push(pt);
        }
        out
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// Random polynomial in `x` of degree at most `deg` with integer
    /// coefficients in `-5..=5`.
    pub fn x_polynomial(&mut self, deg: i32) -> Polynomial {
        let mut f = Polynomial::zero();
        for e in 0..=deg {
            let c = self.int(-5, 5);
            f += Polynomial::var_pow(Var::X, e).scale(&Rational::from_integer(c.into()));
        }
        f
    }
}
