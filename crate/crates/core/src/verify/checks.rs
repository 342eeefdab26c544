use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use super::{Check, PointSampler, VerifyOptions};
use crate::error::{Error, Result};
use crate::laurent::{int, Monomial, Point, Polynomial, Rational, RationalFunction, Var};
use crate::operator::{
    abstract_power_vu, apply_to_poly, binomial_pair, extract_stirling, nc_binomial_expand, touchard_generator,
    Algebra, NormalTerm, OperatorExpr,
};
use crate::pqcore::real::SumPolicy;
use crate::pqcore::{
    binomial_base, bracket_in, choose2, exp_series, exp_series_scaled, gauss_binomial_in, h_param, negated,
    pq_gauss_binomial, pq_number, pq_number_real, qh_binomial, scaled_qh_binomial, ExpKind, Precision,
    TruncatedSeries,
};
use crate::stirling::{classical_oracle, stirling_general, HValue, StirlingKind, StirlingTable, StirlingVariant};
use crate::touchard::{
    dobinski, spivey_m1_kind, spivey_sides, top_coefficient, touchard_by_series, touchard_numeric,
    touchard_recurrence_residual, touchard_symbolic, RecurrenceForm, SpiveyForm, SpiveyMode, SpiveyReport,
    SpiveySides,
};

type Checks = Result<Vec<Check>>;

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// Nonzero coefficients only.
fn series_residual(s: &TruncatedSeries) -> Value {
    s.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| json!({ "k": k, "coeff": to_json(c) }))
        .collect()
}

fn row_residual(a: &[Polynomial], b: &[Polynomial]) -> (bool, Value) {
    let diffs: Vec<Polynomial> = (0..a.len().max(b.len()))
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_else(Polynomial::zero);
            let y = b.get(k).cloned().unwrap_or_else(Polynomial::zero);
            &x - &y
        })
        .collect();
    (diffs.iter().all(Polynomial::is_zero), to_json(&diffs))
}

fn p_pow(e: i64) -> Polynomial {
    Polynomial::var_pow(Var::P, e as i32)
}

fn q_pow(e: i64) -> Polynomial {
    Polynomial::var_pow(Var::Q, e as i32)
}

fn sample_count(opts: &VerifyOptions) -> usize {
    opts.points.max(5)
}

fn spivey_check(name: &str, report: &SpiveyReport) -> Check {
    Check {
        name: name.into(),
        params: to_json(&report.params),
        verdict: report.verdict,
        residual: to_json(&report.residual),
        note: None,
        detail: Some(to_json(report)),
    }
}

pub(super) fn exp_id(opts: &VerifyOptions) -> Checks {
    let order = opts.order.unwrap_or(12);
    if order == 0 {
        return Err(Error::InvalidArgument("exp-id needs order >= 1".into()));
    }
    let params = json!({ "order": order });
    let minus = negated(Polynomial::one());
    let one = TruncatedSeries::from_polynomial(&Polynomial::one(), order)?;
    let e = exp_series(ExpKind::LowerE, order);
    let big_e = exp_series(ExpKind::UpperE, order);

    let r1 = e.mul(&exp_series_scaled(ExpKind::UpperE, order, &minus)).sub(&one);
    let r2 = big_e.mul(&exp_series_scaled(ExpKind::LowerE, order, &minus)).sub(&one);
    let r3 = e.derivative()?.sub(&exp_series_scaled(ExpKind::LowerE, order - 1, &p_pow(1)));
    let r4 = big_e.derivative()?.sub(&exp_series_scaled(ExpKind::UpperE, order - 1, &q_pow(1)));
    Ok(vec![
        Check::exact("e(x) E(-x) = 1", params.clone(), r1.is_zero(), series_residual(&r1)),
        Check::exact("E(x) e(-x) = 1", params.clone(), r2.is_zero(), series_residual(&r2)),
        Check::exact("D e(x) = e(px)", params.clone(), r3.is_zero(), series_residual(&r3)),
        Check::exact("D E(x) = E(qx)", params, r4.is_zero(), series_residual(&r4)),
    ])
}

pub(super) fn leibniz(opts: &VerifyOptions) -> Checks {
    let mut rng = PointSampler::new(opts.seed);
    let d = |k: u32, f: &Polynomial| apply_to_poly(&OperatorExpr::d_pow(k), f);
    let one = Rational::one();
    let mut out = Vec::new();
    for n in 0..=4u32 {
        for trial in 0..sample_count(opts) {
            let f = rng.x_polynomial(4);
            let g = rng.x_polynomial(4);
            let lhs = d(n, &(&f * &g));
            let mut rhs = Polynomial::zero();
            for k in 0..=n {
                let a = d(n - k, &f).scale_var(Var::X, &one, &Monomial::var_pow(Var::P, k as i32))?;
                let b = d(k, &g).scale_var(Var::X, &one, &Monomial::var_pow(Var::Q, (n - k) as i32))?;
                rhs += &(&pq_gauss_binomial(n, k as i64)? * &a) * &b;
            }
            let r = &lhs - &rhs;
            out.push(Check::exact(
                "(p,q)-Leibniz rule",
                json!({ "n": n, "trial": trial, "f": f.to_string(), "g": g.to_string() }),
                r.is_zero(),
                to_json(&r),
            ));
        }
    }
    Ok(out)
}

pub(super) fn dq_exp(opts: &VerifyOptions) -> Checks {
    let order = opts.order.unwrap_or(15);
    let max_n = 5;
    if order < max_n {
        return Err(Error::InvalidArgument(format!("dq-exp needs order >= {max_n}")));
    }
    let mut lhs = exp_series(ExpKind::LowerE, order);
    let mut out = Vec::new();
    for n in 0..=max_n {
        if n > 0 {
            lhs = lhs.derivative()?;
        }
        let rhs = exp_series_scaled(ExpKind::LowerE, order - n, &p_pow(n as i64))
            .mul_polynomial(&p_pow(choose2(n as i64)))?;
        let r = lhs.sub(&rhs);
        out.push(Check::exact(
            "D^n e(x) = p^C(n,2) e(p^n x)",
            json!({ "n": n, "order": order - n }),
            r.is_zero(),
            series_residual(&r),
        ));
    }
    Ok(out)
}

pub(super) fn eq5(_opts: &VerifyOptions) -> Checks {
    let mut out = Vec::new();
    for s in 0..=2i64 {
        let alg = Algebra::symbolic(s);
        for k in 1..=8i64 {
            let lhs = alg
                .mul(&OperatorExpr::d_pow(1), &OperatorExpr::x_pow(k))
                .sub(&OperatorExpr::term(q_pow(k), NormalTerm::new(k, 0, 1)));
            let rhs = OperatorExpr::term(&Polynomial::var(Var::H) * &pq_number(k), NormalTerm::new(s + k - 1, 1, 0));
            let r = lhs.sub(&rhs);
            out.push(Check::exact(
                "U V^k - q^k V^k U = h [k] V^(s+k-1) W",
                json!({ "s": s, "k": k }),
                r.is_zero(),
                to_json(&r),
            ));
        }
    }
    let alg = Algebra::concrete();
    for k in -3..=8i64 {
        let lhs = alg.mul(&OperatorExpr::d_pow(1), &OperatorExpr::x_pow(k));
        let mut rhs = OperatorExpr::term(q_pow(k), NormalTerm::new(k, 0, 1));
        rhs.add_term(NormalTerm::new(k - 1, 1, 0), pq_number(k));
        let r = lhs.sub(&rhs);
        out.push(Check::exact(
            "D X^k = q^k X^k D + [k] X^(k-1) N",
            json!({ "k": k }),
            r.is_zero(),
            to_json(&r),
        ));
    }
    Ok(out)
}

/// Runs the oracle, turning a support violation into a failed check.
fn oracle_row(name: &str, params: &Value, row: Result<Vec<Polynomial>>) -> Result<std::result::Result<Vec<Polynomial>, Check>> {
    match row {
        Ok(r) => Ok(Ok(r)),
        Err(e @ Error::InternalInconsistency(_)) => {
            Ok(Err(Check::exact(name, params.clone(), false, json!(e.to_string()))))
        }
        Err(e) => Err(e),
    }
}

pub(super) fn prop21_oracle(_opts: &VerifyOptions) -> Checks {
    let mut out = Vec::new();
    let name = "order-m recurrence = normal ordering of (X^m D)^n";
    for m in [-2, -1, 1, 2, 3i64] {
        let table = StirlingTable::new(StirlingVariant::new(StirlingKind::Touchard { m }), 6)?;
        for n in 0..=6u32 {
            let params = json!({ "m": m, "n": n });
            match oracle_row(name, &params, extract_stirling(n, m))? {
                Ok(row) => {
                    let (zero, res) = row_residual(&table.rows()[n as usize], &row);
                    out.push(Check::exact(name, params, zero, res));
                }
                Err(c) => out.push(c),
            }
        }
    }

    let name = "S_pq recurrence = normal ordering of (XD)^n";
    let pq = StirlingTable::new(StirlingVariant::new(StirlingKind::Pq), 8)?;
    for n in 0..=8u32 {
        let params = json!({ "n": n });
        match oracle_row(name, &params, extract_stirling(n, 1))? {
            Ok(row) => {
                let (zero, res) = row_residual(&pq.rows()[n as usize], &row);
                out.push(Check::exact(name, params, zero, res));
            }
            Err(c) => out.push(c),
        }
    }

    // At p = q = 1 the m = 2 numbers are the Lah numbers C(n-1,k-1) n!/k!.
    let lah = StirlingTable::new(StirlingVariant::new(StirlingKind::Touchard { m: 2 }), 8)?;
    let one = Rational::one();
    for n in 1..=8i64 {
        let mut diffs = Vec::new();
        for k in 1..=n {
            let got = lah.rows()[n as usize][k as usize]
                .specialize(Var::P, &one)?
                .specialize(Var::Q, &one)?
                .as_constant()
                .unwrap_or_else(Rational::zero);
            let fact = |a: i64| (1..=a).product::<i64>();
            let want = num_integer::binomial(n - 1, k - 1) * fact(n) / fact(k);
            if got != int(want) {
                diffs.push(json!({ "k": k, "got": got.to_string(), "want": want }));
            }
        }
        out.push(Check::exact(
            "order-2 numbers at p = q = 1 are Lah numbers",
            json!({ "n": n }),
            diffs.is_empty(),
            Value::Array(diffs),
        ));
    }
    Ok(out)
}

pub(super) fn recst_oracle(_opts: &VerifyOptions) -> Checks {
    let mut out = Vec::new();
    let h = Polynomial::var(Var::H);
    let one = Rational::one();
    for s in 0..=2i64 {
        for n in 0..=6u32 {
            let oracle = abstract_power_vu(n, &int(s))?;
            let rec: Vec<Polynomial> =
                (0..=n as usize).map(|k| stirling_general(n as usize, k, s, &HValue::Symbolic)).collect();
            let (zero, res) = row_residual(&rec, &oracle);
            out.push(Check::exact(
                "recurrence = normal ordering of (VU)^n",
                json!({ "s": s, "n": n }),
                zero,
                res,
            ));
        }
        for n in 0..=10usize {
            let r = &stirling_general(n, n, s, &HValue::Symbolic) - &q_pow(choose2(n as i64));
            out.push(Check::exact("diagonal q^C(n,2)", json!({ "s": s, "n": n }), r.is_zero(), to_json(&r)));
        }
        for n in 1..=8usize {
            let mut want = h.pow(n as u32 - 1);
            for i in 1..n as i64 {
                want = &want * &pq_number(s * (i - 1) + 1);
            }
            let r = &stirling_general(n, 1, s, &HValue::Symbolic) - &want;
            out.push(Check::exact(
                "first column h^(n-1) prod [s(i-1)+1]",
                json!({ "s": s, "n": n }),
                r.is_zero(),
                to_json(&r),
            ));
        }
    }

    // Abstract algebra at s = 0, h = 1 is the concrete one.
    for n in 0..=6u32 {
        let abs: Vec<Polynomial> = abstract_power_vu(n, &int(0))?
            .iter()
            .map(|c| c.specialize(Var::H, &one))
            .collect::<Result<_>>()?;
        let (zero, res) = row_residual(&abs, &extract_stirling(n, 1)?);
        out.push(Check::exact("s = 0, h = 1 gives the (XD)^n coefficients", json!({ "n": n }), zero, res));
    }

    for n in 0..=8usize {
        let oracle = classical_oracle(n)?;
        let mut diffs = Vec::new();
        for (k, &want) in oracle.iter().enumerate() {
            let got = stirling_general(n, k, 0, &HValue::one())
                .specialize(Var::P, &one)?
                .specialize(Var::Q, &one)?;
            if got != Polynomial::from_int(want as i64) {
                diffs.push(json!({ "k": k, "got": got.to_string(), "want": want }));
            }
        }
        let bell = crate::stirling::bell(n, &StirlingVariant::new(StirlingKind::Classical), &Polynomial::one())?;
        let total: u64 = oracle.iter().sum();
        if bell != Polynomial::from_int(total as i64) {
            diffs.push(json!({ "bell": bell.to_string(), "want": total }));
        }
        out.push(Check::exact(
            "p = q = h = 1, s = 0 matches set-partition counts",
            json!({ "n": n }),
            diffs.is_empty(),
            Value::Array(diffs),
        ));
    }

    // q-Stirling recurrence and the p = 1 normal ordering.
    let qt = StirlingTable::new(StirlingVariant::new(StirlingKind::Q), 8)?;
    let qb = |k: i64| pq_number(k).specialize(Var::P, &one);
    for n in 1..=8usize {
        let rows = qt.rows();
        let mut diffs = Vec::new();
        for k in 1..=n {
            let prev = |j: usize| rows[n - 1].get(j).cloned().unwrap_or_else(Polynomial::zero);
            let want = &(&q_pow(k as i64 - 1) * &prev(k - 1)) + &(&qb(k as i64)? * &prev(k));
            let r = &rows[n][k] - &want;
            if !r.is_zero() {
                diffs.push(json!({ "k": k, "residual": to_json(&r) }));
            }
        }
        out.push(Check::exact(
            "S_q(n,k) = q^(k-1) S_q(n-1,k-1) + [k]_q S_q(n-1,k)",
            json!({ "n": n }),
            diffs.is_empty(),
            Value::Array(diffs),
        ));
    }
    for n in 0..=6u32 {
        let oracle: Vec<Polynomial> =
            extract_stirling(n, 1)?.iter().map(|c| c.specialize(Var::P, &one)).collect::<Result<_>>()?;
        let (zero, res) = row_residual(&qt.rows()[n as usize], &oracle);
        out.push(Check::exact("S_q = (XD)^n coefficients at p = 1", json!({ "n": n }), zero, res));
    }
    Ok(out)
}

pub(super) fn corollary_h(_opts: &VerifyOptions) -> Checks {
    let mut out = Vec::new();
    let h = Polynomial::var(Var::H);
    let h_num = Rational::new(3.into(), 2.into());
    for s in 0..=2i64 {
        for n in 0..=8usize {
            let mut diffs = Vec::new();
            for k in 0..=n {
                let base = stirling_general(n, k, s, &HValue::one());
                let sym = stirling_general(n, k, s, &HValue::Symbolic);
                let r = &sym - &(&h.pow((n - k) as u32) * &base);
                let num = stirling_general(n, k, s, &HValue::Value(h_num.clone()));
                let scale = (0..n - k).fold(Rational::one(), |acc, _| acc * &h_num);
                let r2 = &num - &base.scale(&scale);
                if !r.is_zero() || !r2.is_zero() {
                    diffs.push(json!({ "k": k, "symbolic": to_json(&r), "h=3/2": to_json(&r2) }));
                }
            }
            out.push(Check::exact(
                "S_{s;h}(n,k) = h^(n-k) S_{s;1}(n,k)",
                json!({ "s": s, "n": n }),
                diffs.is_empty(),
                Value::Array(diffs),
            ));
        }
    }
    Ok(out)
}

pub(super) fn mainlem1(_opts: &VerifyOptions) -> Checks {
    let alg = Algebra::concrete();
    let mut out = Vec::new();
    for m in [1, 2, 3i64] {
        let gen = touchard_generator(m);
        let y = OperatorExpr::term(Polynomial::one(), NormalTerm::new(m - 1, 1, 0));
        for s in 0..=3i64 {
            let (r, sop) = binomial_pair(m, s);
            let xs = OperatorExpr::x_pow(s);

            // R S - t S R = h S^2, with h S^2 written without denominators.
            let t = Polynomial::term(Rational::one(), binomial_base(m));
            let comm = alg.mul(&r, &sop).sub(&alg.mul(&sop, &r).scale(&t));
            let hs2 = &(&q_pow(s) * &pq_number(m - 1)) * &(&pq_number(s) * &p_pow(1 - m));
            let res = comm.sub(&alg.mul(&y, &y).scale(&hs2));
            out.push(Check::exact(
                "R S = t S R + h S^2",
                json!({ "m": m, "s": s }),
                res.is_zero(),
                to_json(&res),
            ));

            for n in 0..=4u32 {
                let params = json!({ "m": m, "s": s, "n": n });
                let expand = nc_binomial_expand(&r, &sop, n);
                let lhs = alg.mul(&alg.pow(&gen, n), &xs);
                let res = lhs.sub(&alg.mul(&xs, &expand));
                out.push(Check::exact("(X^m D)^n X^s = X^s (R + S)^n", params.clone(), res.is_zero(), to_json(&res)));

                let mut sum = OperatorExpr::zero();
                for a in 0..=n {
                    let coeff = &scaled_qh_binomial(n, a, m, s)? * &q_pow(s * (n - a) as i64);
                    let word = alg.mul(&alg.pow(&y, a), &alg.pow(&gen, n - a));
                    sum = sum.add(&word.scale(&coeff));
                }
                let res = expand.sub(&sum);
                out.push(Check::exact(
                    "(R + S)^n = sum_a binom [s]^a (X^(m-1) N)^a q^(s(n-a)) (X^m D)^(n-a)",
                    params,
                    res.is_zero(),
                    to_json(&res),
                ));
            }
        }
    }
    Ok(out)
}

pub(super) fn touchard_recurrence(opts: &VerifyOptions) -> Checks {
    let order = opts.order.unwrap_or(12);
    let mut out = Vec::new();

    for n in 0..=8u32 {
        let want = p_pow(choose2(n as i64));
        let sym = &touchard_symbolic(n, 0).value - &want;
        let series = touchard_by_series(n, 0, order + n as usize)?;
        let ok = sym.is_zero() && series.agrees_with(&want)?;
        out.push(Check::exact("T^(0)_n = p^C(n,2)", json!({ "n": n }), ok, to_json(&sym)));
    }

    let pq = StirlingTable::new(StirlingVariant::new(StirlingKind::Pq), 6)?;
    for n in 0..=6u32 {
        let mut want = Polynomial::zero();
        for (k, c) in pq.rows()[n as usize].iter().enumerate() {
            want += &(c * &p_pow(choose2(k as i64))) * &Polynomial::var_pow(Var::X, k as i32);
        }
        let r = &touchard_symbolic(n, 1).value - &want;
        out.push(Check::exact(
            "T^(1)_n = sum p^C(k,2) S_pq(n,k) x^k",
            json!({ "n": n }),
            r.is_zero(),
            to_json(&r),
        ));
    }

    for m in -2..=3i64 {
        let r = &touchard_symbolic(1, m).value - &Polynomial::var_pow(Var::X, m as i32);
        out.push(Check::exact("T^(m)_1 = x^m", json!({ "m": m }), r.is_zero(), to_json(&r)));
    }

    for m in 0..=3i64 {
        for n in 0..=6u32 {
            let t = touchard_symbolic(n, m).value;
            let top = (n as i64 * m) as i32;
            let mut top_part = Polynomial::zero();
            for (mono, c) in t.terms() {
                if mono.exp(Var::X) == top {
                    top_part.add_term(mono.with_exp(Var::X, 0), c.clone());
                }
            }
            let max_ok = t.exponent_range(Var::X).is_some_and(|(_, hi)| hi == top);
            let r = &top_part - &top_coefficient(n, m);
            out.push(Check::exact(
                "top coefficient (p q^m)^C(n,2)",
                json!({ "m": m, "n": n }),
                max_ok && r.is_zero(),
                to_json(&r),
            ));
        }
    }

    for m in [1, 2i64] {
        for n in 0..=4u32 {
            let r = touchard_recurrence_residual(n, m, order, RecurrenceForm::Derived)?;
            out.push(Check::exact(
                "T_(n+1) = x^m (p^n N_p + E(-p^(n+1) x) e(p^n q x) D) T_n",
                json!({ "m": m, "n": n, "order": order }),
                r.is_zero(),
                series_residual(&r),
            ));
        }
    }

    for m in 1..=3i64 {
        for n in 0..=5u32 {
            let s = touchard_by_series(n, m, n as usize + 2)?;
            let t = touchard_symbolic(n, m).value;
            let r = s.sub(&TruncatedSeries::from_polynomial(&t, s.order())?);
            out.push(Check::exact(
                "E(-p^n x) (X^m D)^n e(x) = T^(m)_n",
                json!({ "m": m, "n": n, "order": s.order() }),
                r.is_zero(),
                series_residual(&r),
            ));
        }
    }
    Ok(out)
}

pub(super) fn spivey(opts: &VerifyOptions) -> Checks {
    let mut out = Vec::new();
    for n in 0..=6u32 {
        for l in 0..=6 - n {
            let r = spivey_sides(n, l, 1, SpiveyMode::SymbolicClassical, SpiveyForm::LemmaDerived, None)?;
            out.push(spivey_check("classical reduction", &r));
        }
    }
    for (n, l) in [(1, 1), (2, 1), (1, 2)] {
        let r = spivey_sides(n, l, 1, SpiveyMode::Symbolic, SpiveyForm::LemmaDerived, None)?;
        out.push(spivey_check("symbolic, m = 1", &r));
    }
    let mut rng = PointSampler::new(opts.seed);
    let vars = [Var::P, Var::Q, Var::X];
    for m in 1..=3i64 {
        for n in 0..=4u32 {
            for l in 0..=4 - n {
                let sides = SpiveySides::new(n, l, m, SpiveyForm::LemmaDerived)?;
                for pt in rng.points(&vars, sample_count(opts)) {
                    let r = sides.report(SpiveyMode::RationalPoint, Some(&pt))?;
                    out.push(spivey_check("rational point", &r));
                }
            }
        }
    }
    Ok(out)
}

pub(super) fn spivey_m1(_opts: &VerifyOptions) -> Checks {
    let mut out = Vec::new();
    for (kind, total, name) in [
        (StirlingKind::Pq, 4, "(p,q) relation"),
        (StirlingKind::Q, 5, "q relation (p = 1)"),
        (StirlingKind::Classical, 6, "classical relation"),
    ] {
        for n in 0..=total {
            for mm in 0..=total - n {
                out.push(spivey_check(name, &spivey_m1_kind(n, mm, kind.clone())?));
            }
        }
    }
    Ok(out)
}

/// Exact `sum_k S(n,k) x^k` for the tilde order-`m` table, as `f64`.
fn tilde_bell_value(table: &StirlingTable, n: usize, pt: &Point) -> Result<f64> {
    let mut acc = Rational::zero();
    let x = &pt[&Var::X];
    let mut xk = Rational::one();
    for c in &table.rows()[n] {
        acc += c.evaluate(pt)? * &xk;
        xk *= x;
    }
    acc.to_f64().ok_or_else(|| Error::InvalidArgument("value out of f64 range".into()))
}

pub(super) fn dobinski_grid(opts: &VerifyOptions) -> Checks {
    let policy = SumPolicy::with_tol(1e-17);
    let grid = [(1, 2, 1, 4, 1, 1), (1, 1, 1, 2, 1, 1), (1, 1, 1, 2, 1, 2)];
    let mut out = Vec::new();
    for m in [1, 2i64] {
        let table = StirlingTable::new(StirlingVariant::tilde(StirlingKind::Touchard { m }), 5)?;
        for &(pn, pd, qn, qd, xn, xd) in &grid {
            let pt = crate::laurent::point(&[(Var::P, pn, pd), (Var::Q, qn, qd), (Var::X, xn, xd)]);
            let (p, q, x) = (pn as f64 / pd as f64, qn as f64 / qd as f64, xn as f64 / xd as f64);
            for n in 0..=5u32 {
                let params = json!({ "m": m, "n": n, "p": p, "q": q, "x": x });
                let exact = tilde_bell_value(&table, n as usize, &pt)?;
                let d = dobinski(n, m as f64, p, q, x, Precision::Double, &policy)?;
                let err = (d - exact).abs();
                out.push(Check::exact(
                    "Dobinski series = tilde Bell polynomial",
                    params.clone(),
                    err < opts.tol,
                    json!({ "value": d, "exact": exact, "abs_error": err }),
                ));

                let t_exact = touchard_symbolic(n, m).value.evaluate(&pt)?.to_f64().unwrap_or(f64::NAN);
                let t = touchard_numeric(n, m as f64, p, q, x, Precision::Double, &policy)?;
                let err = (t - t_exact).abs();
                out.push(Check::exact(
                    "termwise Touchard = symbolic Touchard",
                    params,
                    err < opts.tol,
                    json!({ "value": t, "exact": t_exact, "abs_error": err }),
                ));
            }
        }
    }
    Ok(out)
}

/// An operator expression with its coefficients evaluated at `(p, q)`.
type Evaluated = BTreeMap<NormalTerm, Rational>;

fn eval_expr(e: &OperatorExpr, pt: &Point) -> Result<Evaluated> {
    let mut out = Evaluated::new();
    for (t, c) in e.terms() {
        let v = c.evaluate(pt)?;
        if !v.is_zero() {
            out.insert(*t, v);
        }
    }
    Ok(out)
}

fn accumulate(acc: &mut Evaluated, word: &Evaluated, c: &Rational) {
    for (t, v) in word {
        let slot = acc.entry(*t).or_insert_with(Rational::zero);
        *slot += v * c;
    }
    acc.retain(|_, v| !v.is_zero());
}

fn eval_diff(a: &Evaluated, b: &Evaluated) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for t in a.keys().chain(b.keys()) {
        let x = a.get(t).cloned().unwrap_or_else(Rational::zero);
        let y = b.get(t).cloned().unwrap_or_else(Rational::zero);
        if x != y {
            out.insert(t.to_string(), (x - y).to_string());
        }
    }
    out
}

#[derive(Clone, Copy)]
enum QhReading {
    ProductOverS,
    ProductOverR,
    ExplicitConversion,
}

impl QhReading {
    fn name(self) -> &'static str {
        match self {
            QhReading::ProductOverS => "base (q/p)^(m-1), product over the S-power",
            QhReading::ProductOverR => "base (q/p)^(m-1), product over the R-power (displayed form)",
            QhReading::ExplicitConversion => "explicit (p,q,h) conversion with bases p^(m-1), q^(m-1)",
        }
    }

    /// Coefficient of `S^a R^(n-a)` in `(R + S)^n`, `R S = t S R + h S^2`.
    fn coeff(self, n: u32, a: u32, m: i64, s: i64) -> Result<RationalFunction> {
        let t: RationalFunction = Polynomial::term(Rational::one(), binomial_base(m)).into();
        let h = h_param(m, s)?.value;
        match self {
            QhReading::ProductOverS => qh_binomial(n, a, &t, &h),
            // Gauss binomials are symmetric, so only the product moves.
            QhReading::ProductOverR => qh_binomial(n, n - a, &t, &h),
            QhReading::ExplicitConversion => {
                let big_p = Monomial::var_pow(Var::P, (m - 1) as i32);
                let big_q = Monomial::var_pow(Var::Q, (m - 1) as i32);
                let k = (n - a) as i64;
                let lead = Polynomial::term(Rational::one(), big_p.pow((k * (k - 1)) as i32));
                let mut out: RationalFunction = (&lead * &gauss_binomial_in(n, a as i64, &big_p, &big_q)?).into();
                let shift = Polynomial::term(Rational::one(), big_p.pow(1 - n as i32));
                for j in 0..k {
                    let term = h.mul_poly(&(&shift * &bracket_in(j, &big_p, &big_q)));
                    out = &out * &(&RationalFunction::one() + &term);
                }
                Ok(out)
            }
        }
    }
}

pub(super) fn qh_binomial_audit(opts: &VerifyOptions) -> Checks {
    let alg = Algebra::concrete();
    let mut rng = PointSampler::new(opts.seed);
    let mut out = Vec::new();

    // n = 2 by hand: (R+S)^2 = R^2 + (1+t) S R + (1+h) S^2.
    {
        let t = RationalFunction::from(Polynomial::var(Var::Q));
        let h = RationalFunction::from(Polynomial::var(Var::H));
        let sr = qh_binomial(2, 1, &t, &h)?;
        let ss = qh_binomial(2, 2, &t, &h)?;
        let want_sr = &RationalFunction::one() + &t;
        let want_ss = &RationalFunction::one() + &h;
        let r1 = &sr - &want_sr;
        let r2 = &ss - &want_ss;
        out.push(Check::exact(
            "n = 2 expansion: S R -> 1 + q, S^2 -> 1 + h",
            json!({ "n": 2 }),
            r1.is_zero() && r2.is_zero(),
            json!({ "SR": to_json(&r1), "SS": to_json(&r2) }),
        ));
    }

    for m in [2, 3i64] {
        for s in 1..=3i64 {
            let (r, sop) = binomial_pair(m, s);
            for n in 0..=4u32 {
                let oracle = nc_binomial_expand(&r, &sop, n);
                let words: Vec<OperatorExpr> = (0..=n)
                    .map(|a| alg.mul(&alg.pow(&sop, a), &alg.pow(&r, n - a)))
                    .collect();
                let points = rng.points(&[Var::P, Var::Q], sample_count(opts));
                for reading in [QhReading::ProductOverS, QhReading::ProductOverR, QhReading::ExplicitConversion] {
                    let coeffs: Vec<RationalFunction> =
                        (0..=n).map(|a| reading.coeff(n, a, m, s)).collect::<Result<_>>()?;
                    let mut residuals = Vec::new();
                    for pt in &points {
                        let mut sum = Evaluated::new();
                        for (a, w) in words.iter().enumerate() {
                            let c = coeffs[a].evaluate(pt)?;
                            accumulate(&mut sum, &eval_expr(w, pt)?, &c);
                        }
                        let diff = eval_diff(&eval_expr(&oracle, pt)?, &sum);
                        if !diff.is_empty() {
                            residuals.push(json!({
                                "p": pt[&Var::P].to_string(),
                                "q": pt[&Var::Q].to_string(),
                                "terms": diff,
                            }));
                        }
                    }
                    let params = json!({ "m": m, "s": s, "n": n, "points": points.len() });
                    let zero = residuals.is_empty();
                    let residual = Value::Array(residuals);
                    out.push(match reading {
                        QhReading::ProductOverS => Check::exact(reading.name(), params, zero, residual),
                        _ => Check::audit(
                            reading.name(),
                            params,
                            zero,
                            residual,
                            "displayed binomial form compared against the normal-ordered (R + S)^n",
                        ),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Row `n` of the order-`m` recurrence in floating point, with the bracket
/// `[a]` taken as `[m]_{p,q} [a/m]_{P, q^m}` for the given first base `P`.
fn touchard_row_f64(n: usize, m: i64, p: f64, q: f64, big_p: f64) -> Result<Vec<f64>> {
    let mf = m as f64;
    let sigma = (mf - 1.0) / mf;
    let qm = q.powf(mf);
    let hm = pq_number_real(mf, p, q)?;
    let mut row = vec![1.0];
    for r in 0..n {
        let mut next = vec![0.0; r + 2];
        for (k, slot) in next.iter_mut().enumerate().skip(1) {
            let (ri, ki) = (r as f64, k as f64);
            let a = p.powf(ri - ki + 1.0) * qm.powf(sigma * (ri - ki + 1.0) + ki - 1.0);
            let b = hm * pq_number_real(sigma * (ri - ki) + ki, big_p, qm)?;
            let prev = row.get(k - 1).copied().unwrap_or(0.0);
            let same = row.get(k).copied().unwrap_or(0.0);
            *slot = a * prev + b * same;
        }
        row = next;
    }
    Ok(row)
}

pub(super) fn mainthm_audit(_opts: &VerifyOptions) -> Checks {
    let mut out = Vec::new();
    for m in 1..=3i64 {
        for n in 0..=3u32 {
            for l in 0..=3 - n {
                for form in SpiveyForm::ALL {
                    let mode = match form {
                        SpiveyForm::LemmaDerived => SpiveyMode::Symbolic,
                        _ => SpiveyMode::Audit,
                    };
                    let sides = SpiveySides::new(n, l, m, form)?;
                    let mut check = spivey_check(&format!("Spivey relation, {form} form"), &sides.report(mode, None)?);
                    if form != SpiveyForm::LemmaDerived {
                        check.note = Some(match form {
                            SpiveyForm::LemmaLiteral => "p-exponent (m-1)((n-k)(1+k)+kl) as stated".into(),
                            _ => "displayed form: no bracket power, unscaled binomial".into(),
                        });
                    }
                    out.push(check);
                }
            }
        }
    }

    for m in [1, 2i64] {
        for n in 0..=4u32 {
            let r = touchard_recurrence_residual(n, m, 12, RecurrenceForm::Display)?;
            out.push(Check::audit(
                "Touchard recurrence, displayed form x^m (N_p + E(-p^(n+1) x) e(p^n q x) D) T_n",
                json!({ "m": m, "n": n, "order": 12 }),
                r.is_zero(),
                series_residual(&r),
                "the displayed form omits p^n in front of N_p",
            ));
        }
    }

    // Bracket bases of the order-m recurrence, as real numbers.
    for (p, q) in [(0.7, 0.4), (1.3, 0.6)] {
        for m in [2, 3i64] {
            let n = 5usize;
            let oracle: Vec<f64> = (0..=n)
                .map(|k| Ok(crate::stirling::stirling_touchard(n, k, m)?.eval_f64([p, q, 0.0, 0.0])))
                .collect::<Result<_>>()?;
            for (name, big_p, exact) in [
                ("bracket base (p^m, q^m)", p.powf(m as f64), true),
                ("bracket base (p, q^m)", p, false),
            ] {
                let row = touchard_row_f64(n, m, p, q, big_p)?;
                let errs: Vec<f64> = row
                    .iter()
                    .zip(&oracle)
                    .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
                    .collect();
                let max_err = errs.iter().copied().fold(0.0, f64::max);
                let params = json!({ "m": m, "n": n, "p": p, "q": q });
                let residual = json!({ "max_relative_error": max_err, "row": row, "oracle": oracle });
                let ok = max_err < 1e-9;
                out.push(if exact {
                    Check::exact(name, params, ok, residual)
                } else {
                    Check::audit(name, params, ok, residual, "literal reading of the recurrence's bracket base")
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::touchard::Verdict;

    fn all_pass(checks: &[Check]) {
        for c in checks {
            assert_eq!(c.verdict, Verdict::Pass, "{} {} {}", c.name, c.params, c.residual);
        }
    }

    #[test]
    fn fast_identities_pass() {
        let opts = VerifyOptions::default();
        all_pass(&exp_id(&opts).unwrap());
        all_pass(&dq_exp(&opts).unwrap());
        all_pass(&eq5(&opts).unwrap());
        all_pass(&corollary_h(&opts).unwrap());
    }

    #[test]
    fn bracket_base_literal_reading_differs() {
        let checks = mainthm_audit(&VerifyOptions::default()).unwrap();
        let literal: Vec<_> = checks.iter().filter(|c| c.name == "bracket base (p, q^m)").collect();
        assert!(!literal.is_empty());
        assert!(literal.iter().all(|c| c.verdict == Verdict::DiscrepancyDocumented));
        assert!(checks.iter().all(|c| c.verdict != Verdict::Fail));
    }
}
