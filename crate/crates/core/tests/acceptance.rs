//! Acceptance gate: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use pqcalc::laurent::{int, point, Polynomial, Rational, Var};
use pqcalc::operator::{abstract_power_vu, extract_stirling};
use pqcalc::pqcore::{choose2, pq_number, Precision};
use pqcalc::pqcore::real::SumPolicy;
use pqcalc::stirling::{bell, stirling_general, stirling_touchard, HValue, StirlingKind, StirlingTable, StirlingVariant};
use pqcalc::touchard::{
    dobinski, spivey_m1_kind, spivey_sides, top_coefficient, touchard_recurrence_residual, touchard_symbolic,
    RecurrenceForm, SpiveyForm, SpiveyMode, SpiveySides, Verdict,
};
use pqcalc::verify::{verify, Identity, PointSampler, VerifyOptions};
use pqcalc::Result;

type Outcome = Result<Vec<String>>;
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

fn p(e: i32) -> Polynomial {
    Polynomial::var_pow(Var::P, e)
}

fn q(e: i32) -> Polynomial {
    Polynomial::var_pow(Var::Q, e)
}

fn h() -> Polynomial {
    Polynomial::var(Var::H)
}

fn expect(problems: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        problems.push(what());
    }
}

fn c1() -> Outcome {
    let mut bad = Vec::new();
    for s in 0..=2i64 {
        let sym = HValue::Symbolic;
        let want = [
            ((2, 1), h()),
            ((2, 2), q(1)),
            ((3, 1), &h().pow(2) * &pq_number(s + 1)),
            ((3, 2), &(&h() * &q(1)) * &(&pq_number(2) + &(&p(1) * &q(s as i32)))),
            ((3, 3), q(3)),
        ];
        for ((n, k), w) in want {
            let got = stirling_general(n, k, s, &sym);
            expect(&mut bad, got == w, || format!("s={s} ({n},{k}): {got} != {w}"));
        }
        let variant = StirlingVariant::new(StirlingKind::General { s, h: sym });
        let b2 = bell(2, &variant, &Polynomial::one())?;
        let b3 = bell(3, &variant, &Polynomial::one())?;
        let w3 = &(&q(3) + &(&(&h() * &q(1)) * &(&pq_number(2) + &(&q(s as i32) * &p(1)))))
            + &(&h().pow(2) * &pq_number(s + 1));
        expect(&mut bad, b2 == &h() + &q(1), || format!("s={s} B(2) = {b2}"));
        expect(&mut bad, b3 == w3, || format!("s={s} B(3) = {b3}"));
    }
    Ok(bad)
}

fn c2() -> Outcome {
    let mut bad = Vec::new();
    for s in 0..=2i64 {
        for n in 0..=6u32 {
            let oracle = abstract_power_vu(n, &int(s))?;
            for (k, want) in oracle.iter().enumerate() {
                let got = stirling_general(n as usize, k, s, &HValue::Symbolic);
                expect(&mut bad, &got == want, || format!("s={s} ({n},{k})"));
            }
        }
    }
    Ok(bad)
}

fn c3() -> Outcome {
    let mut bad = Vec::new();
    for m in [-2, -1, 1, 2, 3i64] {
        for n in 0..=6u32 {
            let oracle = extract_stirling(n, m)?;
            for (k, want) in oracle.iter().enumerate() {
                let got = stirling_touchard(n as usize, k, m)?;
                expect(&mut bad, &got == want, || format!("m={m} ({n},{k})"));
            }
        }
    }
    Ok(bad)
}

/// Number of partitions of an `n`-set into `k` blocks, by direct
/// enumeration of block assignments in first-occurrence order.
fn partitions(n: usize) -> Vec<u64> {
    fn walk(i: usize, n: usize, blocks: usize, counts: &mut [u64]) {
        if i == n {
            counts[blocks] += 1;
            return;
        }
        for b in 0..=blocks {
            walk(i + 1, n, blocks.max(b + 1), counts);
        }
    }
    let mut counts = vec![0; n + 1];
    walk(0, n, 0, &mut counts);
    counts
}

fn c4() -> Outcome {
    let mut bad = Vec::new();
    let one = Rational::from_integer(1.into());
    let at_one = |f: Polynomial| -> Result<Polynomial> { f.specialize(Var::P, &one)?.specialize(Var::Q, &one) };
    let classical = StirlingVariant::new(StirlingKind::Classical);
    for n in 0..=8usize {
        let counts = partitions(n);
        for (k, &c) in counts.iter().enumerate() {
            let got = at_one(stirling_general(n, k, 0, &HValue::one()))?;
            expect(&mut bad, got == Polynomial::from_int(c as i64), || format!("S({n},{k}) = {got}, want {c}"));
        }
        let b = bell(n, &classical, &Polynomial::one())?;
        let total: u64 = counts.iter().sum();
        expect(&mut bad, b == Polynomial::from_int(total as i64), || format!("B{n} = {b}, want {total}"));
    }
    let s42 = at_one(stirling_general(4, 2, 0, &HValue::one()))?;
    expect(&mut bad, s42 == Polynomial::from_int(7), || "S(4,2) != 7".into());
    expect(&mut bad, bell(4, &classical, &Polynomial::one())? == Polynomial::from_int(15), || "B4 != 15".into());
    expect(&mut bad, bell(3, &classical, &Polynomial::one())? == Polynomial::from_int(5), || "B3 != 5".into());
    Ok(bad)
}

fn c5() -> Outcome {
    let mut bad = Vec::new();
    let one = Rational::from_integer(1.into());
    let table = StirlingTable::new(StirlingVariant::new(StirlingKind::Q), 5)?;
    let rows = table.rows();
    for n in 1..=5usize {
        for k in 1..=n {
            let prev = |j: usize| rows[n - 1].get(j).cloned().unwrap_or_else(Polynomial::zero);
            let qk = pq_number(k as i64).specialize(Var::P, &one)?;
            let want = &(&q(k as i32 - 1) * &prev(k - 1)) + &(&qk * &prev(k));
            expect(&mut bad, rows[n][k] == want, || format!("q-recurrence ({n},{k})"));
            expect(&mut bad, !rows[n][k].contains_var(Var::P), || format!("p survives in ({n},{k})"));
        }
    }
    for n in 0..=5u32 {
        for mm in 0..=5 - n {
            let r = spivey_m1_kind(n, mm, StirlingKind::Q)?;
            expect(&mut bad, r.verdict == Verdict::Pass, || format!("q-Spivey n={n} m={mm}: {}", r.residual));
        }
    }
    Ok(bad)
}

fn report_ok(bad: &mut Vec<String>, id: Identity, order: Option<usize>) -> Result<()> {
    let opts = VerifyOptions { order, ..VerifyOptions::default() };
    let r = verify(id, &opts)?;
    for c in r.checks.iter().filter(|c| c.verdict != Verdict::Pass) {
        bad.push(format!("{id}: {} {}", c.name, c.params));
    }
    Ok(())
}

fn c6() -> Outcome {
    let mut bad = Vec::new();
    report_ok(&mut bad, Identity::ExpId, Some(12))?;
    report_ok(&mut bad, Identity::DqExp, Some(15))?;
    report_ok(&mut bad, Identity::Leibniz, None)?;
    Ok(bad)
}

fn c7() -> Outcome {
    let mut bad = Vec::new();
    for n in 0..=8u32 {
        let t = touchard_symbolic(n, 0).value;
        expect(&mut bad, t == p(choose2(n as i64) as i32), || format!("T^(0)_{n} = {t}"));
    }
    let pq = StirlingTable::new(StirlingVariant::new(StirlingKind::Pq), 6)?;
    for n in 0..=6u32 {
        let mut want = Polynomial::zero();
        for (k, c) in pq.rows()[n as usize].iter().enumerate() {
            want += &(c * &p(choose2(k as i64) as i32)) * &Polynomial::var_pow(Var::X, k as i32);
        }
        expect(&mut bad, touchard_symbolic(n, 1).value == want, || format!("T^(1)_{n}"));
    }
    for m in -2..=3i64 {
        let t = touchard_symbolic(1, m).value;
        expect(&mut bad, t == Polynomial::var_pow(Var::X, m as i32), || format!("T^({m})_1 = {t}"));
    }
    for m in 0..=3i64 {
        for n in 0..=6u32 {
            let t = touchard_symbolic(n, m).value;
            let top = n as i32 * m as i32;
            let mut lead = Polynomial::zero();
            for (mono, c) in t.terms() {
                if mono.exp(Var::X) == top {
                    lead.add_term(mono.with_exp(Var::X, 0), c.clone());
                }
            }
            let span_ok = t.exponent_range(Var::X).is_some_and(|(_, hi)| hi == top);
            let e = choose2(n as i64) as i32;
            let want = &p(e) * &q(e * m as i32);
            expect(&mut bad, span_ok && lead == want && top_coefficient(n, m) == want, || {
                format!("top coefficient m={m} n={n}: {lead}")
            });
        }
    }
    for m in [1, 2i64] {
        for n in 0..=4u32 {
            let r = touchard_recurrence_residual(n, m, 12, RecurrenceForm::Derived)?;
            expect(&mut bad, r.is_zero(), || format!("recurrence m={m} n={n}"));
        }
    }
    Ok(bad)
}

fn c8() -> Outcome {
    let mut bad = Vec::new();
    for n in 0..=6u32 {
        for l in 0..=6 - n {
            let r = spivey_sides(n, l, 1, SpiveyMode::SymbolicClassical, SpiveyForm::LemmaDerived, None)?;
            expect(&mut bad, r.residual.is_zero(), || format!("classical n={n} l={l}: {}", r.residual));
        }
    }
    for n in 0..=4u32 {
        for mm in 0..=4 - n {
            let r = spivey_m1_kind(n, mm, StirlingKind::Pq)?;
            expect(&mut bad, r.residual.is_zero(), || format!("(p,q) n={n} m={mm}: {}", r.residual));
        }
    }
    let mut rng = PointSampler::new(2024);
    for m in 1..=3i64 {
        for n in 0..=4u32 {
            for l in 0..=4 - n {
                let sides = SpiveySides::new(n, l, m, SpiveyForm::LemmaDerived)?;
                for pt in rng.points(&[Var::P, Var::Q, Var::X], 5) {
                    let r = sides.report(SpiveyMode::RationalPoint, Some(&pt))?;
                    expect(&mut bad, r.residual.is_zero(), || format!("m={m} n={n} l={l}: {}", r.residual));
                }
            }
        }
    }
    Ok(bad)
}

fn c9() -> Outcome {
    let mut bad = Vec::new();
    for id in [Identity::MainthmAudit, Identity::QhBinomialAudit] {
        let report = verify(id, &VerifyOptions::default())?;
        let json = serde_json::to_value(&report)?;
        let checks = json["checks"].as_array().cloned().unwrap_or_default();
        expect(&mut bad, !checks.is_empty(), || format!("{id}: empty report"));
        expect(&mut bad, checks.iter().all(|c| c.get("residual").is_some()), || {
            format!("{id}: check without residual")
        });
        let documented = report.checks.iter().filter(|c| c.verdict == Verdict::DiscrepancyDocumented).count();
        expect(&mut bad, documented > 0, || format!("{id}: no displayed form was compared"));
        for c in report.failures() {
            bad.push(format!("{id}: {} {}", c.name, c.params));
        }
    }
    Ok(bad)
}

fn c10() -> Outcome {
    let mut bad = Vec::new();
    let policy = SumPolicy::with_tol(1e-17);
    let grid = [(1, 2, 1, 4, 1, 1), (1, 1, 1, 2, 1, 1), (1, 1, 1, 2, 1, 2)];
    for m in [1, 2i64] {
        let mut table = StirlingTable::new(StirlingVariant::tilde(StirlingKind::Touchard { m }), 5)?;
        for &(pn, pd, qn, qd, xn, xd) in &grid {
            let pt = point(&[(Var::P, pn, pd), (Var::Q, qn, qd), (Var::X, xn, xd)]);
            let x = Polynomial::constant(pt[&Var::X].clone());
            for n in 0..=5u32 {
                let start = Instant::now();
                let exact = table.bell(n as usize, &x).evaluate(&pt)?;
                let exact: f64 = num_traits::ToPrimitive::to_f64(&exact).unwrap_or(f64::NAN);
                let (pf, qf, xf) = (pn as f64 / pd as f64, qn as f64 / qd as f64, xn as f64 / xd as f64);
                let d = dobinski(n, m as f64, pf, qf, xf, Precision::Double, &policy)?;
                let err = (d - exact).abs();
                expect(&mut bad, err < 1e-10, || format!("m={m} n={n} ({pf},{qf},{xf}): error {err:e}"));
                let took = start.elapsed();
                expect(&mut bad, took < Duration::from_secs(1), || format!("m={m} n={n} took {took:?}"));
            }
        }
    }
    Ok(bad)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("example table for n <= 3", c1, Some(1)),
        ("recurrence = abstract normal ordering", c2, Some(10)),
        ("order-m recurrence = (X^m D)^n normal ordering", c3, Some(30)),
        ("classical anchor against set partitions", c4, Some(5)),
        ("q-specialization recurrence and Spivey relation", c5, None),
        ("exponential, derivative and Leibniz identities", c6, None),
        ("Touchard polynomial laws", c7, None),
        ("Spivey relation, lemma-derived form", c8, Some(60)),
        ("audit reports for the displayed forms", c9, None),
        ("Dobinski series against tilde Bell values", c10, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let mut problems = match outcome {
            Ok(p) => p,
            Err(e) => vec![format!("error: {e}")],
        };
        if let Some(secs) = limit {
            if took > Duration::from_secs(secs) {
                problems.push(format!("took {took:.2?}, limit {secs} s"));
            }
        }
        let status = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} criterion {}: {name} ({took:.2?})", i + 1);
        for p in problems.iter().take(5) {
            println!("    {p}");
        }
        if !problems.is_empty() {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
