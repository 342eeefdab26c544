//! The `pqcalc` command line.
//!
//! Exit codes: 0 success, 1 identity violated or audit discrepancy,
//! 2 usage error, 3 numeric nonconvergence.

mod word;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::laurent::{Point, Polynomial, Rational, Var};
use crate::operator::{Algebra, OperatorExpr};
use crate::pqcore::real::SumPolicy;
use crate::pqcore::Precision;
use crate::stirling::{HValue, StirlingKind, StirlingStore, StirlingTable, StirlingVariant};
use crate::touchard::{dobinski, touchard_numeric, touchard_symbolic, Verdict};
use crate::verify::{verify, Identity, VerifyOptions};

pub use word::{parse_word, Atom, Factor, OperatorWord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pqcalc", version, about = "Exact (p,q)-deformed normal ordering, Stirling and Touchard computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal-order an operator word such as "(X^2 D)^3".
    NormalOrder {
        word: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print a Stirling triangle.
    Stirling(StirlingArgs),
    /// Print a Bell polynomial (or its value at a point).
    Bell(BellArgs),
    /// Touchard polynomial, symbolic or evaluated at real (p, q, x).
    Touchard(TouchardArgs),
    /// Dobinski series for the tilde Bell polynomial at real (p, q, x).
    Dobinski(NumericArgs),
    /// Run a named identity check.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantName {
    General,
    Touchard,
    Pq,
    Q,
    Classical,
}

#[derive(Debug, Args)]
pub struct VariantArgs {
    #[arg(long, value_enum, default_value_t = VariantName::General)]
    variant: VariantName,
    /// Exponent `s` of the general variant.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    s: i64,
    /// `h` of the general variant: `h` (symbolic) or a rational.
    #[arg(long, default_value = "h")]
    h: String,
    /// Order `m` of the Touchard variant.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    m: i64,
    /// Multiply entry (n, k) by p^C(k,2).
    #[arg(long)]
    tilde: bool,
}

impl VariantArgs {
    fn variant(&self) -> Result<StirlingVariant> {
        let kind = match self.variant {
            VariantName::General => StirlingKind::General {
                s: self.s,
                h: parse_h(&self.h)?,
            },
            VariantName::Touchard => StirlingKind::Touchard { m: self.m },
            VariantName::Pq => StirlingKind::Pq,
            VariantName::Q => StirlingKind::Q,
            VariantName::Classical => StirlingKind::Classical,
        };
        Ok(StirlingVariant { kind, tilde: self.tilde })
    }
}

#[derive(Debug, Args)]
pub struct StirlingArgs {
    #[command(flatten)]
    variant: VariantArgs,
    #[arg(long)]
    max_n: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// JSON table store, created if missing.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Evaluation point for CSV, e.g. `p=1/2,q=1/3,h=2`.
    #[arg(long)]
    point: Option<String>,
}

#[derive(Debug, Args)]
pub struct BellArgs {
    #[command(flatten)]
    variant: VariantArgs,
    #[arg(long)]
    n: usize,
    /// Rational value of x; symbolic when absent.
    #[arg(long)]
    x: Option<String>,
    /// Evaluate the result at this point, e.g. `p=2,q=3`.
    #[arg(long)]
    point: Option<String>,
}

#[derive(Debug, Args)]
pub struct TouchardArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, allow_negative_numbers = true)]
    m: f64,
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// `double` or `decimal:<digits>`.
    #[arg(long, default_value = "double")]
    precision: String,
    #[arg(long, default_value_t = 1e-17)]
    tol: f64,
}

#[derive(Debug, Args)]
pub struct NumericArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, allow_negative_numbers = true)]
    m: f64,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    q: f64,
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    #[arg(long, default_value = "double")]
    precision: String,
    #[arg(long, default_value_t = 1e-17)]
    tol: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    identity: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    points: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    order: Option<usize>,
}

fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("`{s}` is not a rational number")))
}

fn parse_h(s: &str) -> Result<HValue> {
    if s == "h" {
        Ok(HValue::Symbolic)
    } else {
        Ok(HValue::Value(parse_rational(s)?))
    }
}

/// `p=1/2,q=3` style assignments.
pub fn parse_point(s: &str) -> Result<Point> {
    let mut pt = Point::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected var=value, got `{part}`")))?;
        let var = match name.trim() {
            "p" => Var::P,
            "q" => Var::Q,
            "h" => Var::H,
            "x" => Var::X,
            other => return Err(Error::InvalidArgument(format!("unknown variable `{other}`"))),
        };
        pt.insert(var, parse_rational(value)?);
    }
    Ok(pt)
}

fn emit_json<W: Write + ?Sized>(out: &mut W, value: &impl serde::Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn normal_order<W: Write + ?Sized>(out: &mut W, text: &str, format: Format) -> Result<i32> {
    let word = parse_word(text)?;
    let expr = word.to_expr(&Algebra::concrete());
    match format {
        Format::Json => emit_json(out, &expr)?,
        Format::Csv => {
            writeln!(out, "x,N,D,coeff")?;
            for (t, c) in expr.terms() {
                writeln!(out, "{},{},{},\"{}\"", t.x, t.n, t.d, c)?;
            }
        }
        Format::Latex => writeln!(out, "{}", expr_latex(&expr))?,
    }
    Ok(EXIT_OK)
}

fn expr_latex(expr: &OperatorExpr) -> String {
    if expr.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = expr
        .terms()
        .map(|(t, c)| {
            let mut s = format!("\\left({}\\right)", c.to_latex());
            for (name, e) in [("X", t.x), ("N_{p}", t.n as i64), ("D_{p,q}", t.d as i64)] {
                match e {
                    0 => {}
                    1 => s.push_str(&format!(" {name}")),
                    e => s.push_str(&format!(" {name}^{{{e}}}")),
                }
            }
            s
        })
        .collect();
    parts.join(" + ")
}

fn load_table(args: &StirlingArgs) -> Result<StirlingTable> {
    let variant = args.variant.variant()?;
    match &args.cache {
        Some(path) => {
            let mut store = StirlingStore::open(path)?;
            let table = store.table(&variant, args.max_n)?.clone();
            store.save()?;
            Ok(table)
        }
        None => StirlingTable::new(variant, args.max_n),
    }
}

fn stirling<W: Write + ?Sized>(out: &mut W, args: &StirlingArgs) -> Result<i32> {
    let table = load_table(args)?;
    let rows = &table.rows()[..=args.max_n];
    match args.format {
        Format::Json => emit_json(out, &json!({ "variant": table.variant(), "rows": rows }))?,
        Format::Csv => {
            let pt = match &args.point {
                Some(s) => parse_point(s)?,
                None => Point::new(),
            };
            writeln!(out, "n,k,num,den")?;
            for (n, row) in rows.iter().enumerate() {
                for (k, c) in row.iter().enumerate() {
                    let v = c.evaluate(&pt)?;
                    writeln!(out, "{n},{k},{},{}", v.numer(), v.denom())?;
                }
            }
        }
        Format::Latex => {
            let width = args.max_n + 1;
            writeln!(out, "\\begin{{tabular}}{{c|{}}}", "c".repeat(width))?;
            let header: Vec<String> = (0..width).map(|k| k.to_string()).collect();
            writeln!(out, "$n \\backslash k$ & {} \\\\", header.join(" & "))?;
            writeln!(out, "\\hline")?;
            for (n, row) in rows.iter().enumerate() {
                let cells: Vec<String> = (0..width)
                    .map(|k| match row.get(k) {
                        Some(c) => format!("${}$", c.to_latex()),
                        None => String::new(),
                    })
                    .collect();
                writeln!(out, "{n} & {} \\\\", cells.join(" & "))?;
            }
            writeln!(out, "\\end{{tabular}}")?;
        }
    }
    Ok(EXIT_OK)
}

fn bell<W: Write + ?Sized>(out: &mut W, args: &BellArgs) -> Result<i32> {
    let variant = args.variant.variant()?;
    let x = match &args.x {
        Some(s) => Polynomial::constant(parse_rational(s)?),
        None => Polynomial::var(Var::X),
    };
    let value = crate::stirling::bell(args.n, &variant, &x)?;
    let mut doc = json!({ "variant": variant, "n": args.n, "bell": value });
    if let Some(s) = &args.point {
        doc["value"] = json!(value.evaluate(&parse_point(s)?)?.to_string());
    }
    emit_json(out, &doc)?;
    Ok(EXIT_OK)
}

fn touchard<W: Write + ?Sized>(out: &mut W, args: &TouchardArgs) -> Result<i32> {
    match (args.x, args.p, args.q) {
        (None, None, None) => {
            if args.m.fract() != 0.0 {
                return Err(Error::InvalidArgument("symbolic Touchard needs an integer m".into()));
            }
            let t = touchard_symbolic(args.n, args.m as i64);
            emit_json(out, &t)?;
        }
        (Some(x), Some(p), Some(q)) => {
            let precision: Precision = args.precision.parse()?;
            let v = touchard_numeric(args.n, args.m, p, q, x, precision, &SumPolicy::with_tol(args.tol))?;
            emit_json(out, &json!({ "n": args.n, "m": args.m, "p": p, "q": q, "x": x, "value": v }))?;
        }
        _ => return Err(Error::InvalidArgument("give all of --x, --p, --q or none".into())),
    }
    Ok(EXIT_OK)
}

fn dobinski_cmd<W: Write + ?Sized>(out: &mut W, a: &NumericArgs) -> Result<i32> {
    let precision: Precision = a.precision.parse()?;
    let v = dobinski(a.n, a.m, a.p, a.q, a.x, precision, &SumPolicy::with_tol(a.tol))?;
    emit_json(out, &json!({ "n": a.n, "m": a.m, "p": a.p, "q": a.q, "x": a.x, "value": v }))?;
    Ok(EXIT_OK)
}

fn verify_cmd<W: Write + ?Sized>(out: &mut W, a: &VerifyArgs) -> Result<i32> {
    let identity: Identity = a.identity.parse()?;
    let opts = VerifyOptions {
        seed: a.seed,
        points: a.points,
        tol: a.tol,
        order: a.order,
    };
    let report = verify(identity, &opts)?;
    emit_json(out, &report)?;
    Ok(match report.verdict {
        Verdict::Pass => EXIT_OK,
        _ => EXIT_FAIL,
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence { .. } => EXIT_NONCONVERGENCE,
        Error::InternalInconsistency(_) => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first) and runs the command, writing
/// documents to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write + ?Sized,
    E: Write + ?Sized,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::NormalOrder { word, format } => normal_order(out, word, *format),
        Command::Stirling(a) => stirling(out, a),
        Command::Bell(a) => bell(out, a),
        Command::Touchard(a) => touchard(out, a),
        Command::Dobinski(a) => dobinski_cmd(out, a),
        Command::Verify(a) => verify_cmd(out, a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["pqcalc"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn normal_order_d_x() {
        let (code, out, _) = run_str(&["normal-order", "D X"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let terms = v["terms"].as_array().unwrap();
        assert_eq!(terms.len(), 2);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&["normal-order", "D^-1"]).0, 2);
        assert_eq!(run_str(&["verify", "no-such"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["touchard", "--n", "2", "--m", "1", "--x", "1"]).0, 2);
    }

    #[test]
    fn nonconvergence_code() {
        let (code, _, err) = run_str(&["dobinski", "--n", "1", "--m", "1", "--p", "1", "--q", "0.5", "--x", "5"]);
        assert_eq!(code, 3, "{err}");
    }

    #[test]
    fn latex_triangle() {
        let (code, out, _) = run_str(&["stirling", "--variant", "general", "--s", "1", "--max-n", "3", "--format", "latex"]);
        assert_eq!(code, 0);
        let last_row = out.lines().find(|l| l.starts_with("3 &")).unwrap();
        assert!(last_row.trim_end().ends_with("$q^{3}$ \\\\"), "{last_row}");
    }

    #[test]
    fn point_parsing() {
        let pt = parse_point("p=1/2, q=3").unwrap();
        assert_eq!(pt[&Var::P], Rational::new(1.into(), 2.into()));
        assert!(parse_point("z=1").is_err());
    }
}
