//! C ABI for `pqcalc`.
//!
//! Every function returns a [`PqStatus`]. On failure the message is kept
//! per thread and can be read with [`pq_last_error_message`]. Handles are
//! opaque and must be released with their `_free` function; strings
//! returned through out-parameters are released with [`pq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pqcalc::cli::parse_word;
use pqcalc::laurent::Polynomial;
use pqcalc::operator::{Algebra, OperatorExpr};
use pqcalc::pqcore::real::SumPolicy;
use pqcalc::pqcore::{pq_number, Precision};
use pqcalc::stirling::{StirlingTable, StirlingVariant};
use pqcalc::touchard::{dobinski, touchard_numeric, Verdict};
use pqcalc::verify::{verify, Identity, VerifyOptions};
use pqcalc::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    Undefined = 4,
    NonConvergence = 5,
    IdentityFailed = 6,
    Internal = 7,
    Panic = 8,
}

pub struct PqPolynomial(Polynomial);
pub struct PqOperator(OperatorExpr);
pub struct PqStirlingTable(StirlingTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_of(e: &Error) -> PqStatus {
    match e {
        Error::Parse { .. } => PqStatus::ParseError,
        Error::UndefinedParameter(_) | Error::DivisionByZero | Error::UnassignedVariable(_) => PqStatus::Undefined,
        Error::NonConvergence { .. } => PqStatus::NonConvergence,
        Error::InternalInconsistency(_) => PqStatus::Internal,
        _ => PqStatus::InvalidArgument,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail::Lib(e.into())
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard<F>(f: F) -> PqStatus
where
    F: FnOnce() -> Result<PqStatus, Fail>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("{what} is null"));
            PqStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            let status = status_of(&e);
            set_error(e.to_string());
            status
        }
        Err(_) => {
            set_error("panic inside pqcalc");
            PqStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail::Lib(Error::InvalidArgument(format!("{what} is not UTF-8"))))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<PqStatus, Fail> {
    if out.is_null() {
        return Err(Fail::Null("output pointer"));
    }
    out.write(value);
    Ok(PqStatus::Ok)
}

fn into_c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail::Lib(Error::InternalInconsistency("interior NUL in output".into())))
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<*mut c_char, Fail> {
    into_c_string(serde_json::to_string(v)?)
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `[n]_{p,q}` as a new polynomial handle.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pq_number_new(n: i64, out: *mut *mut PqPolynomial) -> PqStatus {
    guard(|| write_out(out, Box::into_raw(Box::new(PqPolynomial(pq_number(n))))))
}

/// # Safety
/// `poly` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pq_polynomial_free(poly: *mut PqPolynomial) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Polynomial as a JSON array of term records.
///
/// # Safety
/// `poly` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pq_polynomial_to_json(poly: *const PqPolynomial, out: *mut *mut c_char) -> PqStatus {
    guard(|| {
        let p = poly.as_ref().ok_or(Fail::Null("polynomial"))?;
        write_out(out, to_json(&p.0)?)
    })
}

/// Evaluates at floating-point `(p, q, h, x)`.
///
/// # Safety
/// `poly` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pq_polynomial_eval(
    poly: *const PqPolynomial,
    p: f64,
    q: f64,
    h: f64,
    x: f64,
    out: *mut f64,
) -> PqStatus {
    guard(|| {
        let poly = poly.as_ref().ok_or(Fail::Null("polynomial"))?;
        write_out(out, poly.0.eval_f64([p, q, h, x]))
    })
}

/// Normal-orders an operator word such as `"(X^2 D)^3"`.
///
/// # Safety
/// `word` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pq_normal_order(word: *const c_char, out: *mut *mut PqOperator) -> PqStatus {
    guard(|| {
        let text = read_str(word, "word")?;
        let expr = parse_word(text)?.to_expr(&Algebra::concrete());
        write_out(out, Box::into_raw(Box::new(PqOperator(expr))))
    })
}

/// # Safety
/// `op` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pq_operator_free(op: *mut PqOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Number of normal-ordered terms.
///
/// # Safety
/// `op` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pq_operator_len(op: *const PqOperator, out: *mut usize) -> PqStatus {
    guard(|| {
        let op = op.as_ref().ok_or(Fail::Null("operator"))?;
        write_out(out, op.0.len())
    })
}

/// `{"terms": [{"x", "N", "D", "coeff"}]}`.
///
/// # Safety
/// `op` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pq_operator_to_json(op: *const PqOperator, out: *mut *mut c_char) -> PqStatus {
    guard(|| {
        let op = op.as_ref().ok_or(Fail::Null("operator"))?;
        write_out(out, to_json(&op.0)?)
    })
}

/// Builds a Stirling table. `variant_json` is e.g.
/// `{"kind": "general", "s": 1, "h": "symbolic"}` or
/// `{"kind": "touchard", "m": 2, "tilde": true}`.
///
/// # Safety
/// `variant_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pq_stirling_table_new(
    variant_json: *const c_char,
    max_n: usize,
    out: *mut *mut PqStirlingTable,
) -> PqStatus {
    guard(|| {
        let text = read_str(variant_json, "variant")?;
        let variant: StirlingVariant =
            serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("bad variant: {e}")))?;
        let table = StirlingTable::new(variant, max_n)?;
        write_out(out, Box::into_raw(Box::new(PqStirlingTable(table))))
    })
}

/// # Safety
/// `table` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pq_stirling_table_free(table: *mut PqStirlingTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Entry `(n, k)` as a new polynomial handle; the table grows as needed.
///
/// # Safety
/// `table` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pq_stirling_table_entry(
    table: *mut PqStirlingTable,
    n: usize,
    k: usize,
    out: *mut *mut PqPolynomial,
) -> PqStatus {
    guard(|| {
        let table = table.as_mut().ok_or(Fail::Null("table"))?;
        let entry = table.0.entry(n, k);
        write_out(out, Box::into_raw(Box::new(PqPolynomial(entry))))
    })
}

/// `{"variant": ..., "rows": [[polynomial]]}`.
///
/// # Safety
/// `table` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pq_stirling_table_to_json(table: *const PqStirlingTable, out: *mut *mut c_char) -> PqStatus {
    guard(|| {
        let table = table.as_ref().ok_or(Fail::Null("table"))?;
        write_out(out, to_json(&table.0)?)
    })
}

fn precision_of(digits: u32) -> Precision {
    if digits == 0 {
        Precision::Double
    } else {
        Precision::Decimal(digits as usize)
    }
}

/// Touchard polynomial of real order `m` at real `(p, q, x)`. `digits`
/// selects decimal arithmetic; 0 means double precision.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pq_touchard(
    n: u32,
    m: f64,
    p: f64,
    q: f64,
    x: f64,
    digits: u32,
    tol: f64,
    out: *mut f64,
) -> PqStatus {
    guard(|| {
        let v = touchard_numeric(n, m, p, q, x, precision_of(digits), &SumPolicy::with_tol(tol))?;
        write_out(out, v)
    })
}

/// Dobinski series for the tilde Bell polynomial; arguments as for
/// [`pq_touchard`].
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pq_dobinski(
    n: u32,
    m: f64,
    p: f64,
    q: f64,
    x: f64,
    digits: u32,
    tol: f64,
    out: *mut f64,
) -> PqStatus {
    guard(|| {
        let v = dobinski(n, m, p, q, x, precision_of(digits), &SumPolicy::with_tol(tol))?;
        write_out(out, v)
    })
}

/// Runs a named identity check and writes the JSON report to
/// `report_out` (may be NULL). Returns `PQ_STATUS_IDENTITY_FAILED` when
/// the verdict is not a pass.
///
/// # Safety
/// `identity` must be a NUL-terminated string; `report_out` NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn pq_verify(
    identity: *const c_char,
    seed: u64,
    points: usize,
    tol: f64,
    report_out: *mut *mut c_char,
) -> PqStatus {
    guard(|| {
        let id: Identity = read_str(identity, "identity")?.parse()?;
        let opts = VerifyOptions {
            seed,
            points,
            tol,
            order: None,
        };
        let report = verify(id, &opts)?;
        if !report_out.is_null() {
            report_out.write(to_json(&report)?);
        }
        if report.verdict == Verdict::Pass {
            Ok(PqStatus::Ok)
        } else {
            set_error(format!("{} verdict: {:?}", report.identity, report.verdict));
            Ok(PqStatus::IdentityFailed)
        }
    })
}
