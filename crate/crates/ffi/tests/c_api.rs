use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use pqcalc_ffi::*;

fn take_string(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { pq_string_free(s) };
    out
}

fn last_error() -> String {
    let p = pq_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn pq_number_round_trip() {
    let mut poly = ptr::null_mut();
    assert_eq!(unsafe { pq_number_new(3, &mut poly) }, PqStatus::Ok);
    let mut v = 0.0;
    assert_eq!(unsafe { pq_polynomial_eval(poly, 2.0, 3.0, 0.0, 0.0, &mut v) }, PqStatus::Ok);
    assert_eq!(v, 19.0);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { pq_polynomial_to_json(poly, &mut json) }, PqStatus::Ok);
    let json = take_string(json);
    assert!(json.starts_with('['), "{json}");
    unsafe { pq_polynomial_free(poly) };
}

#[test]
fn normal_order_and_parse_errors() {
    let word = CString::new("D X").unwrap();
    let mut op = ptr::null_mut();
    assert_eq!(unsafe { pq_normal_order(word.as_ptr(), &mut op) }, PqStatus::Ok);
    let mut len = 0;
    assert_eq!(unsafe { pq_operator_len(op, &mut len) }, PqStatus::Ok);
    assert_eq!(len, 2);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { pq_operator_to_json(op, &mut json) }, PqStatus::Ok);
    assert!(take_string(json).contains("\"terms\""));
    unsafe { pq_operator_free(op) };

    let bad = CString::new("D^-1").unwrap();
    let mut op = ptr::null_mut();
    assert_eq!(unsafe { pq_normal_order(bad.as_ptr(), &mut op) }, PqStatus::ParseError);
    assert!(op.is_null());
    assert!(last_error().contains("byte 2"));

    assert_eq!(unsafe { pq_normal_order(ptr::null(), &mut op) }, PqStatus::NullPointer);
    assert_eq!(unsafe { pq_operator_len(ptr::null(), ptr::null_mut()) }, PqStatus::NullPointer);
}

#[test]
fn stirling_table_handle() {
    let variant = CString::new(r#"{"kind": "general", "s": 1, "h": "symbolic"}"#).unwrap();
    let mut table = ptr::null_mut();
    assert_eq!(unsafe { pq_stirling_table_new(variant.as_ptr(), 3, &mut table) }, PqStatus::Ok);
    let mut entry = ptr::null_mut();
    assert_eq!(unsafe { pq_stirling_table_entry(table, 3, 3, &mut entry) }, PqStatus::Ok);
    let mut v = 0.0;
    unsafe { pq_polynomial_eval(entry, 5.0, 2.0, 7.0, 0.0, &mut v) };
    assert_eq!(v, 8.0);
    unsafe { pq_polynomial_free(entry) };

    // Entries beyond the built rows extend the table.
    let mut entry = ptr::null_mut();
    assert_eq!(unsafe { pq_stirling_table_entry(table, 5, 5, &mut entry) }, PqStatus::Ok);
    unsafe { pq_polynomial_eval(entry, 5.0, 2.0, 7.0, 0.0, &mut v) };
    assert_eq!(v, 1024.0);
    unsafe { pq_polynomial_free(entry) };

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { pq_stirling_table_to_json(table, &mut json) }, PqStatus::Ok);
    assert!(take_string(json).contains("\"rows\""));
    unsafe { pq_stirling_table_free(table) };

    let bad = CString::new(r#"{"kind": "touchard", "m": 0}"#).unwrap();
    let mut table = ptr::null_mut();
    assert_eq!(unsafe { pq_stirling_table_new(bad.as_ptr(), 3, &mut table) }, PqStatus::InvalidArgument);
}

#[test]
fn numeric_kernels() {
    let mut v = 0.0;
    assert_eq!(unsafe { pq_dobinski(2, 1.0, 1.0, 0.5, 1.0, 0, 1e-17, &mut v) }, PqStatus::Ok);
    assert!((v - 1.5).abs() < 1e-10);
    assert_eq!(unsafe { pq_touchard(2, 1.0, 1.0, 0.5, 1.0, 30, 1e-25, &mut v) }, PqStatus::Ok);
    assert!((v - 1.5).abs() < 1e-12);
    assert_eq!(
        unsafe { pq_dobinski(1, 1.0, 1.0, 0.5, 5.0, 0, 1e-17, &mut v) },
        PqStatus::NonConvergence
    );
}

#[test]
fn verify_reports() {
    let id = CString::new("exp-id").unwrap();
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { pq_verify(id.as_ptr(), 0, 5, 1e-10, &mut report) }, PqStatus::Ok);
    assert!(take_string(report).contains("\"verdict\":\"pass\""));

    let id = CString::new("qh-binomial-audit").unwrap();
    assert_eq!(unsafe { pq_verify(id.as_ptr(), 0, 5, 1e-10, ptr::null_mut()) }, PqStatus::IdentityFailed);

    let id = CString::new("nope").unwrap();
    assert_eq!(unsafe { pq_verify(id.as_ptr(), 0, 5, 1e-10, ptr::null_mut()) }, PqStatus::InvalidArgument);
}

#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include").join("pqcalc.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["pq_normal_order", "pq_stirling_table_new", "pq_verify", "PQ_STATUS_NULL_POINTER"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler; skipping syntax check");
        return;
    };
    assert!(status.success());
}
