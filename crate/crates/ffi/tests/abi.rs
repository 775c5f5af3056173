use std::ffi::{c_char, CStr, CString};
use std::ptr;

use koszulkit_ffi::*;

const TYP: &str = include_str!("../../core/tests/data/typ.kzk");

fn parse(src: &str) -> (KzkStatus, *mut KzkDocument) {
    let src = CString::new(src).unwrap();
    let mut doc = ptr::null_mut();
    let st = unsafe { kzk_document_parse(src.as_ptr(), &mut doc) };
    (st, doc)
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(kzk_last_error()) }.to_string_lossy().into_owned()
}

fn take(s: *mut c_char) -> String {
    let t = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { kzk_string_free(s) };
    t
}

fn run(doc: *const KzkDocument, args: &[&str]) -> (KzkStatus, *mut KzkReport) {
    let owned: Vec<CString> = args.iter().map(|a| CString::new(*a).unwrap()).collect();
    let ptrs: Vec<*const c_char> = owned.iter().map(|a| a.as_ptr()).collect();
    let mut rep = ptr::null_mut();
    let st = unsafe { kzk_run(doc, ptrs.len() as i32, ptrs.as_ptr(), &mut rep) };
    (st, rep)
}

#[test]
fn parse_and_canonical_text() {
    let (st, doc) = parse(TYP);
    assert_eq!(st, KzkStatus::Ok);
    assert_eq!(last_error(), "");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { kzk_document_to_text(doc, &mut s) }, KzkStatus::Ok);
    let text = take(s);
    assert!(text.starts_with("koszulkit 1\n"));
    let (st, again) = parse(&text);
    assert_eq!(st, KzkStatus::Ok);
    unsafe {
        kzk_document_free(doc);
        kzk_document_free(again);
    }
}

#[test]
fn parse_errors_have_codes_and_messages() {
    let (st, doc) = parse("koszulkit 1\nring integers\nmatrix m = 2x2 [1]\n");
    assert_eq!(st, KzkStatus::Parse);
    assert!(doc.is_null());
    assert!(last_error().contains("line 3"), "{}", last_error());
    let mut doc = ptr::null_mut();
    assert_eq!(unsafe { kzk_document_parse(ptr::null(), &mut doc) }, KzkStatus::NullArgument);
    let bytes = [0xffu8, 0];
    assert_eq!(
        unsafe { kzk_document_parse(bytes.as_ptr() as *const c_char, &mut doc) },
        KzkStatus::InvalidUtf8
    );
}

#[test]
fn commands_through_the_abi() {
    let (_, doc) = parse(TYP);
    let (st, rep) = run(doc, &["check-koszul"]);
    assert_eq!(st, KzkStatus::Ok);
    assert_eq!(unsafe { kzk_report_exit_code(rep) }, 0);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { kzk_report_text(rep, &mut s) }, KzkStatus::Ok);
    assert!(take(s).contains("outcome: pass"));
    unsafe { kzk_report_free(rep) };

    // a missing entity is a report with an error, not an ABI failure
    let (st, rep) = run(doc, &["tot", "--cube", "absent"]);
    assert_eq!(st, KzkStatus::Ok);
    assert_eq!(unsafe { kzk_report_exit_code(rep) }, 2);
    unsafe { kzk_report_free(rep) };

    let (st, rep) = run(doc, &["tot", "--no-such-flag"]);
    assert_eq!(st, KzkStatus::Usage);
    assert!(rep.is_null());
    unsafe { kzk_document_free(doc) };
}

#[test]
fn smith_diagonal() {
    let m = [2i64, 4, 4, -6, 6, 12, 10, -4, -16];
    let mut d = [0i64; 3];
    assert_eq!(unsafe { kzk_smith_diagonal(3, 3, m.as_ptr(), d.as_mut_ptr()) }, KzkStatus::Ok);
    assert_eq!(d, [2, 6, 12]);
    let big = [i64::MAX, 0, 0, i64::MAX];
    let mut d = [0i64; 2];
    assert_eq!(unsafe { kzk_smith_diagonal(2, 2, big.as_ptr(), d.as_mut_ptr()) }, KzkStatus::Ok);
    assert_eq!(d, [i64::MAX, i64::MAX]);
    let coprime = [i64::MAX, 0, 0, i64::MAX - 1];
    assert_eq!(unsafe { kzk_smith_diagonal(2, 2, coprime.as_ptr(), d.as_mut_ptr()) }, KzkStatus::Overflow);
    assert_eq!(unsafe { kzk_smith_diagonal(0, 0, ptr::null(), ptr::null_mut()) }, KzkStatus::Ok);
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        kzk_document_free(ptr::null_mut());
        kzk_report_free(ptr::null_mut());
        kzk_string_free(ptr::null_mut());
        assert_eq!(kzk_report_exit_code(ptr::null()), 2);
    }
}
