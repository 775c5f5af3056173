//! C ABI over koszulkit.
//!
//! Documents and reports cross the boundary as opaque handles. Every
//! function returns a [`KzkStatus`]; on failure the message is available from
//! [`kzk_last_error`] on the same thread. Strings handed out by the library
//! are released with [`kzk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clap::Parser;
use koszulkit::arith::{smith_normal_form, Integers, Matrix, Ring};
use koszulkit::cli::{parse_document, run_with, Cli, Document, Report};
use koszulkit::error::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KzkStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    UnresolvedReference = 4,
    Usage = 5,
    Invalid = 6,
    Overflow = 7,
    Computation = 8,
    Panic = 9,
}

/// A parsed, canonical document.
pub struct KzkDocument(Document);

/// The report of one command.
pub struct KzkReport(Report);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let mut v = msg.into();
    v.retain(|&b| b != 0);
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(v).expect("nul bytes removed"));
}

fn fail(status: KzkStatus, msg: impl Into<Vec<u8>>) -> KzkStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> KzkStatus {
    match e {
        Error::Parse { .. } => KzkStatus::Parse,
        Error::UnresolvedReference(_) => KzkStatus::UnresolvedReference,
        Error::Invalid(_) | Error::Dimension(_) | Error::RingMismatch(_) => KzkStatus::Invalid,
        _ => KzkStatus::Computation,
    }
}

/// Run `f`, turning panics into [`KzkStatus::Panic`].
fn guard(f: impl FnOnce() -> KzkStatus) -> KzkStatus {
    set_error("");
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(KzkStatus::Panic, "internal panic"))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, KzkStatus> {
    if p.is_null() {
        return Err(fail(KzkStatus::NullArgument, "null string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(KzkStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn hand_out(s: String, out: *mut *mut c_char) -> KzkStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            KzkStatus::Ok
        }
        Err(_) => fail(KzkStatus::Invalid, "output contains a nul byte"),
    }
}

/// Message of the last failure on this thread; empty after a success.
/// Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn kzk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn kzk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a document from its text.
///
/// # Safety
/// `src` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kzk_document_parse(src: *const c_char, out: *mut *mut KzkDocument) -> KzkStatus {
    guard(|| {
        if out.is_null() {
            return fail(KzkStatus::NullArgument, "null output");
        }
        *out = ptr::null_mut();
        let src = match text(src) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match parse_document(src) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(KzkDocument(d)));
                KzkStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Canonical text of a document; free with [`kzk_string_free`].
///
/// # Safety
/// `doc` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kzk_document_to_text(doc: *const KzkDocument, out: *mut *mut c_char) -> KzkStatus {
    guard(|| {
        if doc.is_null() || out.is_null() {
            return fail(KzkStatus::NullArgument, "null argument");
        }
        hand_out((*doc).0.to_text(), out)
    })
}

/// # Safety
/// `doc` must come from [`kzk_document_parse`], or be null.
#[no_mangle]
pub unsafe extern "C" fn kzk_document_free(doc: *mut KzkDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Run a command as the command-line tool would. `argv` holds the
/// arguments after the program name, e.g. `{"tot", "--cube", "c"}`. A
/// non-null `doc` stands in for `--doc`.
///
/// A report is produced for every well-formed invocation, including ones
/// whose checks fail; only malformed arguments give [`KzkStatus::Usage`].
///
/// # Safety
/// `argv` must hold `argc` nul-terminated strings; `doc` must be a live
/// handle or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kzk_run(
    doc: *const KzkDocument,
    argc: c_int,
    argv: *const *const c_char,
    out: *mut *mut KzkReport,
) -> KzkStatus {
    guard(|| {
        if out.is_null() || (argc > 0 && argv.is_null()) {
            return fail(KzkStatus::NullArgument, "null argument");
        }
        *out = ptr::null_mut();
        let mut args = vec!["koszulkit".to_string()];
        for i in 0..argc.max(0) as usize {
            match text(*argv.add(i)) {
                Ok(s) => args.push(s.to_string()),
                Err(s) => return s,
            }
        }
        let cli = match Cli::try_parse_from(&args) {
            Ok(c) => c,
            Err(e) => return fail(KzkStatus::Usage, e.to_string()),
        };
        let doc = (!doc.is_null()).then(|| (*doc).0.clone());
        *out = Box::into_raw(Box::new(KzkReport(run_with(&cli, doc))));
        KzkStatus::Ok
    })
}

/// Process exit code of a report: 0 pass, 1 fail, 2 error, 3 inconclusive.
///
/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn kzk_report_exit_code(r: *const KzkReport) -> c_int {
    if r.is_null() {
        return 2;
    }
    (*r).0.exit_code()
}

/// Structured (JSON) form of a report; free with [`kzk_string_free`].
///
/// # Safety
/// `r` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kzk_report_json(r: *const KzkReport, out: *mut *mut c_char) -> KzkStatus {
    guard(|| {
        if r.is_null() || out.is_null() {
            return fail(KzkStatus::NullArgument, "null argument");
        }
        hand_out((*r).0.to_json(), out)
    })
}

/// Text form of a report; free with [`kzk_string_free`].
///
/// # Safety
/// `r` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kzk_report_text(r: *const KzkReport, out: *mut *mut c_char) -> KzkStatus {
    guard(|| {
        if r.is_null() || out.is_null() {
            return fail(KzkStatus::NullArgument, "null argument");
        }
        hand_out((*r).0.to_text(), out)
    })
}

/// # Safety
/// `r` must come from [`kzk_run`], or be null.
#[no_mangle]
pub unsafe extern "C" fn kzk_report_free(r: *mut KzkReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Invariant factors of an integer matrix given row-major. Writes
/// `min(rows, cols)` diagonal entries of the Smith form to `diag`, zeros
/// included. [`KzkStatus::Overflow`] if an entry does not fit in 64 bits.
///
/// # Safety
/// `data` must hold `rows * cols` values and `diag` room for
/// `min(rows, cols)`.
#[no_mangle]
pub unsafe extern "C" fn kzk_smith_diagonal(
    rows: usize,
    cols: usize,
    data: *const i64,
    diag: *mut i64,
) -> KzkStatus {
    guard(|| {
        let n = rows.min(cols);
        if (rows * cols > 0 && data.is_null()) || (n > 0 && diag.is_null()) {
            return fail(KzkStatus::NullArgument, "null argument");
        }
        let z = Integers;
        let vals = if rows * cols == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(data, rows * cols)
        };
        let m = Matrix::from_vec(&z, rows, cols, vals.iter().map(|&v| z.from_i64(v)).collect());
        let s = match smith_normal_form(&m) {
            Ok(s) => s,
            Err(e) => return fail(status_of(&e), e.to_string()),
        };
        for i in 0..n {
            match i64::try_from(s.d.get(i, i)) {
                Ok(v) => *diag.add(i) = v,
                Err(_) => return fail(KzkStatus::Overflow, format!("invariant factor {i} exceeds 64 bits")),
            }
        }
        KzkStatus::Ok
    })
}
