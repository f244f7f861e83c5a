//! C interface to the model checker.
//!
//! Models and formulas live behind opaque handles created by the parse
//! functions and released by the matching free functions. Every fallible
//! call returns a status code and writes its results through out
//! parameters; on failure, `hsmc_last_error` returns a thread-local
//! message describing what went wrong. Strings handed out by the library
//! must be released with `hsmc_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hs_mc::checker::{model_check, CheckError};
use hs_mc::hsformula::{parse_formula, Formula};
use hs_mc::kripke::{parse_model, KripkeStructure};
use hs_mc::oracle::oracle_check;

/// Result codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsmcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    UnsupportedFragment = 4,
    BadBound = 5,
    InternalError = 6,
}

/// A parsed Kripke structure.
pub struct HsmcModel {
    inner: KripkeStructure,
}

/// A parsed interval temporal logic formula.
pub struct HsmcFormula {
    inner: Formula,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let stored = CString::new(msg)
        .unwrap_or_else(|_| CString::new("error message contained a NUL byte").expect("literal"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = stored);
}

/// The message for the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hsmc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// The library version as a static string; do not free it.
#[no_mangle]
pub extern "C" fn hsmc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, HsmcStatus> {
    if text.is_null() {
        set_error("null text argument");
        return Err(HsmcStatus::NullArgument);
    }
    CStr::from_ptr(text).to_str().map_err(|_| {
        set_error("text is not valid UTF-8");
        HsmcStatus::InvalidUtf8
    })
}

/// Parses a model description (the same format the CLI reads) into a
/// handle written through `out`. Release it with `hsmc_model_free`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsmc_model_parse(
    text: *const c_char,
    out: *mut *mut HsmcModel,
) -> HsmcStatus {
    if out.is_null() {
        set_error("null out argument");
        return HsmcStatus::NullArgument;
    }
    let text = match read_str(text) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match parse_model(text) {
        Ok(k) => {
            *out = Box::into_raw(Box::new(HsmcModel { inner: k }));
            HsmcStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            HsmcStatus::ParseError
        }
    }
}

/// Releases a model handle; accepts NULL.
///
/// # Safety
/// `model` must be NULL or a handle from `hsmc_model_parse` that has not
/// been freed yet.
#[no_mangle]
pub unsafe extern "C" fn hsmc_model_free(model: *mut HsmcModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Parses a formula into a handle written through `out`. Release it with
/// `hsmc_formula_free`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsmc_formula_parse(
    text: *const c_char,
    out: *mut *mut HsmcFormula,
) -> HsmcStatus {
    if out.is_null() {
        set_error("null out argument");
        return HsmcStatus::NullArgument;
    }
    let text = match read_str(text) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match parse_formula(text) {
        Ok(f) => {
            *out = Box::into_raw(Box::new(HsmcFormula { inner: f }));
            HsmcStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            HsmcStatus::ParseError
        }
    }
}

/// Releases a formula handle; accepts NULL.
///
/// # Safety
/// `formula` must be NULL or a handle from `hsmc_formula_parse` that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn hsmc_formula_free(formula: *mut HsmcFormula) {
    if !formula.is_null() {
        drop(Box::from_raw(formula));
    }
}

/// Releases a string returned through an out parameter; accepts NULL.
///
/// # Safety
/// `s` must be NULL or a string this library wrote through an out
/// parameter, not freed yet.
#[no_mangle]
pub unsafe extern "C" fn hsmc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn check_status(e: &CheckError) -> HsmcStatus {
    match e {
        CheckError::MixedFragment | CheckError::SuffixInSession => {
            HsmcStatus::UnsupportedFragment
        }
        CheckError::Regex(_) => HsmcStatus::ParseError,
        _ => HsmcStatus::InternalError,
    }
}

/// Decides whether every initial trace of the model satisfies the
/// formula. A positive `max_trace_len` bounds the searched traces and may
/// leave the verdict incomplete; zero runs the full procedure, whose
/// verdict is always exact. Writes 1 or 0 through `satisfied`. When the
/// formula is violated and `witness` is non-NULL, writes a space-separated
/// counterexample trace (release with `hsmc_string_free`); writes NULL
/// otherwise. When `complete` is non-NULL, writes 1 when the verdict is
/// exact and 0 when the bound truncated the search.
///
/// # Safety
/// `model` and `formula` must be live handles; `satisfied` must be a valid
/// pointer; `witness` and `complete` must each be NULL or valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hsmc_check(
    model: *const HsmcModel,
    formula: *const HsmcFormula,
    max_trace_len: usize,
    satisfied: *mut i32,
    witness: *mut *mut c_char,
    complete: *mut i32,
) -> HsmcStatus {
    if model.is_null() || formula.is_null() || satisfied.is_null() {
        set_error("null model, formula, or satisfied argument");
        return HsmcStatus::NullArgument;
    }
    let k = &(*model).inner;
    let f = &(*formula).inner;
    let bound = if max_trace_len == 0 { None } else { Some(max_trace_len) };
    let outcome = catch_unwind(AssertUnwindSafe(|| model_check(k, f, bound)));
    match outcome {
        Ok(Ok(verdict)) => {
            *satisfied = i32::from(verdict.satisfied);
            if !witness.is_null() {
                *witness = match &verdict.counterexample {
                    Some(trace) => CString::new(trace.display(k))
                        .expect("state names contain no NUL bytes")
                        .into_raw(),
                    None => std::ptr::null_mut(),
                };
            }
            if !complete.is_null() {
                *complete = i32::from(verdict.complete);
            }
            HsmcStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            check_status(&e)
        }
        Err(_) => {
            set_error("the check panicked");
            HsmcStatus::InternalError
        }
    }
}

/// Evaluates the formula by brute-force enumeration of all traces up to
/// `max_trace_len` states, which must be at least 1. Handles the full
/// modality set but is only a bounded approximation of the unbounded
/// semantics. Writes 1 or 0 through `satisfied` and, when `witness` is
/// non-NULL and the formula is violated within the bound, a
/// space-separated counterexample trace (release with `hsmc_string_free`).
///
/// # Safety
/// `model` and `formula` must be live handles; `satisfied` must be a valid
/// pointer; `witness` must be NULL or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsmc_oracle_check(
    model: *const HsmcModel,
    formula: *const HsmcFormula,
    max_trace_len: usize,
    satisfied: *mut i32,
    witness: *mut *mut c_char,
) -> HsmcStatus {
    if model.is_null() || formula.is_null() || satisfied.is_null() {
        set_error("null model, formula, or satisfied argument");
        return HsmcStatus::NullArgument;
    }
    if max_trace_len == 0 {
        set_error("the trace bound must be at least 1");
        return HsmcStatus::BadBound;
    }
    let k = &(*model).inner;
    let f = &(*formula).inner;
    let outcome = catch_unwind(AssertUnwindSafe(|| oracle_check(k, f, max_trace_len)));
    match outcome {
        Ok(Ok(result)) => {
            *satisfied = i32::from(result.satisfied);
            if !witness.is_null() {
                *witness = match &result.counterexample {
                    Some(trace) => CString::new(trace.display(k))
                        .expect("state names contain no NUL bytes")
                        .into_raw(),
                    None => std::ptr::null_mut(),
                };
            }
            HsmcStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            HsmcStatus::ParseError
        }
        Err(_) => {
            set_error("the oracle panicked");
            HsmcStatus::InternalError
        }
    }
}
