//! C ABI over `lefschetz-lab`.
//!
//! Models are opaque `LlModel` handles created from fixture JSON and released
//! with `ll_model_free`. Every fallible call returns an `LlStatus`; on failure
//! `ll_last_error` yields a message for the calling thread. Strings returned
//! through out-parameters are owned by the caller and freed with
//! `ll_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::sync::OnceLock;

use lefschetz_lab::fixture::{load_fixture, parse_fixture, Fixture};
use lefschetz_lab::lefschetz::{verdict, ObstructionVerdict};
use lefschetz_lab::report::{LefschetzSection, ReportDocument};
use lefschetz_lab::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InputError = 3,
    OutOfRange = 4,
    InternalError = 5,
    Panic = 6,
}

/// Opaque model handle.
pub struct LlModel {
    fixture: Fixture,
    verdict: OnceLock<Result<ObstructionVerdict, (LlStatus, String)>>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> LlStatus {
    match err {
        Error::Invariant(_) => LlStatus::InternalError,
        _ => LlStatus::InputError,
    }
}

fn fail(status: LlStatus, message: impl Into<String>) -> LlStatus {
    set_error(message);
    status
}

fn guard(body: impl FnOnce() -> LlStatus) -> LlStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(LlStatus::Panic, msg)
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, LlStatus> {
    if p.is_null() {
        return Err(fail(LlStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| fail(LlStatus::InvalidUtf8, e.to_string()))
}

fn finish_model(loaded: lefschetz_lab::Result<Fixture>, out: *mut *mut LlModel) -> LlStatus {
    match loaded {
        Ok(fixture) => {
            let handle = Box::new(LlModel {
                fixture,
                verdict: OnceLock::new(),
            });
            unsafe { *out = Box::into_raw(handle) };
            LlStatus::Ok
        }
        Err(e) => fail(status_of(&e), e.to_string()),
    }
}

impl LlModel {
    fn verdict(&self) -> Result<&ObstructionVerdict, (LlStatus, String)> {
        self.verdict
            .get_or_init(|| {
                let f = &self.fixture;
                let contact = f.contact().map_err(|e| (status_of(&e), e.to_string()))?;
                let model = f.model().ok();
                verdict(&f.complex, &contact, model.as_ref())
                    .map_err(|e| (status_of(&e), e.to_string()))
            })
            .as_ref()
            .map_err(|e| e.clone())
    }
}

/// Parses fixture JSON text and builds a model.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ll_model_from_json(json: *const c_char, out: *mut *mut LlModel) -> LlStatus {
    guard(|| {
        if out.is_null() {
            return fail(LlStatus::NullPointer, "null out pointer");
        }
        *out = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        finish_model(parse_fixture(text).and_then(|d| d.load()), out)
    })
}

/// Loads a fixture file and builds a model.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ll_model_from_path(path: *const c_char, out: *mut *mut LlModel) -> LlStatus {
    guard(|| {
        if out.is_null() {
            return fail(LlStatus::NullPointer, "null out pointer");
        }
        *out = ptr::null_mut();
        let path = match read_str(path) {
            Ok(t) => t,
            Err(s) => return s,
        };
        finish_model(load_fixture(Path::new(path)).and_then(|d| d.load()), out)
    })
}

/// # Safety
/// `model` must come from `ll_model_from_*` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ll_model_free(model: *mut LlModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ll_model_dim(model: *const LlModel, out: *mut usize) -> LlStatus {
    guard(|| {
        let (Some(m), false) = (model.as_ref(), out.is_null()) else {
            return fail(LlStatus::NullPointer, "null argument");
        };
        *out = m.fixture.complex.dim();
        LlStatus::Ok
    })
}

/// Betti number `b_p` of the invariant complex.
///
/// # Safety
/// `model` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ll_model_betti(model: *const LlModel, p: usize, out: *mut usize) -> LlStatus {
    guard(|| {
        let (Some(m), false) = (model.as_ref(), out.is_null()) else {
            return fail(LlStatus::NullPointer, "null argument");
        };
        match m.fixture.complex.betti_numbers().get(p) {
            Some(b) => {
                *out = *b;
                LlStatus::Ok
            }
            None => fail(LlStatus::OutOfRange, format!("degree {p} exceeds dimension")),
        }
    })
}

/// Writes 1 to `is_lefschetz` when every relation is the graph of an
/// isomorphism and all parities are even, 0 when obstructed.
///
/// # Safety
/// `model` and `is_lefschetz` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ll_model_verdict(model: *const LlModel, is_lefschetz: *mut i32) -> LlStatus {
    guard(|| {
        let (Some(m), false) = (model.as_ref(), is_lefschetz.is_null()) else {
            return fail(LlStatus::NullPointer, "null argument");
        };
        match m.verdict() {
            Ok(v) => {
                *is_lefschetz = v.is_lefschetz_contact() as i32;
                LlStatus::Ok
            }
            Err((s, msg)) => fail(s, msg),
        }
    })
}

/// JSON report of the Lefschetz analysis. Free the result with `ll_string_free`.
///
/// # Safety
/// `model` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ll_model_report_json(model: *const LlModel, out: *mut *mut c_char) -> LlStatus {
    guard(|| {
        let (Some(m), false) = (model.as_ref(), out.is_null()) else {
            return fail(LlStatus::NullPointer, "null argument");
        };
        *out = ptr::null_mut();
        let v = match m.verdict() {
            Ok(v) => v,
            Err((s, msg)) => return fail(s, msg),
        };
        let mut report = ReportDocument::new(&m.fixture.name, "lefschetz");
        report.lefschetz = Some(LefschetzSection::from(v));
        match CString::new(report.to_json()) {
            Ok(s) => {
                *out = s.into_raw();
                LlStatus::Ok
            }
            Err(e) => fail(LlStatus::InternalError, e.to_string()),
        }
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ll_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn ll_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn ll_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
