//! C ABI over the `qsov` engine.
//!
//! Models are opaque `QsovModel` handles created from config text. Every
//! fallible call returns a `QsovStatus`; on failure `qsov_last_error`
//! describes it. Strings returned through out-parameters are owned by the
//! caller and released with `qsov_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qsov::exactnum::parse_scalar;
use qsov::harness::{is_config_error, Suite, SuiteConfig};
use qsov::monodromy::BlockSource;

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QsovStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Bad config text, parameter or operator name.
    Config = 3,
    /// A computation failed (singular matrix, pole, degenerate spectrum, ...).
    Compute = 4,
    /// A Rust panic was caught at the boundary.
    Panic = 5,
}

/// Opaque model handle.
pub struct QsovModel {
    suite: Suite,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: QsovStatus, msg: &str) -> QsovStatus {
    set_error(msg);
    status
}

fn from_qsov(e: qsov::Error) -> QsovStatus {
    let status = if is_config_error(&e) { QsovStatus::Config } else { QsovStatus::Compute };
    fail(status, &e.to_string())
}

fn guard(f: impl FnOnce() -> QsovStatus) -> QsovStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(QsovStatus::Panic, "panic inside qsov"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, QsovStatus> {
    if p.is_null() {
        return Err(fail(QsovStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(QsovStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> QsovStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            QsovStatus::Ok
        }
        Err(_) => fail(QsovStatus::Compute, "output contained a NUL byte"),
    }
}

/// Message for the most recent failure on this thread. Valid until the next
/// failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn qsov_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version; a static string, do not free.
#[no_mangle]
pub extern "C" fn qsov_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a model from config text (`key = value` lines). A null `config`
/// selects the bundled default configuration.
///
/// # Safety
/// `config` must be null or a NUL-terminated string; `out` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn qsov_model_new(config: *const c_char, out: *mut *mut QsovModel) -> QsovStatus {
    guard(|| {
        if out.is_null() {
            return fail(QsovStatus::NullPointer, "null out pointer");
        }
        *out = ptr::null_mut();
        let cfg = if config.is_null() {
            SuiteConfig::default_config()
        } else {
            let text = match read_str(config) {
                Ok(t) => t,
                Err(s) => return s,
            };
            match SuiteConfig::parse(text) {
                Ok(c) => c,
                Err(e) => return from_qsov(e),
            }
        };
        match Suite::new(cfg) {
            Ok(suite) => {
                *out = Box::into_raw(Box::new(QsovModel { suite }));
                QsovStatus::Ok
            }
            Err(e) => from_qsov(e),
        }
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must come from `qsov_model_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qsov_model_free(model: *mut QsovModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Dimension of the quantum space `H`.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qsov_model_dim(model: *const QsovModel, out: *mut usize) -> QsovStatus {
    guard(|| {
        if model.is_null() || out.is_null() {
            return fail(QsovStatus::NullPointer, "null argument");
        }
        *out = (*model).suite.op.dim();
        QsovStatus::Ok
    })
}

/// Expected degree `g` of `B(x)`.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qsov_model_genus(model: *const QsovModel, out: *mut usize) -> QsovStatus {
    guard(|| {
        if model.is_null() || out.is_null() {
            return fail(QsovStatus::NullPointer, "null argument");
        }
        *out = (*model).suite.cfg.model.genus();
        QsovStatus::Ok
    })
}

/// JSON operator tensor for `which` in {"B","D","Y","X"} at the rational `at`
/// (e.g. "3/2"). Free the result with `qsov_string_free`.
///
/// # Safety
/// `model` must be a live handle, `which` and `at` NUL-terminated strings,
/// `out_json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qsov_dump_operator(
    model: *const QsovModel,
    which: *const c_char,
    at: *const c_char,
    out_json: *mut *mut c_char,
) -> QsovStatus {
    guard(|| {
        if model.is_null() || out_json.is_null() {
            return fail(QsovStatus::NullPointer, "null argument");
        }
        *out_json = ptr::null_mut();
        let (which, at) = match (read_str(which), read_str(at)) {
            (Ok(w), Ok(a)) => (w, a),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let x = match parse_scalar(at) {
            Ok(x) => x,
            Err(e) => return fail(QsovStatus::Config, &e.to_string()),
        };
        match (*model).suite.dump_operator(which, &x) {
            Ok(v) => write_string(out_json, v.to_string()),
            Err(e) => from_qsov(e),
        }
    })
}

/// Runs the verification suite. Writes the JSON report to `out_json` and
/// whether every check passed to `out_pass`.
///
/// # Safety
/// `model` must be a live handle not used concurrently; out pointers must
/// be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qsov_verify(model: *mut QsovModel, out_json: *mut *mut c_char, out_pass: *mut bool) -> QsovStatus {
    guard(|| {
        if model.is_null() || out_json.is_null() || out_pass.is_null() {
            return fail(QsovStatus::NullPointer, "null argument");
        }
        *out_json = ptr::null_mut();
        match (*model).suite.run() {
            Ok(doc) => {
                *out_pass = doc.pass;
                write_string(out_json, doc.to_json())
            }
            Err(e) => from_qsov(e),
        }
    })
}

/// Spectral analysis (roots and `w`-actions per joint eigenvector) as JSON.
///
/// # Safety
/// As for `qsov_verify`.
#[no_mangle]
pub unsafe extern "C" fn qsov_spectra(model: *mut QsovModel, out_json: *mut *mut c_char) -> QsovStatus {
    guard(|| {
        if model.is_null() || out_json.is_null() {
            return fail(QsovStatus::NullPointer, "null argument");
        }
        *out_json = ptr::null_mut();
        match (*model).suite.spectral_report() {
            Ok(v) => write_string(out_json, v.to_string()),
            Err(e) => from_qsov(e),
        }
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qsov_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
