//! C ABI for the limitroots library.
//!
//! Conventions: every function returns an `LrStatus`; results are written
//! through out-pointers.  Strings returned through `char **` are UTF-8,
//! NUL-terminated, owned by the caller, and must be released with
//! `lr_string_free`.  Curves are opaque handles released with
//! `lr_curve_free`.  On any non-zero status, `lr_last_error` returns a
//! message describing the failure (thread-local, valid until the next
//! failing call on the same thread).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use limitroots::balanced_degrees::enumerate_balanced;
use limitroots::curve_graph::DualGraph;
use limitroots::limit_root_strata::fiber_inventory;
use limitroots::picard_fiber::{chi_diagnostics, riass_dimension, shat_fiber};
use limitroots::report;

/// Opaque curve handle.
pub struct LrCurve {
    graph: DualGraph,
}

/// Result status for every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LrStatus {
    /// Success.
    LrOk = 0,
    /// Malformed input text: curve JSON, preset name, or class spec.
    LrParseError = 1,
    /// Structurally valid input that fails a mathematical requirement.
    LrInvalidInput = 2,
    /// Instance exceeds a built-in size limit.
    LrSizeLimit = 3,
    /// A required pointer argument was NULL.
    LrNullPointer = 4,
    /// A string argument was not valid UTF-8.
    LrUtf8Error = 5,
    /// Unexpected internal failure.
    LrInternalError = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized: String = message.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap();
    });
}

fn status_of(e: &limitroots::Error) -> LrStatus {
    match e.exit_code() {
        1 => LrStatus::LrParseError,
        2 => LrStatus::LrInvalidInput,
        3 => LrStatus::LrSizeLimit,
        _ => LrStatus::LrInternalError,
    }
}

fn fail(e: &limitroots::Error) -> LrStatus {
    set_error(&e.to_string());
    status_of(e)
}

/// Runs `f` with panics converted to `LrInternalError`.
fn guarded(f: impl FnOnce() -> LrStatus) -> LrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            LrStatus::LrInternalError
        }
    }
}

/// # Safety
/// `ptr` must be non-NULL and point to a NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, LrStatus> {
    if ptr.is_null() {
        set_error("NULL string argument");
        return Err(LrStatus::LrNullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        LrStatus::LrUtf8Error
    })
}

fn write_string(out: *mut *mut c_char, text: String) -> LrStatus {
    if out.is_null() {
        set_error("NULL output pointer");
        return LrStatus::LrNullPointer;
    }
    let sanitized: String = text.chars().filter(|&c| c != '\0').collect();
    let c = CString::new(sanitized).unwrap();
    unsafe {
        *out = c.into_raw();
    }
    LrStatus::LrOk
}

unsafe fn curve_ref<'a>(curve: *const LrCurve) -> Result<&'a DualGraph, LrStatus> {
    if curve.is_null() {
        set_error("NULL curve handle");
        return Err(LrStatus::LrNullPointer);
    }
    Ok(&(*curve).graph)
}

/// Message for the most recent failure on this thread.  The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lr_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses a curve from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lr_curve_from_json(
    json: *const c_char,
    out: *mut *mut LrCurve,
) -> LrStatus {
    guarded(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("NULL output pointer");
            return LrStatus::LrNullPointer;
        }
        match DualGraph::from_json(text) {
            Ok(graph) => {
                *out = Box::into_raw(Box::new(LrCurve { graph }));
                LrStatus::LrOk
            }
            Err(e) => fail(&e),
        }
    })
}

/// Builds one of the named preset curves.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lr_curve_preset(
    name: *const c_char,
    out: *mut *mut LrCurve,
) -> LrStatus {
    guarded(|| {
        let text = match read_str(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("NULL output pointer");
            return LrStatus::LrNullPointer;
        }
        match DualGraph::preset(text) {
            Ok(graph) => {
                *out = Box::into_raw(Box::new(LrCurve { graph }));
                LrStatus::LrOk
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a curve handle.  NULL is ignored.
///
/// # Safety
/// `curve` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lr_curve_free(curve: *mut LrCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Arithmetic genus of the curve.
///
/// # Safety
/// `curve` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lr_curve_genus(curve: *const LrCurve, out: *mut u64) -> LrStatus {
    guarded(|| {
        let g = match curve_ref(curve) {
            Ok(g) => g,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("NULL output pointer");
            return LrStatus::LrNullPointer;
        }
        *out = g.genus();
        LrStatus::LrOk
    })
}

/// First Betti number of the dual graph.
///
/// # Safety
/// `curve` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lr_curve_betti1(curve: *const LrCurve, out: *mut u64) -> LrStatus {
    guarded(|| {
        let g = match curve_ref(curve) {
            Ok(g) => g,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("NULL output pointer");
            return LrStatus::LrNullPointer;
        }
        *out = g.betti1() as u64;
        LrStatus::LrOk
    })
}

/// Number of vertices (irreducible components).
///
/// # Safety
/// `curve` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lr_curve_vertex_count(
    curve: *const LrCurve,
    out: *mut u64,
) -> LrStatus {
    guarded(|| {
        let g = match curve_ref(curve) {
            Ok(g) => g,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("NULL output pointer");
            return LrStatus::LrNullPointer;
        }
        *out = g.vertex_count() as u64;
        LrStatus::LrOk
    })
}

/// Number of edges (nodes of the curve).
///
/// # Safety
/// `curve` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lr_curve_edge_count(
    curve: *const LrCurve,
    out: *mut u64,
) -> LrStatus {
    guarded(|| {
        let g = match curve_ref(curve) {
            Ok(g) => g,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("NULL output pointer");
            return LrStatus::LrNullPointer;
        }
        *out = g.edge_count() as u64;
        LrStatus::LrOk
    })
}

/// Limit-root fiber report as JSON.  `class_spec` uses the same syntax as
/// the command line: `zero`, `spin:l=<int>[,...]`, or a residue list.
///
/// # Safety
/// `curve` must be a live handle; `class_spec` must be NUL-terminated;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lr_limit_roots_json(
    curve: *const LrCurve,
    r: u64,
    class_spec: *const c_char,
    out: *mut *mut c_char,
) -> LrStatus {
    guarded(|| {
        let g = match curve_ref(curve) {
            Ok(g) => g,
            Err(s) => return s,
        };
        let spec_text = match read_str(class_spec) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let spec = match report::parse_class_spec(spec_text) {
            Ok(s) => s,
            Err(e) => return fail(&e),
        };
        match fiber_inventory(g, r, &spec) {
            Ok(fiber) => write_string(out, report::limit_roots_json(&fiber)),
            Err(e) => fail(&e),
        }
    })
}

/// Balanced multidegree inventory as JSON.
///
/// # Safety
/// `curve` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lr_balanced_json(
    curve: *const LrCurve,
    total_degree: i64,
    stably_only: bool,
    parallel: bool,
    out: *mut *mut c_char,
) -> LrStatus {
    guarded(|| {
        let g = match curve_ref(curve) {
            Ok(g) => g,
            Err(s) => return s,
        };
        match enumerate_balanced(g, total_degree, stably_only, parallel) {
            Ok(models) => write_string(
                out,
                report::balanced_json(g, total_degree, stably_only, &models),
            ),
            Err(e) => fail(&e),
        }
    })
}

/// Compactified Picard fiber report as JSON.
///
/// # Safety
/// `curve` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lr_shat_fiber_json(
    curve: *const LrCurve,
    r: u64,
    l: i64,
    parallel: bool,
    out: *mut *mut c_char,
) -> LrStatus {
    guarded(|| {
        let g = match curve_ref(curve) {
            Ok(g) => g,
            Err(s) => return s,
        };
        match shat_fiber(g, r, l, parallel) {
            Ok(fiber) => write_string(out, report::shat_json(&fiber)),
            Err(e) => fail(&e),
        }
    })
}

/// Two-component fiber dimension as JSON.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lr_riass_json(
    k: u64,
    r: u64,
    res1: u64,
    res2: u64,
    out: *mut *mut c_char,
) -> LrStatus {
    guarded(|| match riass_dimension(k, r, res1, res2) {
        Ok(outcome) => write_string(out, report::riass_json(&outcome)),
        Err(e) => fail(&e),
    })
}

/// Regularity diagnostics for the comparison map, as JSON.
///
/// # Safety
/// `curve` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lr_chi_json(
    curve: *const LrCurve,
    r: u64,
    l: i64,
    parallel: bool,
    out: *mut *mut c_char,
) -> LrStatus {
    guarded(|| {
        let g = match curve_ref(curve) {
            Ok(g) => g,
            Err(s) => return s,
        };
        match chi_diagnostics(g, r, l, parallel) {
            Ok(diag) => write_string(out, report::chi_json(&diag)),
            Err(e) => fail(&e),
        }
    })
}

/// Releases a string returned by this library.  NULL is ignored.
///
/// # Safety
/// `s` must come from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
