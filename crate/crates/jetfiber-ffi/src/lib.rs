//! C ABI for the jetfiber engine: opaque session handles, library-owned
//! UTF-8 strings, and integer status codes.
//!
//! Conventions: every exported string must be released with
//! [`jf_string_free`]; every session with [`jf_session_free`]. Functions
//! report failure through their [`JfStatus`] return value (or a null
//! pointer) and leave a human-readable message readable via
//! [`jf_last_error`] on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use jetfiber::cli::{decompose_report, expand_lines, graph_report};
use jetfiber::{run_paper_suite, Budget, CheckStatus, EngineError, Surface, TruncationSpec};

/// Status codes, numerically identical to the CLI exit codes: 0 success,
/// 1 verification failure, 2 step budget exhausted, 3 usage error.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JfStatus {
    Ok = 0,
    VerifyFailed = 1,
    BudgetExceeded = 2,
    Usage = 3,
}

/// An opaque verification session: a surface, a jet order, and the step
/// budget applied to every basis computation made through it.
pub struct JfSession {
    surface: Surface,
    m: u32,
    steps: Option<u64>,
}

impl JfSession {
    fn budget(&self) -> Budget {
        self.steps.map(Budget::new).unwrap_or_else(Budget::standard)
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let owned = CString::new(msg.replace('\0', " ")).expect("NUL bytes replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(owned));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn fail(status: JfStatus, msg: &str) -> JfStatus {
    set_error(msg);
    status
}

fn status_of(e: &EngineError) -> JfStatus {
    match e.exit_code() {
        1 => JfStatus::VerifyFailed,
        2 => JfStatus::BudgetExceeded,
        _ => JfStatus::Usage,
    }
}

/// Move a report string across the boundary.
fn export(text: String, out: *mut *mut c_char) -> JfStatus {
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            clear_error();
            JfStatus::Ok
        }
        Err(_) => fail(JfStatus::Usage, "report contains an interior NUL byte"),
    }
}

macro_rules! as_json {
    ($report:expr) => {
        serde_json::to_string(&$report).expect("reports are serializable")
    };
}

/// The crate version as a static NUL-terminated string. Never freed.
#[no_mangle]
pub extern "C" fn jf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The message of the most recent failure on this thread, or null if the
/// most recent call succeeded. The pointer stays valid until the next
/// jetfiber call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn jf_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(msg) => msg.as_ptr(),
        None => ptr::null(),
    })
}

/// Open a session on `surface` ("d40" or "d41") at jet order `m`.
/// Returns null (with the error readable via [`jf_last_error`]) on an
/// unknown surface name.
///
/// # Safety
/// `surface` must be null or point to a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn jf_session_new(surface: *const c_char, m: u32) -> *mut JfSession {
    if surface.is_null() {
        set_error("surface must not be null");
        return ptr::null_mut();
    }
    let name = match unsafe { CStr::from_ptr(surface) }.to_str() {
        Ok(s) => s,
        Err(_) => {
            set_error("surface name is not UTF-8");
            return ptr::null_mut();
        }
    };
    let surface = match name {
        "d40" => Surface::D40,
        "d41" => Surface::D41,
        other => {
            set_error(&format!("unknown surface {other:?}; expected \"d40\" or \"d41\""));
            return ptr::null_mut();
        }
    };
    clear_error();
    Box::into_raw(Box::new(JfSession { surface, m, steps: None }))
}

/// Replace the session's reduction-step budget. `steps` must be positive.
///
/// # Safety
/// `session` must be null or a pointer from [`jf_session_new`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn jf_session_set_budget(session: *mut JfSession, steps: u64) -> JfStatus {
    let Some(session) = (unsafe { session.as_mut() }) else {
        return fail(JfStatus::Usage, "session must not be null");
    };
    if steps == 0 {
        return fail(JfStatus::Usage, "budget must be positive");
    }
    session.steps = Some(steps);
    clear_error();
    JfStatus::Ok
}

/// Release a session. Null is ignored.
///
/// # Safety
/// `session` must be null or a pointer from [`jf_session_new`] that has
/// not already been freed.
#[no_mangle]
pub unsafe extern "C" fn jf_session_free(session: *mut JfSession) {
    if !session.is_null() {
        drop(unsafe { Box::from_raw(session) });
    }
}

/// Release a string returned by any jetfiber function. Null is ignored.
///
/// # Safety
/// `text` must be null or a string pointer returned by this library that
/// has not already been freed.
#[no_mangle]
pub unsafe extern "C" fn jf_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}

unsafe fn with_out<F>(
    session: *const JfSession,
    out: *mut *mut c_char,
    body: F,
) -> JfStatus
where
    F: FnOnce(&JfSession) -> Result<(String, JfStatus), EngineError>,
{
    let Some(session) = (unsafe { session.as_ref() }) else {
        return fail(JfStatus::Usage, "session must not be null");
    };
    if out.is_null() {
        return fail(JfStatus::Usage, "output pointer must not be null");
    }
    unsafe { *out = ptr::null_mut() };
    match body(session) {
        Ok((text, status)) => match export(text, out) {
            JfStatus::Ok if status != JfStatus::Ok => {
                fail(status, "verification failed; details are in the report")
            }
            other => other,
        },
        Err(e) => fail(status_of(&e), &e.to_string()),
    }
}

/// Write the jet equations of degrees 0..m as one newline-joined string.
/// Indices below `mod_p`/`mod_q`/`mod_r` (for x, y, z respectively) are
/// reduced away first; pass zeros to keep every term.
///
/// # Safety
/// `session` must be a live session pointer and `out_lines` must point to
/// writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn jf_expand_lines(
    session: *const JfSession,
    mod_p: u32,
    mod_q: u32,
    mod_r: u32,
    out_lines: *mut *mut c_char,
) -> JfStatus {
    unsafe {
        with_out(session, out_lines, |s| {
            let spec = (mod_p, mod_q, mod_r) != (0, 0, 0);
            let lines = expand_lines(
                s.surface,
                s.m,
                spec.then(|| TruncationSpec::new(mod_p, mod_q, mod_r)),
            );
            Ok((lines.join("\n"), JfStatus::Ok))
        })
    }
}

/// Write the decomposition report (components, dimensions, witnesses,
/// symmetry images, separations) as a single-line JSON document.
///
/// # Safety
/// `session` must be a live session pointer and `out_json` must point to
/// writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn jf_decompose_json(
    session: *const JfSession,
    out_json: *mut *mut c_char,
) -> JfStatus {
    unsafe {
        with_out(session, out_json, |s| {
            let report = decompose_report(s.surface, s.m, &mut s.budget())?;
            Ok((as_json!(report), JfStatus::Ok))
        })
    }
}

/// Write the intersection-poset report as a single-line JSON document.
/// Returns `VerifyFailed` (with the report still written) if the graph is
/// not the D4 star or a radical certificate fails.
///
/// # Safety
/// `session` must be a live session pointer and `out_json` must point to
/// writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn jf_graph_json(
    session: *const JfSession,
    out_json: *mut *mut c_char,
) -> JfStatus {
    unsafe {
        with_out(session, out_json, |s| {
            let report = graph_report(s.surface, s.m, &mut s.budget())?;
            let status = if report.verified() { JfStatus::Ok } else { JfStatus::VerifyFailed };
            Ok((as_json!(report), status))
        })
    }
}

/// Write the incidence graph in DOT format.
///
/// # Safety
/// `session` must be a live session pointer and `out_dot` must point to
/// writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn jf_graph_dot(
    session: *const JfSession,
    out_dot: *mut *mut c_char,
) -> JfStatus {
    unsafe {
        with_out(session, out_dot, |s| {
            let report = graph_report(s.surface, s.m, &mut s.budget())?;
            let status = if report.verified() { JfStatus::Ok } else { JfStatus::VerifyFailed };
            Ok((report.dot, status))
        })
    }
}

/// Run the full verification suite and write its report as a single-line
/// JSON document. Returns `VerifyFailed` if any check fails, and
/// `BudgetExceeded` if every check passes but some were skipped for
/// budget; the report is written in all three cases.
///
/// # Safety
/// `session` must be a live session pointer and `out_json` must point to
/// writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn jf_suite_json(
    session: *const JfSession,
    out_json: *mut *mut c_char,
) -> JfStatus {
    unsafe {
        with_out(session, out_json, |s| {
            let report = run_paper_suite(s.surface, s.m, &mut s.budget())?;
            let status = if report.checks.iter().any(|c| c.status == CheckStatus::Fail) {
                JfStatus::VerifyFailed
            } else if report.any_budget_skip() {
                JfStatus::BudgetExceeded
            } else {
                JfStatus::Ok
            };
            Ok((as_json!(report), status))
        })
    }
}
