//! C ABI over `dporient`.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free` function. Every fallible call returns a [`DpStatus`];
//! on failure [`dp_last_error`] describes the problem. Strings returned
//! through out-parameters are NUL-terminated JSON owned by the caller and
//! released with [`dp_string_free`].
//!
//! Cap overrides use the `key=value,...` syntax of `DPORIENT_CAPS`; a null
//! pointer means "defaults plus the environment".

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use dporient::caps::Caps;
use dporient::certify::{certify, replay, Instance, Mode, Strategy, Verdict};
use dporient::correspondence::CorrespondenceAssignment;
use dporient::error::Error;
use dporient::fixtures::gen_fixture;
use dporient::io;
use dporient::nullstellensatz::eulerian_difference;
use dporient::solver::{solve, SolveOutcome};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    CapExceeded = 5,
    UnknownFixture = 6,
    ReplayFailed = 7,
    Panic = 8,
}

/// Outcome of [`dp_solve`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpSolveResult {
    Colorable = 0,
    NotColorable = 1,
    BudgetExhausted = 2,
}

/// An assignment plus an optional fixed orientation.
pub struct DpInstance {
    inner: Instance,
}

/// A certification verdict together with the assignment it was computed for.
pub struct DpVerdict {
    original: CorrespondenceAssignment,
    verdict: Verdict,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NUL removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(DpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let status = match e {
            Error::Parse(_) => DpStatus::Parse,
            Error::CapExceeded { .. } => DpStatus::CapExceeded,
            Error::UnknownFixture(_) => DpStatus::UnknownFixture,
            _ => DpStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DpStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            DpStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(DpStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(DpStatus::InvalidUtf8, e.to_string()))
}

unsafe fn read_caps(p: *const c_char) -> Result<Caps, Failure> {
    let base = Caps::from_env()?;
    if p.is_null() {
        return Ok(base);
    }
    Ok(base.with_overrides(read_str(p)?)?)
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(DpStatus::NullPointer, "null handle".into()))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(DpStatus::NullPointer, "null out-parameter".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_json(out: *mut *mut c_char, v: &serde_json::Value) -> Result<(), Failure> {
    let s = CString::new(v.to_string()).expect("JSON has no NUL");
    write_out(out, s.into_raw())
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn dp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn dp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an instance from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dp_instance_from_json(json: *const c_char, out: *mut *mut DpInstance) -> DpStatus {
    guard(|| {
        let v: serde_json::Value = serde_json::from_str(read_str(json)?).map_err(Error::from)?;
        let inner = io::instance_from_json(&v)?;
        write_out(out, Box::into_raw(Box::new(DpInstance { inner })))
    })
}

/// Builds a named fixture such as `c4_figure` or `toroidal_grid(4)`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dp_instance_from_fixture(name: *const c_char, seed: u64, out: *mut *mut DpInstance) -> DpStatus {
    guard(|| {
        let inner = gen_fixture(read_str(name)?, seed)?;
        write_out(out, Box::into_raw(Box::new(DpInstance { inner })))
    })
}

/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dp_instance_to_json(inst: *const DpInstance, out: *mut *mut c_char) -> DpStatus {
    guard(|| write_json(out, &io::instance_to_json(&deref(inst)?.inner)))
}

/// # Safety
/// `inst` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dp_instance_free(inst: *mut DpInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Searches for a coloring. On `Colorable`, `coloring_json` (if non-null)
/// receives an object mapping each 1-based vertex to its color.
///
/// # Safety
/// `inst` must be a live handle, `result` a valid pointer, and
/// `coloring_json` null or valid.
#[no_mangle]
pub unsafe extern "C" fn dp_solve(
    inst: *const DpInstance,
    budget: u64,
    result: *mut DpSolveResult,
    coloring_json: *mut *mut c_char,
) -> DpStatus {
    guard(|| {
        let outcome = solve(&deref(inst)?.inner.assignment, budget);
        let r = match &outcome {
            SolveOutcome::Colorable(f) => {
                if !coloring_json.is_null() {
                    write_json(coloring_json, &io::coloring_to_json(f))?;
                }
                DpSolveResult::Colorable
            }
            SolveOutcome::NotColorable => DpSolveResult::NotColorable,
            SolveOutcome::BudgetExhausted { .. } => DpSolveResult::BudgetExhausted,
        };
        write_out(result, r)
    })
}

/// Runs certification. `mode` is `auto`, `good`, `signable` or `zsignable`;
/// `strategy` is `bounded-first` or `exhaustive`. Null selects the default.
///
/// # Safety
/// `inst` must be a live handle, string arguments null or NUL-terminated,
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dp_certify(
    inst: *const DpInstance,
    mode: *const c_char,
    strategy: *const c_char,
    caps: *const c_char,
    out: *mut *mut DpVerdict,
) -> DpStatus {
    guard(|| {
        let inst = &deref(inst)?.inner;
        let mode = if mode.is_null() { Mode::Auto } else { Mode::parse(read_str(mode)?)? };
        let strategy = if strategy.is_null() { Strategy::BoundedFirst } else { Strategy::parse(read_str(strategy)?)? };
        let verdict = certify(inst, mode, strategy, &read_caps(caps)?);
        let v = DpVerdict { original: inst.assignment.clone(), verdict };
        write_out(out, Box::into_raw(Box::new(v)))
    })
}

/// Parses a verdict previously produced by [`dp_verdict_to_json`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dp_verdict_from_json(json: *const c_char, out: *mut *mut DpVerdict) -> DpStatus {
    guard(|| {
        let v: serde_json::Value = serde_json::from_str(read_str(json)?).map_err(Error::from)?;
        let (original, verdict) = io::verdict_from_json(&v)?;
        write_out(out, Box::into_raw(Box::new(DpVerdict { original, verdict })))
    })
}

/// Writes 1 to `certified` for a certificate and 0 for an inconclusive verdict.
///
/// # Safety
/// `v` must be a live handle and `certified` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dp_verdict_is_certified(v: *const DpVerdict, certified: *mut i32) -> DpStatus {
    guard(|| write_out(certified, deref(v)?.verdict.is_certified() as i32))
}

/// # Safety
/// `v` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dp_verdict_to_json(v: *const DpVerdict, out: *mut *mut c_char) -> DpStatus {
    guard(|| {
        let v = deref(v)?;
        write_json(out, &io::verdict_to_json(&v.original, &v.verdict))
    })
}

/// Re-checks a certificate from scratch. Inconclusive verdicts and failed
/// checks both return `ReplayFailed`.
///
/// # Safety
/// `v` must be a live handle and `caps` null or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn dp_verdict_replay(v: *const DpVerdict, caps: *const c_char) -> DpStatus {
    guard(|| {
        let v = deref(v)?;
        let caps = read_caps(caps)?;
        match &v.verdict {
            Verdict::Certified(c) => {
                replay(&v.original, c, &caps).map_err(|e| Failure(DpStatus::ReplayFailed, e.to_string()))
            }
            Verdict::Inconclusive(i) => Err(Failure(DpStatus::ReplayFailed, format!("inconclusive: {}", i.reason.name()))),
        }
    })
}

/// # Safety
/// `v` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dp_verdict_free(v: *mut DpVerdict) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Even and odd spanning Eulerian subdigraph counts of the instance
/// orientation (the fixed one, or the stored edge directions).
///
/// # Safety
/// `inst` must be a live handle, `caps` null or NUL-terminated, and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dp_euler_json(inst: *const DpInstance, caps: *const c_char, out: *mut *mut c_char) -> DpStatus {
    guard(|| {
        let inst = &deref(inst)?.inner;
        let d = inst.orientation.clone().unwrap_or_else(|| inst.assignment.stored_orientation());
        let diff = eulerian_difference(&d.digraph(), &inst.assignment.field(), read_caps(caps)?.euler_arcs)?;
        write_json(out, &io::euler_to_json(&diff))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn error_mapping() {
        assert_eq!(Failure::from(Error::Parse("x".into())).0, DpStatus::Parse);
        assert_eq!(Failure::from(Error::UnknownFixture("x".into())).0, DpStatus::UnknownFixture);
        assert_eq!(Failure::from(Error::DivisionByZero).0, DpStatus::InvalidInput);
    }

    #[test]
    fn panics_are_caught() {
        assert_eq!(guard(|| panic!("boom")), DpStatus::Panic);
        let msg = unsafe { CStr::from_ptr(dp_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "internal panic");
    }

    #[test]
    fn free_null_is_noop() {
        unsafe {
            dp_string_free(ptr::null_mut());
            dp_instance_free(ptr::null_mut());
            dp_verdict_free(ptr::null_mut());
        }
    }
}
