use std::ffi::{CStr, CString};
use std::ptr;

use dporient_ffi::*;

fn take(s: *mut std::ffi::c_char) -> serde_json::Value {
    assert!(!s.is_null());
    let v = serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    unsafe { dp_string_free(s) };
    v
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(dp_last_error()) }.to_str().unwrap().to_owned()
}

fn fixture(name: &str, seed: u64) -> *mut DpInstance {
    let name = CString::new(name).unwrap();
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { dp_instance_from_fixture(name.as_ptr(), seed, &mut inst) }, DpStatus::Ok);
    inst
}

#[test]
fn c4_is_not_colorable() {
    let inst = fixture("c4_figure", 0);
    let mut r = DpSolveResult::Colorable;
    let mut json = ptr::null_mut();
    unsafe {
        assert_eq!(dp_solve(inst, 1_000_000, &mut r, &mut json), DpStatus::Ok);
        assert_eq!(r, DpSolveResult::NotColorable);
        assert!(json.is_null());
        dp_instance_free(inst);
    }
}

#[test]
fn grid_certifies_and_replays_through_json() {
    let inst = fixture("toroidal_grid(3)", 2);
    let mode = CString::new("good").unwrap();
    let mut v = ptr::null_mut();
    let mut ok = 0;
    unsafe {
        assert_eq!(dp_certify(inst, mode.as_ptr(), ptr::null(), ptr::null(), &mut v), DpStatus::Ok);
        assert_eq!(dp_verdict_is_certified(v, &mut ok), DpStatus::Ok);
        assert_eq!(ok, 1);
        assert_eq!(dp_verdict_replay(v, ptr::null()), DpStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(dp_verdict_to_json(v, &mut s), DpStatus::Ok);
        let text = CString::new(take(s).to_string()).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(dp_verdict_from_json(text.as_ptr(), &mut back), DpStatus::Ok);
        assert_eq!(dp_verdict_replay(back, ptr::null()), DpStatus::Ok);
        dp_verdict_free(back);
        dp_verdict_free(v);

        let mut r = DpSolveResult::NotColorable;
        let mut json = ptr::null_mut();
        assert_eq!(dp_solve(inst, 10_000_000, &mut r, &mut json), DpStatus::Ok);
        assert_eq!(r, DpSolveResult::Colorable);
        assert_eq!(take(json).as_object().unwrap().len(), 36);
        dp_instance_free(inst);
    }
}

#[test]
fn inconclusive_verdict_does_not_replay() {
    let inst = fixture("c4_figure", 0);
    let mut v = ptr::null_mut();
    let mut ok = 1;
    unsafe {
        assert_eq!(dp_certify(inst, ptr::null(), ptr::null(), ptr::null(), &mut v), DpStatus::Ok);
        assert_eq!(dp_verdict_is_certified(v, &mut ok), DpStatus::Ok);
        assert_eq!(ok, 0);
        assert_eq!(dp_verdict_replay(v, ptr::null()), DpStatus::ReplayFailed);
        assert!(last_error().starts_with("inconclusive"));
        dp_verdict_free(v);
        dp_instance_free(inst);
    }
}

#[test]
fn json_round_trip_and_euler() {
    let inst = fixture("w6_signable", 0);
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(dp_instance_to_json(inst, &mut s), DpStatus::Ok);
        let text = CString::new(take(s).to_string()).unwrap();
        let mut copy = ptr::null_mut();
        assert_eq!(dp_instance_from_json(text.as_ptr(), &mut copy), DpStatus::Ok);
        let mut e = ptr::null_mut();
        assert_eq!(dp_euler_json(copy, ptr::null(), &mut e), DpStatus::Ok);
        let euler = take(e);
        assert!(euler["ee"].as_u64().unwrap() >= 1);
        dp_instance_free(copy);
        dp_instance_free(inst);
    }
}

#[test]
fn error_codes() {
    let bad = CString::new("{not json").unwrap();
    let unknown = CString::new("petersen").unwrap();
    let caps = CString::new("euler_arcs=1").unwrap();
    let bad_mode = CString::new("sideways").unwrap();
    let mut inst = ptr::null_mut();
    unsafe {
        assert_eq!(dp_instance_from_json(bad.as_ptr(), &mut inst), DpStatus::Parse);
        assert!(!last_error().is_empty());
        assert_eq!(dp_instance_from_json(ptr::null(), &mut inst), DpStatus::NullPointer);
        assert_eq!(dp_instance_from_fixture(unknown.as_ptr(), 0, &mut inst), DpStatus::UnknownFixture);
        assert!(inst.is_null());

        let inst = fixture("c4_figure", 0);
        assert!(last_error().is_empty());
        let mut out = ptr::null_mut();
        assert_eq!(dp_euler_json(inst, caps.as_ptr(), &mut out), DpStatus::CapExceeded);
        assert_eq!(dp_instance_to_json(inst, ptr::null_mut()), DpStatus::NullPointer);
        let mut v = ptr::null_mut();
        assert_eq!(dp_certify(inst, bad_mode.as_ptr(), ptr::null(), ptr::null(), &mut v), DpStatus::Parse);
        assert_eq!(dp_instance_to_json(ptr::null(), &mut out), DpStatus::NullPointer);
        dp_instance_free(inst);
    }
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/dporient.h")).unwrap();
    for name in ["dp_certify", "dp_solve", "dp_last_error", "typedef struct DpInstance DpInstance", "DP_STATUS_OK"] {
        assert!(header.contains(name), "{name}");
    }
}
