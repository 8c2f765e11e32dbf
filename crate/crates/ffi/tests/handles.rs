use std::ffi::{CStr, CString};
use std::ptr;

use legendrian_ffi::*;

fn knot(json: &str) -> *mut LgKnot {
    let c = CString::new(json).unwrap();
    let mut k = ptr::null_mut();
    let status = unsafe { lg_knot_from_json(c.as_ptr(), &mut k) };
    assert_eq!(status, LgStatus::Ok, "{}", last_error());
    k
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(lg_last_error()) }.to_str().unwrap().to_string()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { lg_string_free(p) };
    s
}

const A: &str = r#"{"name":"A","prime":true,"genus":2,"peaks":[[0,-2],[0,2]]}"#;
const B: &str = r#"{"name":"B","prime":true,"genus":3,"peaks":[[0,-4],[0,0],[0,4]]}"#;
const C: &str = r#"{"name":"C","prime":true,"genus":1,"peaks":[[1,0]]}"#;

#[test]
fn knot_round_trip() {
    let a = knot(A);
    assert_eq!(unsafe { lg_knot_peak_count(a) }, 2);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { lg_knot_to_json(a, &mut out) }, LgStatus::Ok);
    assert_eq!(take_string(out), format!("{A}\n"));
    let mut member = false;
    assert_eq!(unsafe { lg_knot_contains(a, -2, 0, &mut member) }, LgStatus::Ok);
    assert!(member);
    assert_eq!(unsafe { lg_knot_contains(a, -1, 0, &mut member) }, LgStatus::Ok);
    assert!(!member);
    unsafe { lg_knot_free(a) };
}

#[test]
fn error_codes() {
    let mut k = ptr::null_mut();
    let bad = CString::new("{\"name\":").unwrap();
    assert_eq!(unsafe { lg_knot_from_json(bad.as_ptr(), &mut k) }, LgStatus::ParseError);
    assert!(last_error().contains("line 1"));
    let unordered = CString::new(r#"{"name":"A","prime":true,"genus":null,"peaks":[[0,2],[0,-2]]}"#).unwrap();
    assert_eq!(unsafe { lg_knot_from_json(unordered.as_ptr(), &mut k) }, LgStatus::SchemaError);
    assert!(last_error().contains("peaks[1]"));
    let misplaced = CString::new(r#"{"name":"A","prime":true,"genus":null,"peaks":[[0,0],[-1,1]]}"#).unwrap();
    assert_eq!(unsafe { lg_knot_from_json(misplaced.as_ptr(), &mut k) }, LgStatus::RangeInvalid);
    assert_eq!(unsafe { lg_knot_from_json(ptr::null(), &mut k) }, LgStatus::NullArgument);
    assert_eq!(unsafe { lg_knot_peak_count(ptr::null()) }, 0);
    let mut x = 0i64;
    assert_eq!(unsafe { lg_sum_top_tb(ptr::null(), &mut x) }, LgStatus::NullArgument);
}

#[test]
fn knot_from_arrays() {
    let name = CString::new("B").unwrap();
    let tbs = [0i64, 0, 0];
    let rs = [-4i64, 0, 4];
    let mut k = ptr::null_mut();
    let st = unsafe { lg_knot_new(name.as_ptr(), tbs.as_ptr(), rs.as_ptr(), 3, 3, true, &mut k) };
    assert_eq!(st, LgStatus::Ok);
    assert_eq!(unsafe { lg_knot_peak_count(k) }, 3);
    unsafe { lg_knot_free(k) };
    // genus 0 forces tb + |r| <= -1
    let st = unsafe { lg_knot_new(name.as_ptr(), tbs.as_ptr(), rs.as_ptr(), 3, 0, true, &mut k) };
    assert_eq!(st, LgStatus::RangeInvalid);
}

#[test]
fn sums() {
    let (a, b, c) = (knot(A), knot(B), knot(C));
    let mut b2 = ptr::null_mut();
    assert_eq!(unsafe { lg_sum_new([b as *const LgKnot].as_ptr(), [2usize].as_ptr(), 1, &mut b2) }, LgStatus::Ok);
    unsafe { lg_knot_free(b) };

    let mut simple = true;
    let mut case = LgCriterionCase::AllOnePeak;
    assert_eq!(unsafe { lg_sum_criterion(b2, &mut simple, &mut case) }, LgStatus::Ok);
    assert!(!simple);
    assert_eq!(case, LgCriterionCase::NotSimple);
    let mut peaks = 0u64;
    assert_eq!(unsafe { lg_sum_peak_count(b2, &mut peaks) }, LgStatus::Ok);
    assert_eq!(peaks, 6);
    let mut size = 0usize;
    assert_eq!(unsafe { lg_sum_fiber_size(b2, 1, 0, &mut size) }, LgStatus::Ok);
    assert_eq!(size, 2);
    let mut top = 0i64;
    assert_eq!(unsafe { lg_sum_top_tb(b2, &mut top) }, LgStatus::Ok);
    assert_eq!(top, 1);
    assert_eq!(unsafe { lg_sum_simple_in_window(b2, -1, &mut simple) }, LgStatus::Ok);
    assert!(!simple);

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { lg_sum_report_json(b2, -1, &mut out) }, LgStatus::Ok);
    let json = take_string(out);
    assert!(json.contains("\"simple_in_window\": false"));
    assert_eq!(unsafe { lg_sum_render(b2, -1, LgRenderFormat::Svg, &mut out) }, LgStatus::Ok);
    assert!(take_string(out).contains("data-tb=\"1\" data-r=\"0\" data-fiber=\"2\""));
    assert_eq!(unsafe { lg_sum_render(b2, 5, LgRenderFormat::Ascii, &mut out) }, LgStatus::Ok);
    assert_eq!(take_string(out), "(empty diagram)\n");
    unsafe { lg_sum_free(b2) };

    let mut ac = ptr::null_mut();
    let knots = [a as *const LgKnot, c as *const LgKnot];
    assert_eq!(unsafe { lg_sum_new(knots.as_ptr(), [1usize, 1].as_ptr(), 2, &mut ac) }, LgStatus::Ok);
    assert_eq!(unsafe { lg_sum_criterion(ac, &mut simple, &mut case) }, LgStatus::Ok);
    assert!(simple);
    assert_eq!(case, LgCriterionCase::ManyPeaksOnce);
    unsafe { lg_sum_free(ac) };

    let mut dup = ptr::null_mut();
    let same = [a as *const LgKnot, a as *const LgKnot];
    assert_eq!(unsafe { lg_sum_new(same.as_ptr(), [1usize, 1].as_ptr(), 2, &mut dup) }, LgStatus::InvalidSpec);
    assert_eq!(unsafe { lg_sum_new(knots.as_ptr(), [0usize, 1].as_ptr(), 2, &mut dup) }, LgStatus::InvalidSpec);
    unsafe {
        lg_knot_free(a);
        lg_knot_free(c);
    }
}

#[test]
fn canonical_forms() {
    let a = knot(A);
    let mut found = false;
    let mut form = LgCanonicalForm::default();
    assert_eq!(unsafe { lg_canonical_form(a, 2, -3, 0, &mut found, &mut form) }, LgStatus::Ok);
    assert!(found);
    assert_eq!(form, LgCanonicalForm { a: 4, b: 0, p: 2, q: 0 });
    assert_eq!(unsafe { lg_canonical_form(a, 2, 2, 0, &mut found, &mut form) }, LgStatus::Ok);
    assert!(!found);
    let c = knot(C);
    assert_eq!(unsafe { lg_canonical_form(c, 2, 0, 0, &mut found, &mut form) }, LgStatus::DomainError);
    unsafe {
        lg_knot_free(a);
        lg_knot_free(c);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(lg_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
