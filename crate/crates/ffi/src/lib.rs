//! C ABI over the `legendrian` crate.
//!
//! Knots and sums are opaque handles created by `lg_*_new`/`lg_knot_from_json`
//! and released with the matching `_free`. Every fallible call returns an
//! `LgStatus`; on failure `lg_last_error()` holds a message for the calling
//! thread. Strings returned through `char **` outputs are owned by the caller
//! and must be released with `lg_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use legendrian::composite::{build_quotient, enumerate_fiber, SumSpec, Summand};
use legendrian::io::{parse_knot_file, DocError, KnotDocument};
use legendrian::render::{empty_diagram, render, RenderFormat, RenderModel, RenderSpec};
use legendrian::report::{sum_analysis, to_json};
use legendrian::simplicity::{canonical_form, criterion, peak_count_formula, simplicity_in_window, CriterionCase, SimplicityError};
use legendrian::{MountainRange, Point};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    SchemaError = 4,
    RangeInvalid = 5,
    InvalidSpec = 6,
    NotApplicable = 7,
    DomainError = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LgCriterionCase {
    NotSimple = 0,
    AllOnePeak = 1,
    TwoPeakPower = 2,
    ManyPeaksOnce = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LgRenderFormat {
    Ascii = 0,
    Svg = 1,
}

/// `S+^a S-^b (p x P1 # q x P2)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LgCanonicalForm {
    pub a: u64,
    pub b: u64,
    pub p: u64,
    pub q: u64,
}

/// A validated prime knot with its mountain range.
pub struct LgKnot {
    range: Arc<MountainRange>,
}

/// A connected sum of distinct knots with multiplicities.
pub struct LgSum {
    spec: SumSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

type Failure = (LgStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            LgStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            LgStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    (LgStatus::NullArgument, format!("{what} is null"))
}

fn doc_failure(e: DocError) -> Failure {
    let status = match &e {
        DocError::Parse { .. } => LgStatus::ParseError,
        DocError::Schema { .. } => LgStatus::SchemaError,
        DocError::RangeInvalid { .. } => LgStatus::RangeInvalid,
        _ => LgStatus::DomainError,
    };
    (status, e.to_string())
}

fn simplicity_failure(e: SimplicityError) -> Failure {
    let status = match e {
        SimplicityError::NotApplicable => LgStatus::NotApplicable,
        SimplicityError::InvalidSummand { .. } => LgStatus::InvalidSpec,
        _ => LgStatus::DomainError,
    };
    (status, e.to_string())
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (LgStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| (LgStatus::DomainError, "output contains NUL".to_string()))?;
    write_out(out, c.into_raw(), "out")
}

unsafe fn knot_ref<'a>(k: *const LgKnot) -> Result<&'a LgKnot, Failure> {
    k.as_ref().ok_or_else(|| null("knot"))
}

unsafe fn sum_ref<'a>(s: *const LgSum) -> Result<&'a LgSum, Failure> {
    s.as_ref().ok_or_else(|| null("sum"))
}

fn render_format(f: LgRenderFormat) -> RenderFormat {
    match f {
        LgRenderFormat::Ascii => RenderFormat::Ascii,
        LgRenderFormat::Svg => RenderFormat::Svg,
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a knot document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_knot_from_json(json: *const c_char, out: *mut *mut LgKnot) -> LgStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let doc = parse_knot_file(text.as_bytes()).map_err(doc_failure)?;
        let knot = Box::new(LgKnot {
            range: Arc::new(doc.to_range()),
        });
        write_out(out, Box::into_raw(knot), "out")
    })
}

/// Builds a knot from peak coordinates in ascending `r`. `genus < 0` means
/// unknown.
///
/// # Safety
/// `name` must be NUL-terminated; `tbs` and `rs` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn lg_knot_new(
    name: *const c_char,
    tbs: *const i64,
    rs: *const i64,
    len: usize,
    genus: i64,
    prime: bool,
    out: *mut *mut LgKnot,
) -> LgStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        if len > 0 && (tbs.is_null() || rs.is_null()) {
            return Err(null("peak arrays"));
        }
        let peaks: Vec<[i64; 2]> = (0..len).map(|i| [*tbs.add(i), *rs.add(i)]).collect();
        let genus = if genus < 0 {
            None
        } else {
            Some(u32::try_from(genus).map_err(|_| (LgStatus::SchemaError, "genus out of range".to_string()))?)
        };
        let doc = KnotDocument {
            name: name.to_string(),
            prime,
            genus,
            peaks,
        };
        // round-trip through the document parser for identical validation
        let doc = parse_knot_file(doc.to_canonical_string().as_bytes()).map_err(doc_failure)?;
        let knot = Box::new(LgKnot {
            range: Arc::new(doc.to_range()),
        });
        write_out(out, Box::into_raw(knot), "out")
    })
}

/// # Safety
/// `knot` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lg_knot_free(knot: *mut LgKnot) {
    if !knot.is_null() {
        drop(Box::from_raw(knot));
    }
}

/// Number of peaks; 0 for a null handle.
///
/// # Safety
/// `knot` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lg_knot_peak_count(knot: *const LgKnot) -> usize {
    knot.as_ref().map_or(0, |k| k.range.peaks.len())
}

/// # Safety
/// `knot` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_knot_contains(knot: *const LgKnot, tb: i64, r: i64, out: *mut bool) -> LgStatus {
    guard(|| {
        let k = knot_ref(knot)?;
        write_out(out, k.range.is_member(Point::new(tb, r)), "out")
    })
}

/// Canonical one-line knot document.
///
/// # Safety
/// `knot` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_knot_to_json(knot: *const LgKnot, out: *mut *mut c_char) -> LgStatus {
    guard(|| {
        let k = knot_ref(knot)?;
        write_string(out, KnotDocument::from_range(&k.range).to_canonical_string())
    })
}

/// # Safety
/// `knot` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_knot_render(
    knot: *const LgKnot,
    tb_min: i64,
    format: LgRenderFormat,
    out: *mut *mut c_char,
) -> LgStatus {
    guard(|| {
        let k = knot_ref(knot)?;
        let spec = RenderSpec {
            format: render_format(format),
            tb_min,
        };
        let bytes = render(&RenderModel::Range(&k.range), &spec);
        write_string(out, String::from_utf8(bytes).expect("renders are UTF-8"))
    })
}

/// Canonical form of the class at `(tb, r)` in `n` copies of a two-peak knot.
/// `*found` is false when no class of the sum sits at that point.
///
/// # Safety
/// `knot` must be a live handle; `found` and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_canonical_form(
    knot: *const LgKnot,
    n: u32,
    tb: i64,
    r: i64,
    found: *mut bool,
    out: *mut LgCanonicalForm,
) -> LgStatus {
    guard(|| {
        let k = knot_ref(knot)?;
        if found.is_null() || out.is_null() {
            return Err(null("out"));
        }
        let form = canonical_form(&k.range, i64::from(n), tb, r).map_err(simplicity_failure)?;
        match form {
            Some(c) => {
                write_out(found, true, "found")?;
                write_out(out, LgCanonicalForm { a: c.a, b: c.b, p: c.p, q: c.q }, "out")
            }
            None => {
                write_out(found, false, "found")?;
                write_out(out, LgCanonicalForm::default(), "out")
            }
        }
    })
}

/// Builds a sum from `len` knots with their counts. The knots are shared, so
/// they may be freed afterwards.
///
/// # Safety
/// `knots` and `counts` must hold `len` entries; every knot must be live.
#[no_mangle]
pub unsafe extern "C" fn lg_sum_new(
    knots: *const *const LgKnot,
    counts: *const usize,
    len: usize,
    out: *mut *mut LgSum,
) -> LgStatus {
    guard(|| {
        if len > 0 && (knots.is_null() || counts.is_null()) {
            return Err(null("summand arrays"));
        }
        let mut summands = Vec::with_capacity(len);
        for i in 0..len {
            let k = knot_ref(*knots.add(i))?;
            summands.push(Summand {
                range: Arc::clone(&k.range),
                count: *counts.add(i),
            });
        }
        let spec = SumSpec::new(summands).map_err(|e| (LgStatus::InvalidSpec, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(LgSum { spec })), "out")
    })
}

/// # Safety
/// `sum` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lg_sum_free(sum: *mut LgSum) {
    if !sum.is_null() {
        drop(Box::from_raw(sum));
    }
}

/// # Safety
/// `sum` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_sum_top_tb(sum: *const LgSum, out: *mut i64) -> LgStatus {
    guard(|| write_out(out, sum_ref(sum)?.spec.top_tb(), "out"))
}

/// # Safety
/// `sum` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_sum_criterion(
    sum: *const LgSum,
    simple: *mut bool,
    matched: *mut LgCriterionCase,
) -> LgStatus {
    guard(|| {
        let v = criterion(&sum_ref(sum)?.spec).map_err(simplicity_failure)?;
        let case = match v.matched_case {
            CriterionCase::AllOnePeak => LgCriterionCase::AllOnePeak,
            CriterionCase::TwoPeakPower => LgCriterionCase::TwoPeakPower,
            CriterionCase::ManyPeaksOnce => LgCriterionCase::ManyPeaksOnce,
            CriterionCase::None => LgCriterionCase::NotSimple,
        };
        if matched.is_null() {
            return Err(null("matched"));
        }
        write_out(simple, v.simple, "simple")?;
        write_out(matched, case, "matched")
    })
}

/// Number of peak classes of the sum.
///
/// # Safety
/// `sum` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_sum_peak_count(sum: *const LgSum, out: *mut u64) -> LgStatus {
    guard(|| write_out(out, peak_count_formula(&sum_ref(sum)?.spec), "out"))
}

/// Number of classes with invariants `(tb, r)`.
///
/// # Safety
/// `sum` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_sum_fiber_size(sum: *const LgSum, tb: i64, r: i64, out: *mut usize) -> LgStatus {
    guard(|| write_out(out, enumerate_fiber(&sum_ref(sum)?.spec, tb, r).len(), "out"))
}

/// Whether every point with `tb >= tb_min` carries a single class.
///
/// # Safety
/// `sum` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_sum_simple_in_window(sum: *const LgSum, tb_min: i64, out: *mut bool) -> LgStatus {
    guard(|| {
        let v = simplicity_in_window(&sum_ref(sum)?.spec, tb_min).map_err(simplicity_failure)?;
        write_out(out, v.simple_in_window, "out")
    })
}

/// JSON analysis of the window: criterion, quotient, nonsimple points.
///
/// # Safety
/// `sum` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_sum_report_json(sum: *const LgSum, tb_min: i64, out: *mut *mut c_char) -> LgStatus {
    guard(|| {
        let a = sum_analysis(&sum_ref(sum)?.spec, tb_min).map_err(simplicity_failure)?;
        write_string(out, to_json(&a))
    })
}

/// # Safety
/// `sum` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_sum_render(
    sum: *const LgSum,
    tb_min: i64,
    format: LgRenderFormat,
    out: *mut *mut c_char,
) -> LgStatus {
    guard(|| {
        let spec = &sum_ref(sum)?.spec;
        let format = render_format(format);
        let bytes = if tb_min > spec.top_tb() {
            empty_diagram(format)
        } else {
            let q = build_quotient(spec, tb_min).map_err(|e| (LgStatus::DomainError, e.to_string()))?;
            render(&RenderModel::Quotient(&q), &RenderSpec { format, tb_min })
        };
        write_string(out, String::from_utf8(bytes).expect("renders are UTF-8"))
    })
}

/// Null-terminated version string with static lifetime.
#[no_mangle]
pub extern "C" fn lg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

