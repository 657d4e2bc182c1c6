//! C ABI over opaque handles.
//!
//! Objects cross the boundary as JSON documents in the same schema the CLI
//! reads. Every function returns a `DsStatus`; on failure the message is
//! available from `ds_last_error` until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dirspace::algebra::{check_preservation, finite_of, powerspace_report, theory_order, PowerTheory};
use dirspace::elem::Elem;
use dirspace::ideal::{check_adjunction, LowerMap};
use dirspace::report::{Bound, Error, Report, DEFAULT_SAMPLE};
use dirspace::schema::parse_document;
use dirspace::space::{classify, way_below, Kind, Space};
use dirspace::suite::{exit_code, run_suite, suite, SuiteOptions};

/// A parsed space.
pub struct DsSpace(Space);

/// A finished report.
pub struct DsReport(Report);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Precondition = 5,
    Unsupported = 6,
    Budget = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DsKind {
    NotDirected = 0,
    Directed = 1,
    Continuous = 2,
    Algebraic = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DsTheory {
    Lower = 0,
    Upper = 1,
    Convex = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(DsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let s = match e {
            Error::Parse { .. } => DsStatus::Parse,
            Error::Domain(_) => DsStatus::Domain,
            Error::Precondition(_) => DsStatus::Precondition,
            Error::Unsupported(_) => DsStatus::Unsupported,
            Error::Budget(_) => DsStatus::Budget,
        };
        Fail(s, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> DsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DsStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            DsStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(DsStatus::NullArgument, "null argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail(DsStatus::InvalidUtf8, e.to_string()))
}

unsafe fn elem(p: *const c_char) -> Result<Elem, Fail> {
    let v: serde_json::Value = serde_json::from_str(text(p)?).map_err(|e| Fail(DsStatus::Parse, e.to_string()))?;
    Elem::from_json(&v).map_err(|m| Fail(DsStatus::Parse, m))
}

unsafe fn space<'a>(p: *const DsSpace) -> Result<&'a Space, Fail> {
    p.as_ref().map(|s| &s.0).ok_or_else(null)
}

fn bound(depth: u32) -> Result<Bound, Fail> {
    if depth == 0 {
        return Err(Fail(DsStatus::Domain, "depth must be at least 1".into()));
    }
    Ok(Bound { depth: depth as usize, sample: DEFAULT_SAMPLE.min(depth as usize) })
}

fn theory(t: DsTheory) -> PowerTheory {
    match t {
        DsTheory::Lower => PowerTheory::Lower,
        DsTheory::Upper => PowerTheory::Upper,
        DsTheory::Convex => PowerTheory::Convex,
    }
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    *out = v;
    Ok(())
}

unsafe fn put_report(out: *mut *mut DsReport, r: Report) -> Result<(), Fail> {
    put(out, Box::into_raw(Box::new(DsReport(r))))
}

fn owned(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message for the last failed call on this thread; empty after success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ds_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse a schema document holding a "space" or "poset" field.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_space_parse(json: *const c_char, out: *mut *mut DsSpace) -> DsStatus {
    guard(|| {
        let d = parse_document(text(json)?)?;
        let s = d.the_space()?;
        put(out, Box::into_raw(Box::new(DsSpace(s))))
    })
}

/// # Safety
/// `s` must come from `ds_space_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ds_space_free(s: *mut DsSpace) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live space handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_space_classify(s: *const DsSpace, depth: u32, out: *mut DsKind) -> DsStatus {
    guard(|| {
        let k = match classify(space(s)?, bound(depth)?).kind {
            Kind::NotDirected => DsKind::NotDirected,
            Kind::Directed => DsKind::Directed,
            Kind::Continuous => DsKind::Continuous,
            Kind::Algebraic => DsKind::Algebraic,
        };
        put(out, k)
    })
}

/// Whether `x ≪ y`; elements are JSON values such as `3` or `"top"`.
///
/// # Safety
/// Pointers must be valid; `x` and `y` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ds_space_way_below(
    s: *const DsSpace,
    x: *const c_char,
    y: *const c_char,
    depth: u32,
    out: *mut bool,
) -> DsStatus {
    guard(|| {
        let w = way_below(space(s)?, &elem(x)?, &elem(y)?, bound(depth)?)?;
        put(out, w.verdict)
    })
}

/// The ⇓ ⊣ sup adjunction report.
///
/// # Safety
/// `s` must be a live space handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_space_adjunction(s: *const DsSpace, depth: u32, out: *mut *mut DsReport) -> DsStatus {
    guard(|| {
        let r = check_adjunction(space(s)?, bound(depth)?, LowerMap::WayBelow);
        put_report(out, r)
    })
}

/// Subset model against the free algebra, for a finite poset.
///
/// # Safety
/// `s` must be a live space handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_powerspace(s: *const DsSpace, t: DsTheory, budget: u64, out: *mut *mut DsReport) -> DsStatus {
    guard(|| {
        let x = finite_of(&space(s)?.carrier).ok_or_else(|| Fail(DsStatus::Unsupported, "powerspaces need a finite poset".into()))?;
        let t = theory(t);
        put_report(out, powerspace_report(&x, t, &theory_order(t), budget as usize))
    })
}

/// Checks (i)–(v) for the free algebra functor over `s`.
///
/// # Safety
/// `s` must be a live space handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_preservation(s: *const DsSpace, t: DsTheory, depth: u32, out: *mut *mut DsReport) -> DsStatus {
    guard(|| {
        let r = check_preservation(space(s)?, theory(t), bound(depth)?)?;
        put_report(out, r)
    })
}

/// 1 when no check failed, 0 when refuted, -1 for a null handle.
///
/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn ds_report_passed(r: *const DsReport) -> i32 {
    match r.as_ref() {
        None => -1,
        Some(r) => r.0.passed() as i32,
    }
}

/// The report as JSON; release with `ds_string_free`.
///
/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn ds_report_json(r: *const DsReport) -> *mut c_char {
    match r.as_ref() {
        None => ptr::null_mut(),
        Some(r) => owned(serde_json::to_string(&r.0).unwrap_or_default()),
    }
}

/// # Safety
/// `r` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ds_report_free(r: *mut DsReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ds_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Run the "paper" or "quick" suite. `exit` receives the CLI exit code and
/// `json` the outcomes (release with `ds_string_free`).
///
/// # Safety
/// `name` must be NUL-terminated; `exit` and `json` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ds_suite_run(name: *const c_char, seed: u64, jobs: u32, exit: *mut i32, json: *mut *mut c_char) -> DsStatus {
    guard(|| {
        let name = text(name)?;
        let cs = suite(name)?;
        let o = SuiteOptions { seed, jobs: jobs.max(1) as usize, quick: name == "quick", ..SuiteOptions::default() };
        let outcomes = run_suite(&cs, &o);
        put(exit, exit_code(&outcomes))?;
        put(json, owned(serde_json::to_string(&outcomes).unwrap_or_default()))
    })
}
