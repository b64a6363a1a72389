//! C ABI for nilscroll.
//!
//! Every function returns an [`NsStatus`]; on failure a message is available from
//! [`ns_last_error`] on the same thread. Scrolls are opaque [`NsScroll`] handles released
//! with [`ns_scroll_free`]; strings returned through out-pointers are released with
//! [`ns_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nilscroll::construct::{construct_example, Example};
use nilscroll::grid::Grid;
use nilscroll::io::ConstructionRequest;
use nilscroll::nil3_core::{group_inv, group_mul};
use nilscroll::tolerances::{Tolerances, FD_STEP_FIRST, FD_STEP_SECOND};
use nilscroll::verify::{fd_mean_curvature, verify_minimal};
use nilscroll::{Error, Nil3Point, ParaComplex};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownName = 3,
    NoRoot = 4,
    NotInvertible = 5,
    Degenerate = 6,
    NotLorentz = 7,
    ConstructionFailed = 8,
    Io = 9,
    Panic = 99,
}

/// A para-complex number `re + i' im` with `i'^2 = 1`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsParaComplex {
    pub re: f64,
    pub im: f64,
}

/// A point of Nil3 in exponential coordinates.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsPoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

/// Opaque scroll handle.
pub struct NsScroll {
    scroll: nilscroll::scroll::NullScroll,
    span: (f64, f64),
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> NsStatus {
    match e {
        Error::NoRoot => NsStatus::NoRoot,
        Error::NotInvertible => NsStatus::NotInvertible,
        Error::UnknownName(_) => NsStatus::UnknownName,
        Error::NotLorentz => NsStatus::NotLorentz,
        Error::Io(_) => NsStatus::Io,
        Error::Construction(_)
        | Error::BetaNotHalf(_)
        | Error::BetaZero(_)
        | Error::ZeroB3(_)
        | Error::ZeroC3
        | Error::AlphaVanishes(_) => NsStatus::ConstructionFailed,
        e if e.is_degenerate() => NsStatus::Degenerate,
        _ => NsStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (NsStatus, String)>) -> NsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            NsStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            NsStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (NsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_err(name: &str) -> (NsStatus, String) {
    (NsStatus::NullPointer, format!("{name} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, (NsStatus, String)> {
    if p.is_null() {
        return Err(null_err(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (NsStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, (NsStatus, String)> {
    p.as_mut().ok_or_else(|| null_err(name))
}

unsafe fn scroll_ref<'a>(p: *const NsScroll) -> Result<&'a NsScroll, (NsStatus, String)> {
    p.as_ref().ok_or_else(|| null_err("scroll"))
}

/// Message of the last failed call on this thread; empty after a successful call. The
/// pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ns_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ns_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a gallery example (`circle`, `parabola:0`, `vertical-plane:1.2`, ...) through
/// its constructor.
///
/// # Safety
/// `name` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ns_example_new(name: *const c_char, out: *mut *mut NsScroll) -> NsStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let ex = Example::parse(read_str(name, "name")?).map_err(lib_err)?;
        let built = construct_example(ex, Default::default()).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(NsScroll { scroll: built.scroll, span: built.span }));
        Ok(())
    })
}

/// Builds a scroll from a construction request in JSON. `velocity_tolerance <= 0`
/// selects the default.
///
/// # Safety
/// `request_json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ns_construct_json(request_json: *const c_char, velocity_tolerance: f64, out: *mut *mut NsScroll) -> NsStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let req = ConstructionRequest::from_json(read_str(request_json, "request_json")?).map_err(lib_err)?;
        let tol = if velocity_tolerance > 0.0 { velocity_tolerance } else { Tolerances::default().get("velocity_check") };
        let built = req.build(tol).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(NsScroll { scroll: built.scroll, span: built.span }));
        Ok(())
    })
}

/// Releases a scroll; null is accepted.
///
/// # Safety
/// `scroll` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ns_scroll_free(scroll: *mut NsScroll) {
    if !scroll.is_null() {
        drop(Box::from_raw(scroll));
    }
}

/// Parameter interval of the base curve.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ns_scroll_span(scroll: *const NsScroll, s0: *mut f64, s1: *mut f64) -> NsStatus {
    guard(|| {
        let f = scroll_ref(scroll)?;
        *out_ref(s0, "s0")? = f.span.0;
        *out_ref(s1, "s1")? = f.span.1;
        Ok(())
    })
}

/// `f(s, t)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ns_scroll_eval(scroll: *const NsScroll, s: f64, t: f64, out: *mut NsPoint) -> NsStatus {
    guard(|| {
        let f = scroll_ref(scroll)?;
        let p = f.scroll.eval(s, t);
        *out_ref(out, "out")? = NsPoint { x1: p.x1, x2: p.x2, x3: p.x3 };
        Ok(())
    })
}

/// Closed-form and finite-difference mean curvature at `(s, t)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ns_scroll_mean_curvature(scroll: *const NsScroll, s: f64, t: f64, closed: *mut f64, fd: *mut f64) -> NsStatus {
    guard(|| {
        let f = scroll_ref(scroll)?;
        let d = f.scroll.fundamental_data(s, t).map_err(lib_err)?;
        let h = fd_mean_curvature(|a, b| Ok(f.scroll.eval(a, b)), s, t, FD_STEP_FIRST, FD_STEP_SECOND).map_err(lib_err)?;
        *out_ref(closed, "closed")? = d.mean_curvature;
        *out_ref(fd, "fd")? = h * d.g12.signum();
        Ok(())
    })
}

/// Runs the minimality check on a grid and returns the report as JSON.
///
/// # Safety
/// Pointers must be valid; `*json` must be released with [`ns_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ns_scroll_verify_json(
    scroll: *const NsScroll,
    s0: f64,
    s1: f64,
    ns: u32,
    t0: f64,
    t1: f64,
    nt: u32,
    json: *mut *mut c_char,
    passed: *mut c_int,
) -> NsStatus {
    guard(|| {
        let f = scroll_ref(scroll)?;
        let json = out_ref(json, "json")?;
        *json = ptr::null_mut();
        let passed = out_ref(passed, "passed")?;
        let grid: Grid = format!("{s0}:{s1}:{ns},{t0}:{t1}:{nt}").parse().map_err(lib_err)?;
        let report = verify_minimal(&f.scroll, "scroll", &grid, &Tolerances::default());
        let text = serde_json::to_string(&report).map_err(|e| (NsStatus::InvalidArgument, e.to_string()))?;
        *passed = c_int::from(report.passed());
        *json = CString::new(text).expect("JSON has no nul bytes").into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library; null is accepted.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ns_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn pc(z: NsParaComplex) -> ParaComplex {
    ParaComplex::new(z.re, z.im)
}

fn ns_pc(z: ParaComplex) -> NsParaComplex {
    NsParaComplex { re: z.re, im: z.im }
}

#[no_mangle]
pub extern "C" fn ns_pc_mul(a: NsParaComplex, b: NsParaComplex) -> NsParaComplex {
    ns_pc(pc(a) * pc(b))
}

#[no_mangle]
pub extern "C" fn ns_pc_exp(z: NsParaComplex) -> NsParaComplex {
    ns_pc(pc(z).exp())
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ns_pc_inverse(z: NsParaComplex, out: *mut NsParaComplex) -> NsStatus {
    guard(|| {
        let w = pc(z).inverse().map_err(lib_err)?;
        *out_ref(out, "out")? = ns_pc(w);
        Ok(())
    })
}

/// Principal square root (both null components non-negative).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ns_pc_sqrt(z: NsParaComplex, out: *mut NsParaComplex) -> NsStatus {
    guard(|| {
        let w = pc(z).sqrt().map_err(lib_err)?;
        *out_ref(out, "out")? = ns_pc(w);
        Ok(())
    })
}

fn pt(p: NsPoint) -> Nil3Point {
    Nil3Point::new(p.x1, p.x2, p.x3)
}

fn ns_pt(p: Nil3Point) -> NsPoint {
    NsPoint { x1: p.x1, x2: p.x2, x3: p.x3 }
}

/// Group product `p * q`.
#[no_mangle]
pub extern "C" fn ns_group_mul(p: NsPoint, q: NsPoint) -> NsPoint {
    ns_pt(group_mul(pt(p), pt(q)))
}

#[no_mangle]
pub extern "C" fn ns_group_inv(p: NsPoint) -> NsPoint {
    ns_pt(group_inv(pt(p)))
}
