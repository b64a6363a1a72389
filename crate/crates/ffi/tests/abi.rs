use std::ffi::{CStr, CString};
use std::ptr;

use nilscroll_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ns_last_error()) }.to_str().unwrap().to_owned()
}

fn example(name: &str) -> *mut NsScroll {
    let name = CString::new(name).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ns_example_new(name.as_ptr(), &mut out) }, NsStatus::Ok, "{}", last_error());
    assert!(!out.is_null());
    out
}

#[test]
fn para_complex_ops() {
    let z = NsParaComplex { re: 3.0, im: 1.0 };
    let mut inv = NsParaComplex { re: 0.0, im: 0.0 };
    assert_eq!(unsafe { ns_pc_inverse(z, &mut inv) }, NsStatus::Ok);
    let one = ns_pc_mul(z, inv);
    assert!((one.re - 1.0).abs() < 1e-14 && one.im.abs() < 1e-14);

    let mut r = inv;
    assert_eq!(unsafe { ns_pc_sqrt(z, &mut r) }, NsStatus::Ok);
    let sq = ns_pc_mul(r, r);
    assert!((sq.re - 3.0).abs() < 1e-12 && (sq.im - 1.0).abs() < 1e-12);

    // i' has a negative null part so no root; l = (1 + i')/2 is a zero divisor.
    assert_eq!(unsafe { ns_pc_sqrt(NsParaComplex { re: 0.0, im: 1.0 }, &mut r) }, NsStatus::NoRoot);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { ns_pc_inverse(NsParaComplex { re: 0.5, im: 0.5 }, &mut r) }, NsStatus::NotInvertible);
    assert_eq!(unsafe { ns_pc_inverse(z, ptr::null_mut()) }, NsStatus::NullPointer);

    let e = ns_pc_exp(NsParaComplex { re: 0.0, im: 0.7 });
    assert!((e.re - 0.7f64.cosh()).abs() < 1e-14 && (e.im - 0.7f64.sinh()).abs() < 1e-14);
}

#[test]
fn group_ops() {
    let p = NsPoint { x1: 0.3, x2: -1.2, x3: 2.0 };
    let q = NsPoint { x1: 1.1, x2: 0.4, x3: -0.5 };
    let e = ns_group_mul(p, ns_group_inv(p));
    assert!(e.x1.abs() < 1e-15 && e.x2.abs() < 1e-15 && e.x3.abs() < 1e-15);
    let pq = ns_group_mul(p, q);
    let qp = ns_group_mul(q, p);
    assert_eq!((pq.x1, pq.x2), (qp.x1, qp.x2));
    assert!((pq.x3 - qp.x3 - (p.x1 * q.x2 - p.x2 * q.x1)).abs() < 1e-14);
}

#[test]
fn example_lifecycle() {
    let f = example("circle");
    let (mut s0, mut s1) = (0.0, 0.0);
    assert_eq!(unsafe { ns_scroll_span(f, &mut s0, &mut s1) }, NsStatus::Ok);
    assert!(s0 < s1);

    let mut p = NsPoint { x1: 0.0, x2: 0.0, x3: 0.0 };
    assert_eq!(unsafe { ns_scroll_eval(f, 0.2, 0.5, &mut p) }, NsStatus::Ok);
    assert!(p.x1.is_finite() && p.x2.is_finite() && p.x3.is_finite());

    let (mut closed, mut fd) = (1.0, 1.0);
    assert_eq!(unsafe { ns_scroll_mean_curvature(f, 0.2, 0.5, &mut closed, &mut fd) }, NsStatus::Ok);
    assert!(closed.abs() < 1e-8, "{closed}");
    assert!(fd.abs() < 1e-4, "{fd}");

    let mut json = ptr::null_mut();
    let mut passed = 0;
    let status = unsafe { ns_scroll_verify_json(f, -1.0, 1.0, 9, -1.0, 1.0, 9, &mut json, &mut passed) };
    assert_eq!(status, NsStatus::Ok, "{}", last_error());
    assert_eq!(passed, 1);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["name"], "scroll");
    unsafe {
        ns_string_free(json);
        ns_scroll_free(f);
        ns_scroll_free(ptr::null_mut());
        ns_string_free(ptr::null_mut());
    }
}

#[test]
fn construct_from_json() {
    let req = CString::new(r#"{"branch":"beta-half","ruling_spec":"parabola","params":{"b":"0"}}"#).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { ns_construct_json(req.as_ptr(), 0.0, &mut f) }, NsStatus::Ok, "{}", last_error());
    let mut p = NsPoint { x1: 0.0, x2: 0.0, x3: 0.0 };
    assert_eq!(unsafe { ns_scroll_eval(f, 0.0, 0.0, &mut p) }, NsStatus::Ok);
    unsafe { ns_scroll_free(f) };

    let bad = CString::new(r#"{"branch":"beta-half","ruling_spec":"constant"}"#).unwrap();
    let mut g = ptr::NonNull::<NsScroll>::dangling().as_ptr();
    assert_eq!(unsafe { ns_construct_json(bad.as_ptr(), 0.0, &mut g) }, NsStatus::InvalidArgument);
    assert!(g.is_null());

    let chart = CString::new(r#"{"branch":"ar-data","params":{"q":"const:0"}}"#).unwrap();
    assert_eq!(unsafe { ns_construct_json(chart.as_ptr(), 0.0, &mut g) }, NsStatus::Degenerate);
}

#[test]
fn argument_errors() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ns_example_new(ptr::null(), &mut out) }, NsStatus::NullPointer);
    let name = CString::new("sphere").unwrap();
    assert_eq!(unsafe { ns_example_new(name.as_ptr(), &mut out) }, NsStatus::UnknownName);
    assert!(last_error().contains("sphere"));
    let mut p = NsPoint { x1: 0.0, x2: 0.0, x3: 0.0 };
    assert_eq!(unsafe { ns_scroll_eval(ptr::null(), 0.0, 0.0, &mut p) }, NsStatus::NullPointer);

    let f = example("parabola:1");
    let (mut json, mut passed) = (ptr::null_mut(), 0);
    let status = unsafe { ns_scroll_verify_json(f, 1.0, 0.0, 9, 0.0, 1.0, 9, &mut json, &mut passed) };
    assert_eq!(status, NsStatus::InvalidArgument);
    assert!(json.is_null());
    unsafe { ns_scroll_free(f) };
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(ns_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api_and_compiles() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/nilscroll.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in [
        "ns_example_new",
        "ns_construct_json",
        "ns_scroll_free",
        "ns_scroll_eval",
        "ns_scroll_mean_curvature",
        "ns_scroll_verify_json",
        "ns_string_free",
        "ns_last_error",
        "ns_pc_sqrt",
        "ns_group_mul",
        "typedef struct NsScroll NsScroll",
        "NS_STATUS_DEGENERATE = 6",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"nilscroll.h\"\nint main(void) { NsScroll *f = 0; NsStatus s = ns_example_new(\"circle\", &f); ns_scroll_free(f); return (int)s; }\n",
    )
    .unwrap();
    let Ok(status) = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", concat!(env!("CARGO_MANIFEST_DIR"), "/include")])
        .arg(&src)
        .status()
    else {
        eprintln!("no C compiler; header syntax not checked");
        return;
    };
    assert!(status.success());
}
