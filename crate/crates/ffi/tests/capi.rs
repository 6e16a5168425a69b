use std::ffi::{c_char, CStr};
use std::ptr;

use nodal_theta_ffi::*;

fn c(re: f64, im: f64) -> NtComplex {
    NtComplex { re, im }
}

fn square() -> NtCurveSpec {
    NtCurveSpec {
        tau: c(0.0, 1.0),
        p1: c(0.62, 0.55),
        p2: c(0.31, 0.38),
        z0: c(0.15, 0.8),
        q0: c(0.0, 0.0),
        delta: 0.05,
        eps: 0.05,
        quad_tol: 1e-12,
        series_tol: 1e-14,
        series_max_index: 64,
    }
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let mut len = 0usize;
    unsafe { nt_last_error_message(buf.as_mut_ptr(), buf.len(), &mut len) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

struct Curve(*mut NtCurve);

impl Drop for Curve {
    fn drop(&mut self) {
        unsafe { nt_curve_free(self.0) }
    }
}

fn curve(spec: NtCurveSpec) -> Curve {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { nt_curve_new(&spec, &mut h) }, NtStatus::Ok);
    assert!(!h.is_null());
    Curve(h)
}

#[test]
fn odd_theta_vanishes_at_origin() {
    let mut v = c(1.0, 1.0);
    assert_eq!(unsafe { nt_theta(0.5, 0.5, c(0.0, 0.0), c(0.0, 1.0), &mut v) }, NtStatus::Ok);
    assert!(v.re.hypot(v.im) < 1e-12);
}

#[test]
fn theta_at_bad_tau_reports_invalid_parameter() {
    let mut v = c(0.0, 0.0);
    let s = unsafe { nt_theta(0.0, 0.0, c(0.1, 0.0), c(0.0, -1.0), &mut v) };
    assert_eq!(s, NtStatus::InvalidParameter);
    assert!(last_error().contains("tau"), "{}", last_error());
}

#[test]
fn periods_match_closed_form() {
    let h = curve(square());
    let (mut r1, mut r2) = (0.0, 0.0);
    assert_eq!(unsafe { nt_curve_periods(h.0, &mut r1, &mut r2) }, NtStatus::Ok);
    // r1 = -Im(p1 - p2)/Im τ, r2 = Re(p1 - p2) + r1·Re τ
    assert!((r1 + 0.17).abs() < 1e-15);
    assert!((r2 - 0.31).abs() < 1e-15);
}

#[test]
fn zeros_of_frak_t() {
    let h = curve(square());
    let (c1, c2) = (c(0.37, 0.21), c(0.13, -0.05));
    let mut n = 0i64;
    assert_eq!(unsafe { nt_count_zeros(h.0, c1, c2, &mut n) }, NtStatus::Ok);
    assert_eq!(n, 2);
    let mut z = [c(0.0, 0.0); 2];
    assert_eq!(unsafe { nt_locate_zeros(h.0, c1, c2, z.as_mut_ptr()) }, NtStatus::Ok);
    for q in z {
        let mut v = c(1.0, 0.0);
        assert_eq!(unsafe { nt_frak_t(h.0, c1, c2, q, &mut v) }, NtStatus::Ok);
        assert!(v.re.hypot(v.im) < 1e-9);
    }
}

#[test]
fn frak_t_is_big_theta_of_phi_minus_c() {
    let h = curve(square());
    let (c1, c2) = (c(0.37, 0.21), c(0.13, -0.05));
    let p = c(0.8, 0.2);
    let (mut f1, mut f2, mut a, mut b) = (c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
    unsafe {
        assert_eq!(nt_phi(h.0, p, &mut f1, &mut f2), NtStatus::Ok);
        assert_eq!(nt_big_theta(h.0, c(f1.re - c1.re, f1.im - c1.im), c(f2.re - c2.re, f2.im - c2.im), &mut a), NtStatus::Ok);
        assert_eq!(nt_frak_t(h.0, c1, c2, p, &mut b), NtStatus::Ok);
    }
    assert!((a.re - b.re).hypot(a.im - b.im) < 1e-10 * b.re.hypot(b.im));
}

#[test]
fn riemann_constants_first_coordinate() {
    let h = curve(square());
    let (mut k1, mut k2) = (c(0.0, 0.0), c(0.0, 0.0));
    assert_eq!(unsafe { nt_riemann_constants(h.0, 0.05, &mut k1, &mut k2) }, NtStatus::Ok);
    assert!(k1.re.is_finite() && k2.im.is_finite());
}

#[test]
fn invalid_spec_is_rejected() {
    let mut spec = square();
    spec.p2 = spec.p1;
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { nt_curve_new(&spec, &mut h) }, NtStatus::InvalidParameter);
    assert!(h.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn null_pointers() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { nt_curve_new(ptr::null(), &mut h) }, NtStatus::NullPointer);
    let spec = square();
    assert_eq!(unsafe { nt_curve_new(&spec, ptr::null_mut()) }, NtStatus::NullPointer);
    let mut r = 0.0;
    assert_eq!(unsafe { nt_curve_periods(ptr::null(), &mut r, &mut r) }, NtStatus::NullPointer);
    assert_eq!(last_error(), "null pointer: curve");
    unsafe { nt_curve_free(ptr::null_mut()) };
}

#[test]
fn error_message_truncates_and_clears() {
    let mut v = c(0.0, 0.0);
    unsafe { nt_theta(0.0, 0.0, c(0.0, 0.0), c(0.0, 0.0), &mut v) };
    let mut len = 0usize;
    assert_eq!(unsafe { nt_last_error_message(ptr::null_mut(), 0, &mut len) }, NtStatus::BufferTooSmall);
    assert!(len > 8);
    let mut small = [0 as c_char; 5];
    assert_eq!(unsafe { nt_last_error_message(small.as_mut_ptr(), 5, ptr::null_mut()) }, NtStatus::BufferTooSmall);
    assert_eq!(unsafe { CStr::from_ptr(small.as_ptr()) }.to_bytes().len(), 4);

    assert_eq!(unsafe { nt_theta(0.0, 0.0, c(0.0, 0.0), c(0.0, 1.0), &mut v) }, NtStatus::Ok);
    assert_eq!(unsafe { nt_last_error_message(ptr::null_mut(), 0, &mut len) }, NtStatus::Ok);
    assert_eq!(len, 0);
}
