//! C ABI over `nodal-theta`.
//!
//! Every function returns an [`NtStatus`]; results go through out-pointers.
//! On failure the message is kept per thread and can be copied out with
//! [`nt_last_error_message`]. Curves are opaque handles created by
//! [`nt_curve_new`] and released by [`nt_curve_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nodal_theta::abel_jacobi::PeriodMap;
use nodal_theta::curve::NodalCurveSpec;
use nodal_theta::riemann::{count_zeros, locate_zeros, RiemannConstants, ThetaPullback};
use nodal_theta::theta::{theta_char, Characteristic, GeneralizedTheta, ModularParameter, SeriesPolicy};
use nodal_theta::{Complex64, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NtComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for NtComplex {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<NtComplex> for Complex64 {
    fn from(z: NtComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Status codes. `NT_STATUS_OK` is zero; everything else is an error.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    NonConvergent = 3,
    Pole = 4,
    Quadrature = 5,
    /// Shift `c` is non-generic or a contour meets a zero; try another `c`.
    Degenerate = 6,
    Newton = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Curve parameters. `series_tol` and `series_max_index` control the
/// truncation of the theta series.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NtCurveSpec {
    pub tau: NtComplex,
    pub p1: NtComplex,
    pub p2: NtComplex,
    pub z0: NtComplex,
    pub q0: NtComplex,
    pub delta: f64,
    pub eps: f64,
    pub quad_tol: f64,
    pub series_tol: f64,
    pub series_max_index: usize,
}

/// Opaque curve with its period map.
pub struct NtCurve {
    map: PeriodMap,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> NtStatus {
    match e {
        Error::InvalidParameter(_) | Error::Config(_) => NtStatus::InvalidParameter,
        Error::NonConvergent { .. } => NtStatus::NonConvergent,
        Error::PoleAt(_) | Error::PoleProximity { .. } => NtStatus::Pole,
        Error::QuadratureFailure { .. } => NtStatus::Quadrature,
        Error::BranchStepTooLarge(_)
        | Error::ContourThroughZero { .. }
        | Error::ZeroCollision(_)
        | Error::DegenerateC(_) => NtStatus::Degenerate,
        Error::NewtonDivergence { .. } | Error::JacobianSingular(_) | Error::NoValidEpsilon => NtStatus::Newton,
    }
}

struct Fail(NtStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(NtStatus::NullPointer, format!("null pointer: {what}"))
}

/// Run `f`, turning errors and panics into a status and the thread's last
/// error message.
fn guard<F>(f: F) -> NtStatus
where
    F: FnOnce() -> Result<(), Fail>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NtStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            NtStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn curve_ref<'a>(curve: *const NtCurve) -> Result<&'a NtCurve, Fail> {
    curve.as_ref().ok_or_else(|| null("curve"))
}

/// Copy the last error message of this thread into `buf` (NUL-terminated).
/// `len` receives the message length without the terminator; it is 0 when
/// the last call succeeded.
///
/// # Safety
/// `buf` must be writable for `cap` bytes or be NULL with `cap == 0`;
/// `len` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nt_last_error_message(buf: *mut c_char, cap: usize, len: *mut usize) -> NtStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    let bytes = msg.as_ref().map(|m| m.as_bytes()).unwrap_or(&[]);
    if !len.is_null() {
        len.write(bytes.len());
    }
    if cap == 0 {
        return if bytes.is_empty() { NtStatus::Ok } else { NtStatus::BufferTooSmall };
    }
    if buf.is_null() {
        return NtStatus::NullPointer;
    }
    let n = bytes.len().min(cap - 1);
    ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
    buf.add(n).write(0);
    if n < bytes.len() {
        NtStatus::BufferTooSmall
    } else {
        NtStatus::Ok
    }
}

/// `θ[a;b](z, τ)` with the default series policy.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nt_theta(a: f64, b: f64, z: NtComplex, tau: NtComplex, out: *mut NtComplex) -> NtStatus {
    guard(|| {
        let tau = ModularParameter::new(tau.into())?;
        let v = theta_char(Characteristic::new(a, b), z.into(), tau, &SeriesPolicy::default())?;
        write(out, v.into(), "out")
    })
}

/// Validate `spec` and build its period map. The handle must be released
/// with [`nt_curve_free`].
///
/// # Safety
/// `spec` must point to a valid spec and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nt_curve_new(spec: *const NtCurveSpec, out: *mut *mut NtCurve) -> NtStatus {
    guard(|| {
        let s = spec.as_ref().ok_or_else(|| null("spec"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let policy = SeriesPolicy::new(s.series_tol, s.series_max_index)?;
        let spec = NodalCurveSpec {
            tau: s.tau.into(),
            p1: s.p1.into(),
            p2: s.p2.into(),
            z0: s.z0.into(),
            q0: s.q0.into(),
            delta: s.delta,
            eps: s.eps,
            policy,
            quad_tol: s.quad_tol,
        };
        let map = PeriodMap::new(spec.validate()?)?;
        out.write(Box::into_raw(Box::new(NtCurve { map })));
        Ok(())
    })
}

/// Release a curve. NULL is ignored.
///
/// # Safety
/// `curve` must come from [`nt_curve_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nt_curve_free(curve: *mut NtCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Real periods `r1`, `r2` of the third-kind differential.
///
/// # Safety
/// `curve` must be a live handle; `r1`, `r2` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nt_curve_periods(curve: *const NtCurve, r1: *mut f64, r2: *mut f64) -> NtStatus {
    guard(|| {
        let p = curve_ref(curve)?.map.curve().periods();
        write(r1, p.r1, "r1")?;
        write(r2, p.r2, "r2")
    })
}

/// `φ(P)` on the parallelogram slit along `[p1, p2]`.
///
/// # Safety
/// `curve` must be a live handle; `phi1`, `phi2` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nt_phi(curve: *const NtCurve, p: NtComplex, phi1: *mut NtComplex, phi2: *mut NtComplex) -> NtStatus {
    guard(|| {
        let v = curve_ref(curve)?.map.phi_slit(p.into())?;
        write(phi1, v.phi1.into(), "phi1")?;
        write(phi2, v.phi2.into(), "phi2")
    })
}

/// `Θ(z, w) = θ[0;0](z) + θ[-r1;r2](z)·e(w)` for the curve's periods.
///
/// # Safety
/// `curve` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nt_big_theta(curve: *const NtCurve, z: NtComplex, w: NtComplex, out: *mut NtComplex) -> NtStatus {
    guard(|| {
        let c = curve_ref(curve)?.map.curve();
        let p = c.periods();
        let v = GeneralizedTheta::new(c.tau(), p.r1, p.r2, c.policy()).value(z.into(), w.into())?;
        write(out, v.into(), "out")
    })
}

/// `𝔗_c(P) = Θ(φ(P) - c)`.
///
/// # Safety
/// `curve` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nt_frak_t(curve: *const NtCurve, c1: NtComplex, c2: NtComplex, p: NtComplex, out: *mut NtComplex) -> NtStatus {
    guard(|| {
        let map = &curve_ref(curve)?.map;
        let v = ThetaPullback::new(map, (c1.into(), c2.into())).value(p.into())?;
        write(out, v.into(), "out")
    })
}

/// Number of zeros of `𝔗_c` in the parallelogram.
///
/// # Safety
/// `curve` must be a live handle; `n` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nt_count_zeros(curve: *const NtCurve, c1: NtComplex, c2: NtComplex, n: *mut i64) -> NtStatus {
    guard(|| {
        let map = &curve_ref(curve)?.map;
        let count = count_zeros(&ThetaPullback::new(map, (c1.into(), c2.into())))?;
        write(n, count.n, "n")
    })
}

/// The two zeros of `𝔗_c`, written to `zeros[0]` and `zeros[1]`.
///
/// # Safety
/// `curve` must be a live handle; `zeros` valid for two writes.
#[no_mangle]
pub unsafe extern "C" fn nt_locate_zeros(curve: *const NtCurve, c1: NtComplex, c2: NtComplex, zeros: *mut NtComplex) -> NtStatus {
    guard(|| {
        let map = &curve_ref(curve)?.map;
        let z = locate_zeros(&ThetaPullback::new(map, (c1.into(), c2.into())))?;
        if zeros.is_null() {
            return Err(null("zeros"));
        }
        zeros.write(z[0].into());
        zeros.add(1).write(z[1].into());
        Ok(())
    })
}

/// `κ1` and `κ2(ε)`.
///
/// # Safety
/// `curve` must be a live handle; `kappa1`, `kappa2` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nt_riemann_constants(curve: *const NtCurve, eps: f64, kappa1: *mut NtComplex, kappa2: *mut NtComplex) -> NtStatus {
    guard(|| {
        let map = &curve_ref(curve)?.map;
        let k = RiemannConstants::new(map, eps, map.curve().quad_tol())?;
        write(kappa1, k.kappa1.into(), "kappa1")?;
        write(kappa2, k.kappa2.into(), "kappa2")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resample_errors_share_one_status() {
        for e in [
            Error::BranchStepTooLarge(1e-13),
            Error::ContourThroughZero { winding: 0.5 },
            Error::ZeroCollision("x".into()),
            Error::DegenerateC("x".into()),
        ] {
            assert!(e.is_resample());
            assert_eq!(status_of(&e), NtStatus::Degenerate);
        }
    }

    #[test]
    fn panics_become_a_status() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, NtStatus::Panic);
        let msg = LAST_ERROR.with(|e| e.borrow().clone()).unwrap();
        assert_eq!(msg.to_str().unwrap(), "panic: boom");
    }
}
